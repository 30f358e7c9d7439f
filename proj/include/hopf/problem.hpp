#pragma once

#include <optional>
#include <string>

#include "hopf/expr.hpp"

namespace hopf {

struct ProblemOptions {
    double eig_tol = 1e-8; // relative purity tolerance for "zero real part"
    double res_tol = 1e-9; // relative tolerance for the master residual check
};

// Parsed problem file: vector field, frozen parameter values, equilibrium
// request (explicit values verified against tolerance, or a Newton guess),
// requested coefficient level, tolerance overrides.
struct ProblemSpec {
    VectorFieldSpec field;
    RVec parameter_values;
    std::optional<RVec> equilibrium_values;
    std::optional<RVec> equilibrium_guess;
    int level = 1;
    ProblemOptions options;
};

// Reads and validates the JSON problem document:
//   {"variables": [...], "parameters": {name: value, ...}, "equations": [...],
//    "equilibrium": {"values": [...]} | {"guess": [...]},
//    "order": 1|2|3|4, "options": {"eig_tol": x, "res_tol": x}}
// Unknown keys are rejected with their key path.
ProblemSpec parse_problem(const std::string& json_text, const std::string& origin);
ProblemSpec load_problem(const std::string& path);

} // namespace hopf
