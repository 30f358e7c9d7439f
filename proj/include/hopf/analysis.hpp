#pragma once

#include <map>
#include <string>
#include <vector>

#include "hopf/engine.hpp"
#include "hopf/explicit_formulas.hpp"
#include "hopf/problem.hpp"

namespace hopf {

struct AnalysisReport {
    RVec equilibrium;
    double equilibrium_residual = 0.0;
    Spectrum spectrum;
    double omega0 = 0.0;
    CVec q, p;
    int level = 1;
    std::array<cx, 4> G{};
    std::array<double, 4> l{};
    std::vector<std::string> caveats;
    double master_residual = 0.0;
    std::map<std::pair<int, int>, double> per_jk_residual;
    std::vector<std::string> warnings;
    double duration_ms = 0.0; // measured; serialized as 0 to keep reports byte-stable
    std::vector<SolveDiagnostic> diagnostics;
    CenterManifoldTable table;
};

// Resolves the equilibrium request: explicit values are verified against the
// residual tolerance, a guess is refined by Newton.
RVec refine_equilibrium(const ProblemSpec& spec);

// Full pipeline: equilibrium -> Taylor model of order 2k+1 -> spectrum ->
// critical pair -> center-manifold recursion -> Lyapunov coefficients.
AnalysisReport analyze(const ProblemSpec& spec);

enum class report_format { json, text };

// Deterministic serialization: stable key order, 17 significant digits in
// JSON, 12 in the text table. Complex values are [re, im] pairs.
std::string emit_report(const AnalysisReport& report, report_format format);

struct SweepRow {
    double param = 0.0;
    bool ok = false;
    std::string error;
    double eta = 0.0;
    std::array<double, 4> l{};
    int level = 0;
    RVec equilibrium;
};

struct LocateResult {
    std::string target;
    bool ok = false;
    double zero = 0.0;
    int iterations = 0;
    double residual = 0.0;
    std::string message;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<LocateResult> zeros;
    int level = 0;
};

// Grid sweep over one declared parameter. In continuation mode (default) the
// equilibrium is Newton-started from the previous successful row and the
// critical eigenvalue is tracked; rows where the analysis fails are marked
// and the sweep continues. With a locate target, each sign change is refined
// by the secant method (bisection fallback after 20 non-contracting steps)
// until |target| <= 1e-10 or 60 iterations.
SweepResult sweep(const ProblemSpec& spec, const std::string& parameter, double from, double to,
                  int steps, const std::string& locate_target, bool independent);

std::string emit_sweep(const SweepResult& result, report_format format);

TransversalityReport run_transversality(const ProblemSpec& spec);
std::string emit_transversality(const TransversalityReport& report, report_format format);

struct CheckResult {
    AnalysisReport report;
    std::vector<std::pair<std::string, bool>> checks; // description, passed
    bool all_passed = true;
    std::vector<std::string> notes;
};

// analyze plus the full invariant battery: master residual, conjugate
// symmetry, resonant orthogonality, bordered-solve diagnostics, the explicit
// low-order formulas, and (for planar fields) the scalar normal-form oracle.
CheckResult check_problem(const ProblemSpec& spec);
std::string emit_check(const CheckResult& result);

} // namespace hopf
