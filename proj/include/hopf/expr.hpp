#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopf/errors.hpp"
#include "hopf/types.hpp"

namespace hopf {

enum class node_kind : unsigned char {
    constant, variable, parameter, negate, add, subtract, multiply, divide, power, call
};

enum class func_kind : unsigned char { sin, cos, exp, log, sqrt };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression node. Built only through the factory functions, which
// apply the simplification rules (constant folding, 0+e, 0*e, 1*e, e^1, e^0,
// nested negation collapse) so that repeated differentiation stays bounded.
class Expr {
public:
    node_kind kind;
    double value = 0.0;   // constant
    int index = 0;        // variable / parameter
    int exponent = 0;     // power (integer, possibly negative)
    func_kind func = func_kind::sin;
    ExprPtr a, b;         // children; unary nodes use a only

    static ExprPtr constant(double v);
    static ExprPtr variable(int index);
    static ExprPtr parameter(int index);
    static ExprPtr negate(ExprPtr e);
    static ExprPtr add(ExprPtr lhs, ExprPtr rhs);
    static ExprPtr sub(ExprPtr lhs, ExprPtr rhs);
    static ExprPtr mul(ExprPtr lhs, ExprPtr rhs);
    static ExprPtr div(ExprPtr lhs, ExprPtr rhs);
    static ExprPtr pow(ExprPtr base, int exponent);
    static ExprPtr call(func_kind f, ExprPtr arg);

    bool is_constant(double v) const { return kind == node_kind::constant && value == v; }
};

bool expr_equal(const ExprPtr& x, const ExprPtr& y);
std::string to_string(const ExprPtr& e);

// Parses the expression grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' signed-integer)?
//   base   := number | identifier | identifier '(' expr ')' | '(' expr ')'
// against the declared variable and parameter names. Unknown identifiers,
// non-integer exponents and malformed input raise parse_error with a 1-based
// line:column location.
ExprPtr parse_expression(std::string_view source,
                         std::span<const std::string> variables,
                         std::span<const std::string> parameters);

double evaluate(const ExprPtr& e, std::span<const double> variables,
                std::span<const double> parameters);

// Exact symbolic derivative with respect to one phase variable.
ExprPtr differentiate(const ExprPtr& e, int variable_index);

// A parsed vector field x' = f(x, mu): n >= 2 phase variables, m >= 0 frozen
// parameters, one expression per component. Immutable after construction.
class VectorFieldSpec {
public:
    VectorFieldSpec(std::vector<std::string> variables,
                    std::vector<std::string> parameters,
                    const std::vector<std::string>& equation_sources);

    VectorFieldSpec(std::vector<std::string> variables,
                    std::vector<std::string> parameters,
                    std::vector<ExprPtr> equations);

    int dimension() const { return static_cast<int>(variables_.size()); }
    int parameter_count() const { return static_cast<int>(parameters_.size()); }

    const std::vector<std::string>& variables() const { return variables_; }
    const std::vector<std::string>& parameters() const { return parameters_; }
    const std::vector<ExprPtr>& equations() const { return equations_; }
    const std::vector<std::string>& sources() const { return sources_; }

    int parameter_index(const std::string& name) const; // -1 when absent

    RVec evaluate_field(const RVec& x, const RVec& mu) const;
    RMat jacobian_at(const RVec& x, const RVec& mu) const;

private:
    void validate_names() const;

    std::vector<std::string> variables_;
    std::vector<std::string> parameters_;
    std::vector<ExprPtr> equations_;
    std::vector<std::string> sources_;
    std::vector<std::vector<ExprPtr>> jac_; // [i][j] = d f_i / d x_j
};

} // namespace hopf
