#pragma once

#include <map>
#include <vector>

#include "hopf/expr.hpp"
#include "hopf/types.hpp"

namespace hopf {

// Exponent vector of a partial derivative, one entry per phase variable.
struct MultiIndex {
    std::vector<int> e;

    int order() const {
        int s = 0;
        for (int v : e) s += v;
        return s;
    }
    bool operator<(const MultiIndex& o) const { return e < o.e; }
    bool operator==(const MultiIndex& o) const { return e == o.e; }
};

double factorial(int k);
double multi_factorial(const MultiIndex& a); // product of per-entry factorials

// Taylor data of F(x) = f(x0 + x, mu0) at the equilibrium: for every
// multi-index a with 1 <= |a| <= max_order the scaled coefficient
// c_{i,a} = (d^a F_i at 0) / a!, kept sparse (all-zero rows pruned). The
// first-order block is the Jacobian A; the order-0 block is the equilibrium
// residual and must be below tolerance.
class HomogeneousModel {
public:
    HomogeneousModel(int n, int max_order, RVec value_at_origin,
                     std::map<MultiIndex, RVec> coefficients);

    int dimension() const { return n_; }
    int max_order() const { return max_order_; }
    const RVec& value_at_origin() const { return f0_; }
    double equilibrium_residual() const { return norm_inf(f0_); }
    const std::map<MultiIndex, RVec>& coefficients() const { return coeff_; }
    const RMat& jacobian_matrix() const { return jac_; }
    double coefficient_scale() const { return scale_; } // max(1, max |c_{i,a}|)

private:
    int n_, max_order_;
    RVec f0_;
    std::map<MultiIndex, RVec> coeff_;
    RMat jac_;
    double scale_;
};

// Extracts all partials of f(., mu) at the equilibrium through max_order by
// repeated symbolic differentiation (each multi-index reached once, along
// non-decreasing variable order) followed by point evaluation. Requires
// ||f(x0,mu)||_inf <= residual_tol_rel * (1 + ||f_x||_inf).
HomogeneousModel taylor_model(const VectorFieldSpec& field, const RVec& equilibrium,
                              const RVec& parameter_values, int max_order,
                              double residual_tol_rel = 1e-10);

// Complex-multilinear extension of the real symmetric derivative form of the
// given order, applied to `order` complex vectors. Uses the sparse coefficient
// store with multinomial weights.
CVec apply_form(const HomogeneousModel& model, int order, const std::vector<CVec>& args);

// Reference implementation summing the full n^order derivative tensor; used
// to cross-check apply_form.
CVec apply_form_direct(const HomogeneousModel& model, int order, const std::vector<CVec>& args);

RMat jacobian(const HomogeneousModel& model);

} // namespace hopf
