#include "hopf/mlforms.hpp"

#include <algorithm>
#include <cmath>

namespace hopf {

double factorial(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

double multi_factorial(const MultiIndex& a) {
    double r = 1.0;
    for (int v : a.e) r *= factorial(v);
    return r;
}

HomogeneousModel::HomogeneousModel(int n, int max_order, RVec value_at_origin,
                                   std::map<MultiIndex, RVec> coefficients)
    : n_(n), max_order_(max_order), f0_(std::move(value_at_origin)),
      coeff_(std::move(coefficients)), jac_(n, n), scale_(1.0) {
    for (const auto& [a, row] : coeff_) {
        if (a.order() == 1) {
            int col = 0;
            for (int v = 0; v < n_; ++v)
                if (a.e[v] == 1) col = v;
            for (int i = 0; i < n_; ++i) jac_(i, col) = row[i];
        }
        for (double c : row) scale_ = std::max(scale_, std::abs(c));
    }
}

HomogeneousModel taylor_model(const VectorFieldSpec& field, const RVec& equilibrium,
                              const RVec& parameter_values, int max_order,
                              double residual_tol_rel) {
    const int n = field.dimension();
    if (max_order < 2 || max_order > 9)
        throw precondition_error("max-order must be in 2..9, got " + std::to_string(max_order));
    if (static_cast<int>(equilibrium.size()) != n)
        throw precondition_error("equilibrium length does not match dimension");
    if (static_cast<int>(parameter_values.size()) != field.parameter_count())
        throw precondition_error("parameter value count does not match declaration");

    RVec f0(n);
    std::map<MultiIndex, RVec> coeff;

    for (int i = 0; i < n; ++i) {
        // depth-first over multi-indices along non-decreasing variable order;
        // every partial is differentiated exactly once from its parent
        MultiIndex a{std::vector<int>(n, 0)};
        auto rec = [&](auto&& self, const ExprPtr& e, int start_var) -> void {
            double val = evaluate(e, equilibrium, parameter_values);
            int ord = a.order();
            if (ord == 0) {
                f0[i] = val;
            } else if (val != 0.0) {
                auto it = coeff.find(a);
                if (it == coeff.end()) it = coeff.emplace(a, RVec(n, 0.0)).first;
                it->second[i] = val / multi_factorial(a);
            }
            if (ord < max_order && !e->is_constant(0.0)) {
                for (int v = start_var; v < n; ++v) {
                    ExprPtr de = differentiate(e, v);
                    ++a.e[v];
                    self(self, de, v);
                    --a.e[v];
                }
            }
        };
        rec(rec, field.equations()[i], 0);
    }

    // drop all-zero rows that may remain after exact cancellations
    for (auto it = coeff.begin(); it != coeff.end();) {
        bool all_zero = std::all_of(it->second.begin(), it->second.end(),
                                    [](double c) { return c == 0.0; });
        it = all_zero ? coeff.erase(it) : std::next(it);
    }

    HomogeneousModel model(n, max_order, std::move(f0), std::move(coeff));

    double tol = residual_tol_rel * (1.0 + norm_inf(model.jacobian_matrix()));
    if (model.equilibrium_residual() > tol)
        throw precondition_error("equilibrium residual " + std::to_string(model.equilibrium_residual()) +
                                 " exceeds tolerance " + std::to_string(tol));
    return model;
}

CVec apply_form(const HomogeneousModel& model, int order, const std::vector<CVec>& args) {
    const int n = model.dimension();
    if (order < 1 || order > model.max_order())
        throw precondition_error("form order " + std::to_string(order) +
                                 " exceeds stored max-order " + std::to_string(model.max_order()));
    if (static_cast<int>(args.size()) != order)
        throw precondition_error("argument count does not match form order");

    CVec result(n, cx(0));
    std::vector<cx> prev, cur;
    std::vector<int> stride(n);

    for (const auto& [a, row] : model.coefficients()) {
        if (a.order() != order) continue;

        // perm = coefficient of t^a in prod_s (sum_v args[s][v] t_v); the
        // tensor entry for multi-index a is a! * c_{i,a}
        int total = 1;
        for (int v = 0; v < n; ++v) {
            stride[v] = (a.e[v] > 0) ? total : 0;
            total *= a.e[v] + 1;
        }
        prev.assign(total, cx(0));
        prev[0] = 1.0;
        cur.resize(total);
        for (int s = 0; s < order; ++s) {
            std::fill(cur.begin(), cur.end(), cx(0));
            for (int flat = 0; flat < total; ++flat) {
                cx pv = prev[flat];
                if (pv == cx(0)) continue;
                for (int v = 0; v < n; ++v) {
                    if (a.e[v] == 0) continue;
                    int digit = (flat / stride[v]) % (a.e[v] + 1);
                    if (digit < a.e[v]) cur[flat + stride[v]] += pv * args[s][v];
                }
            }
            std::swap(prev, cur);
        }
        cx perm = prev[total - 1];
        double w = multi_factorial(a);
        for (int i = 0; i < n; ++i) result[i] += w * row[i] * perm;
    }
    return result;
}

CVec apply_form_direct(const HomogeneousModel& model, int order, const std::vector<CVec>& args) {
    const int n = model.dimension();
    if (static_cast<int>(args.size()) != order)
        throw precondition_error("argument count does not match form order");

    CVec result(n, cx(0));
    std::vector<int> idx(order, 0);
    MultiIndex a{std::vector<int>(n, 0)};
    for (;;) {
        std::fill(a.e.begin(), a.e.end(), 0);
        cx prod = 1.0;
        for (int s = 0; s < order; ++s) {
            ++a.e[idx[s]];
            prod *= args[s][idx[s]];
        }
        auto it = model.coefficients().find(a);
        if (it != model.coefficients().end()) {
            double w = multi_factorial(a);
            for (int i = 0; i < n; ++i) result[i] += w * it->second[i] * prod;
        }
        int s = order - 1;
        while (s >= 0 && ++idx[s] == n) idx[s--] = 0;
        if (s < 0) break;
    }
    return result;
}

RMat jacobian(const HomogeneousModel& model) { return model.jacobian_matrix(); }

} // namespace hopf
