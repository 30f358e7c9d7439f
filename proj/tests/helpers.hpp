#pragma once

#include <random>
#include <string>
#include <vector>

#include "hopf/analysis.hpp"

namespace helpers {

using namespace hopf;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

inline int uniform_int(Rng& rng, int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(rng);
}

inline bool rel_close(cx a, cx b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

inline bool rel_close(const CVec& a, const CVec& b, double tol) {
    double diff = 0, scale = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return diff <= tol * (1.0 + scale);
}

inline RMat matmul(const RMat& a, const RMat& b) {
    RMat c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            double s = 0;
            for (int k = 0; k < a.cols; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

// Gauss-Jordan inverse; test matrices are small and det-guarded.
inline RMat inverse(RMat a) {
    int n = a.rows;
    RMat inv(n, n);
    for (int i = 0; i < n; ++i) inv(i, i) = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        for (int j = 0; j < n; ++j) {
            std::swap(a(piv, j), a(k, j));
            std::swap(inv(piv, j), inv(k, j));
        }
        double d = a(k, k);
        for (int j = 0; j < n; ++j) {
            a(k, j) /= d;
            inv(k, j) /= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            double m = a(i, k);
            if (m == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a(i, j) -= m * a(k, j);
                inv(i, j) -= m * inv(k, j);
            }
        }
    }
    return inv;
}

inline double det(RMat a) {
    int n = a.rows;
    double d = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (a(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(k, j));
            d = -d;
        }
        d *= a(k, k);
        for (int i = k + 1; i < n; ++i) {
            double m = a(i, k) / a(k, k);
            for (int j = k; j < n; ++j) a(i, j) -= m * a(k, j);
        }
    }
    return d;
}

inline RMat random_invertible(Rng& rng, int n) {
    for (;;) {
        RMat t(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t(i, j) = uniform(rng, -1.0, 1.0) + (i == j ? 1.5 : 0.0);
        if (std::abs(det(t)) > 0.2) return t;
    }
}

// real matrix with eigenvalues {+-i w0} and the rest strictly off the axis,
// hidden by a random similarity transform
inline RMat hopf_linear_matrix(Rng& rng, int n, double w0) {
    RMat b(n, n);
    b(0, 1) = -w0;
    b(1, 0) = w0;
    int i = 2;
    while (i < n) {
        double re = uniform(rng, 0.4, 1.8) * (uniform(rng, 0, 1) < 0.3 ? 1.0 : -1.0);
        if (n - i >= 2 && uniform(rng, 0, 1) < 0.5) {
            double im = uniform(rng, 0.3, 2.0);
            b(i, i) = re;
            b(i, i + 1) = -im;
            b(i + 1, i) = im;
            b(i + 1, i + 1) = re;
            i += 2;
        } else {
            b(i, i) = re;
            ++i;
        }
    }
    RMat t = random_invertible(rng, n);
    return matmul(matmul(t, b), inverse(t));
}

inline ExprPtr linear_row_expr(const RMat& a, int row) {
    ExprPtr e = Expr::constant(0.0);
    for (int j = 0; j < a.cols; ++j)
        e = Expr::add(e, Expr::mul(Expr::constant(a(row, j)), Expr::variable(j)));
    return e;
}

inline VectorFieldSpec linear_field(const RMat& a) {
    std::vector<std::string> vars;
    std::vector<ExprPtr> eqs;
    for (int i = 0; i < a.rows; ++i) vars.push_back("x" + std::to_string(i + 1));
    for (int i = 0; i < a.rows; ++i) eqs.push_back(linear_row_expr(a, i));
    return VectorFieldSpec(vars, {}, eqs);
}

inline ExprPtr monomial_expr(double coef, const std::vector<int>& expo) {
    ExprPtr e = Expr::constant(coef);
    for (size_t v = 0; v < expo.size(); ++v)
        if (expo[v] > 0) e = Expr::mul(e, Expr::pow(Expr::variable(static_cast<int>(v)), expo[v]));
    return e;
}

// linear Hopf part plus random sparse monomials of degree 2..max_degree
inline VectorFieldSpec random_poly_hopf_field(Rng& rng, int n, double w0, int max_degree,
                                              int terms_per_component, double amplitude) {
    RMat a = hopf_linear_matrix(rng, n, w0);
    std::vector<std::string> vars;
    for (int i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i + 1));
    std::vector<ExprPtr> eqs;
    for (int i = 0; i < n; ++i) {
        ExprPtr e = linear_row_expr(a, i);
        for (int t = 0; t < terms_per_component; ++t) {
            int deg = uniform_int(rng, 2, max_degree);
            std::vector<int> expo(n, 0);
            for (int d = 0; d < deg; ++d) ++expo[uniform_int(rng, 0, n - 1)];
            e = Expr::add(e, monomial_expr(uniform(rng, -amplitude, amplitude), expo));
        }
        eqs.push_back(e);
    }
    return VectorFieldSpec(vars, {}, eqs);
}

inline ExprPtr substitute_variables(const ExprPtr& e, const std::vector<ExprPtr>& repl) {
    switch (e->kind) {
        case node_kind::variable: return repl[static_cast<size_t>(e->index)];
        case node_kind::constant:
        case node_kind::parameter: return e;
        case node_kind::negate: return Expr::negate(substitute_variables(e->a, repl));
        case node_kind::add:
            return Expr::add(substitute_variables(e->a, repl), substitute_variables(e->b, repl));
        case node_kind::subtract:
            return Expr::sub(substitute_variables(e->a, repl), substitute_variables(e->b, repl));
        case node_kind::multiply:
            return Expr::mul(substitute_variables(e->a, repl), substitute_variables(e->b, repl));
        case node_kind::divide:
            return Expr::div(substitute_variables(e->a, repl), substitute_variables(e->b, repl));
        case node_kind::power: return Expr::pow(substitute_variables(e->a, repl), e->exponent);
        case node_kind::call: return Expr::call(e->func, substitute_variables(e->a, repl));
    }
    return e;
}

// pushforward through u = T x: g(u) = T f(T^{-1} u)
inline VectorFieldSpec linear_transform_field(const VectorFieldSpec& f, const RMat& T) {
    int n = f.dimension();
    RMat Tinv = inverse(T);
    std::vector<ExprPtr> repl;
    for (int v = 0; v < n; ++v) repl.push_back(linear_row_expr(Tinv, v));
    std::vector<ExprPtr> substituted;
    for (const ExprPtr& e : f.equations()) substituted.push_back(substitute_variables(e, repl));
    std::vector<ExprPtr> eqs;
    for (int i = 0; i < n; ++i) {
        ExprPtr e = Expr::constant(0.0);
        for (int j = 0; j < n; ++j)
            e = Expr::add(e, Expr::mul(Expr::constant(T(i, j)), substituted[j]));
        eqs.push_back(e);
    }
    return VectorFieldSpec(f.variables(), f.parameters(), eqs);
}

// planar field extended by a contracting third axis z' = -z
inline VectorFieldSpec embed_planar_in_3d(const VectorFieldSpec& planar) {
    std::vector<ExprPtr> eqs = planar.equations();
    eqs.push_back(Expr::negate(Expr::variable(2)));
    return VectorFieldSpec({"x", "y", "z"}, planar.parameters(), eqs);
}

struct AnalysisAudit {
    int analyses = 0;
    int bordered_solves = 0;
    double worst_master = 0.0;  // master residual / model scale
    double worst_s = 0.0;       // |s| / (1 + |rhs|)
    double worst_residual = 0.0;
    double worst_ortho = 0.0;   // |<p, h>|
};

inline void audit_table(AnalysisAudit& audit, const CenterManifoldTable& table) {
    ++audit.analyses;
    audit.worst_master = std::max(audit.worst_master, table.master_residual / table.model_scale);
    for (const SolveDiagnostic& d : table.diagnostics) {
        if (!d.bordered) continue;
        ++audit.bordered_solves;
        audit.worst_s = std::max(audit.worst_s, d.s_mag / (1.0 + d.rhs_norm));
        audit.worst_residual = std::max(audit.worst_residual, d.residual / (1.0 + d.rhs_norm));
        audit.worst_ortho = std::max(audit.worst_ortho, d.ortho);
    }
}

struct AnalysisRun {
    HomogeneousModel model;
    CriticalPair pair;
    CenterManifoldTable table;
    LyapunovSet lyap;
};

inline AnalysisRun run_analysis(const VectorFieldSpec& field, const RVec& equilibrium,
                                const RVec& mu, int level, AnalysisAudit* audit = nullptr) {
    HomogeneousModel model = taylor_model(field, equilibrium, mu, 2 * level + 1);
    Spectrum sp = eigen_all(model.jacobian_matrix());
    CriticalPair pair = critical_pair(model.jacobian_matrix(), sp);
    CenterManifoldTable table = center_manifold(model, pair, level);
    LyapunovSet lyap = lyapunov(table, level);
    if (audit) audit_table(*audit, table);
    return AnalysisRun{std::move(model), std::move(pair), std::move(table), std::move(lyap)};
}

} // namespace helpers
