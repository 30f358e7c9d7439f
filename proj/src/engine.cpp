#include "hopf/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hopf {

namespace {

double pair_factorial(int j, int k) { return factorial(j) * factorial(k); }

CVec solve_shifted(const RMat& A, cx shift, const CVec& rhs) {
    CMat M = complex_copy(A);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) M(i, j) = -M(i, j);
        M(i, i) += shift;
    }
    return solve_complex(M, rhs);
}

double solve_residual(const RMat& A, cx shift, const CVec& h, const CVec& rhs) {
    CVec r = matvec(A, h);
    for (size_t i = 0; i < r.size(); ++i) r[i] = shift * h[i] - r[i] - rhs[i];
    return norm2(r);
}

// resonance guard: every non-resonant shift j*lambda + k*conj(lambda) must
// stay clear of the spectrum of A (this covers the invertibility of A itself
// needed for the diagonal coefficients)
void guard_resonances(const RMat& A, cx lambda, int level) {
    Spectrum sp = eigen_all(A);
    double tol = sp.purity_tol;
    for (int d = 2; d <= 2 * level; ++d) {
        for (int j = d; 2 * j >= d; --j) {
            int k = d - j;
            if (j == k + 1) continue;
            cx shift = double(j) * lambda + double(k) * std::conj(lambda);
            for (const cx& ev : sp.values) {
                if (std::abs(ev - shift) <= tol) {
                    std::ostringstream msg;
                    msg << "resonance guard: eigenvalue " << ev.real() << (ev.imag() < 0 ? "-" : "+")
                        << std::abs(ev.imag()) << "i lies within tolerance of the shift for h_" << j
                        << k;
                    throw precondition_error(msg.str());
                }
            }
        }
    }
}

void verify_master(const HomogeneousModel& model, const BivariatePolyVec& H, cx lambda,
                   const std::array<cx, 4>& gamma, CenterManifoldTable& table) {
    const int n = model.dimension();
    const int level = table.level;
    const int top = 2 * level + 1;

    BiPoly W(top), Wb(top);
    W.set(1, 0, lambda);
    Wb.set(0, 1, std::conj(lambda));
    for (int m = 1; m <= level; ++m) {
        W.set(m + 1, m, gamma[m - 1]);
        Wb.set(m, m + 1, std::conj(gamma[m - 1]));
    }

    BivariatePolyVec FH = compose_field(model, H, top);

    std::vector<BiPoly> defect;
    defect.reserve(n);
    for (int i = 0; i < n; ++i) {
        BiPoly Hc = H.component(i, top);
        BiPoly lhs = mul_trunc(d_dw(Hc), W, top);
        BiPoly rhs_part = mul_trunc(d_dwbar(Hc), Wb, top);
        BiPoly Fc = FH.component(i, top);
        BiPoly D(top);
        for (int j = 0; j <= top; ++j)
            for (int k = 0; j + k <= top; ++k)
                D.set(j, k, lhs.get(j, k) + rhs_part.get(j, k) - Fc.get(j, k));
        defect.push_back(std::move(D));
    }

    table.master_residual = 0.0;
    table.master_per_jk.clear();
    for (int d = 1; d <= 2 * level; ++d) {
        for (int j = d; j >= 0; --j) {
            int k = d - j;
            double nrm = 0.0;
            for (int i = 0; i < n; ++i) nrm = std::max(nrm, std::abs(defect[i].get(j, k)));
            table.master_per_jk[{j, k}] = nrm;
            table.master_residual = std::max(table.master_residual, nrm);
        }
    }
    // at the top degree only the resonant projection is determined
    CVec dtop(n);
    for (int i = 0; i < n; ++i) dtop[i] = defect[i].get(level + 1, level);
    double proj = std::abs(inner(table.p, dtop));
    table.master_per_jk[{level + 1, level}] = proj;
    table.master_residual = std::max(table.master_residual, proj);
}

CenterManifoldTable run_engine(const HomogeneousModel& model, cx lambda, const CVec& q,
                               const CVec& p, int level) {
    const int n = model.dimension();
    if (level < 1 || level > 4)
        throw precondition_error("coefficient level must be in 1..4");
    if (model.max_order() < 2 * level + 1)
        throw precondition_error("model order " + std::to_string(model.max_order()) +
                                 " is insufficient for level " + std::to_string(level) +
                                 " (needs " + std::to_string(2 * level + 1) + ")");

    const RMat& A = model.jacobian_matrix();
    guard_resonances(A, lambda, level);

    CenterManifoldTable table;
    table.level = level;
    table.lambda = lambda;
    table.omega0 = lambda.imag();
    table.q = q;
    table.p = p;
    table.model_scale = model.coefficient_scale();

    BivariatePolyVec H(n, 2 * level + 1);
    H.set(1, 0, q);
    H.set(0, 1, conj(q));

    std::array<cx, 4> gamma{}; // Taylor coefficients of the resonant terms
    int gammas_known = 0;

    for (int d = 2; d <= 2 * level + 1; ++d) {
        const bool top = d == 2 * level + 1;
        BivariatePolyVec FH = compose_field(model, H, d);

        for (int j = d; 2 * j >= d; --j) {
            const int k = d - j;
            if (top && j != k + 1) continue;

            CVec R = FH.get(j, k);
            // couplings through the already-known resonant coefficients
            for (int m = 1; m <= gammas_known; ++m) {
                int r = j - m, s = k - m;
                if (r < 0 || s < 0 || r + s < 1) continue;
                if (j == k + 1 && m == k) continue; // the unknown slot itself
                const CVec* Hrs = H.find(r, s);
                if (!Hrs) continue;
                cx c = double(r) * gamma[m - 1] + double(s) * std::conj(gamma[m - 1]);
                for (int i = 0; i < n; ++i) R[i] -= c * (*Hrs)[i];
            }

            SolveDiagnostic diag;
            diag.j = j;
            diag.k = k;
            diag.rhs_norm = norm2(R);
            cx shift = double(j) * lambda + double(k) * std::conj(lambda);

            if (j == k + 1) {
                cx g = inner(p, R);
                gamma[k - 1] = g;
                gammas_known = std::max(gammas_known, k);
                table.G[k - 1] = pair_factorial(j, k) * g;
                if (!top) {
                    CVec rhs = R;
                    for (int i = 0; i < n; ++i) rhs[i] -= g * q[i];
                    BorderedSolution sol = bordered_solve_shifted(A, shift, p, q, rhs);
                    diag.bordered = true;
                    diag.rhs_norm = norm2(rhs);
                    diag.residual = sol.residual;
                    diag.s_mag = std::abs(sol.s);
                    diag.ortho = std::abs(inner(p, sol.h));
                    diag.compat_defect = sol.compat_defect;
                    H.set(j, k, sol.h);
                    H.set(k, j, conj(sol.h));
                } else {
                    diag.bordered = false;
                    diag.residual = 0.0;
                }
            } else if (j == k) {
                // the right side is conjugation-symmetric; symmetrize exactly so
                // the solve stays real and h_kk = conj(h_kk)
                for (int i = 0; i < n; ++i) R[i] = cx(R[i].real(), 0.0);
                CVec h = solve_shifted(A, shift, R);
                diag.residual = solve_residual(A, shift, h, R);
                H.set(j, j, h);
            } else {
                CVec h = solve_shifted(A, shift, R);
                diag.residual = solve_residual(A, shift, h, R);
                H.set(j, k, h);
                H.set(k, j, conj(h));
            }
            table.diagnostics.push_back(diag);
        }
    }

    for (int d = 2; d <= 2 * level; ++d) {
        for (int j = d; j >= 0; --j) {
            int k = d - j;
            double f = pair_factorial(j, k);
            CVec hv = H.get(j, k); // explicit zeros kept so lookups always resolve
            for (int i = 0; i < n; ++i) hv[i] *= f;
            table.h[{j, k}] = std::move(hv);
        }
    }

    verify_master(model, H, lambda, gamma, table);
    return table;
}

} // namespace

BivariatePolyVec compose_field(const HomogeneousModel& model, const BivariatePolyVec& H,
                               int max_degree) {
    const int n = model.dimension();
    if (H.find(0, 0))
        throw precondition_error("compose_field: immersion must have no constant term");
    if (max_degree > model.max_order())
        throw precondition_error("compose_field: max-degree exceeds model order");

    // powers of each component series
    std::vector<std::vector<BiPoly>> pw(n);
    for (int v = 0; v < n; ++v) {
        pw[v].reserve(max_degree + 1);
        BiPoly one(max_degree);
        one.set(0, 0, 1.0);
        pw[v].push_back(std::move(one));
        pw[v].push_back(H.component(v, max_degree));
        for (int e = 2; e <= max_degree; ++e)
            pw[v].push_back(mul_trunc(pw[v][e - 1], pw[v][1], max_degree));
    }

    std::vector<BiPoly> acc(n, BiPoly(max_degree));
    for (int i = 0; i < n; ++i) acc[i].add(0, 0, model.value_at_origin()[i]);

    for (const auto& [a, row] : model.coefficients()) {
        if (a.order() > max_degree) continue;
        const BiPoly* prod = nullptr;
        BiPoly tmp(max_degree);
        for (int v = 0; v < n; ++v) {
            if (a.e[v] == 0) continue;
            if (!prod) {
                prod = &pw[v][a.e[v]];
            } else {
                tmp = mul_trunc(*prod, pw[v][a.e[v]], max_degree);
                prod = &tmp;
            }
        }
        for (int i = 0; i < n; ++i) {
            if (row[i] == 0.0) continue;
            for (int j = 0; j <= max_degree; ++j)
                for (int k = 0; j + k <= max_degree; ++k) {
                    cx c = prod->get(j, k);
                    if (c != cx(0)) acc[i].add(j, k, row[i] * c);
                }
        }
    }

    BivariatePolyVec out(n, max_degree);
    for (int j = 0; j <= max_degree; ++j)
        for (int k = 0; j + k <= max_degree; ++k) {
            CVec v(n);
            bool nonzero = false;
            for (int i = 0; i < n; ++i) {
                v[i] = acc[i].get(j, k);
                nonzero = nonzero || v[i] != cx(0);
            }
            if (nonzero) out.set(j, k, std::move(v));
        }
    return out;
}

CenterManifoldTable center_manifold(const HomogeneousModel& model, const CriticalPair& pair,
                                    int level) {
    return run_engine(model, cx(0.0, pair.omega0), pair.q, pair.p, level);
}

CenterManifoldTable center_manifold_shifted(const HomogeneousModel& model, cx lambda,
                                            const CVec& q, const CVec& p, int level) {
    return run_engine(model, lambda, q, p, level);
}

LyapunovSet lyapunov(const CenterManifoldTable& table, int level, double caveat_tol) {
    if (level < 1 || level > table.level)
        throw precondition_error("lyapunov: table was computed to level " +
                                 std::to_string(table.level));
    static const double scaling[4] = {2.0, 12.0, 144.0, 2880.0};
    LyapunovSet out;
    out.level = level;
    double scale = 1.0;
    for (int k = 1; k <= level; ++k) {
        out.G[k - 1] = table.G[k - 1];
        out.l[k - 1] = table.G[k - 1].real() / scaling[k - 1];
        scale = std::max(scale, std::abs(out.l[k - 1]));
    }
    double threshold = caveat_tol * scale;
    for (int k = 2; k <= level; ++k) {
        for (int j = 1; j < k; ++j) {
            if (std::abs(out.l[j - 1]) > threshold) {
                std::ostringstream msg;
                msg << "l" << k << " reported while |l" << j << "| = " << std::abs(out.l[j - 1])
                    << " exceeds the interpretation threshold " << threshold;
                out.caveats.push_back(msg.str());
            }
        }
    }
    return out;
}

RVec newton_equilibrium(const VectorFieldSpec& field, const RVec& mu, RVec guess, double tol_rel,
                        int max_iterations) {
    const int n = field.dimension();
    if (static_cast<int>(guess.size()) != n)
        throw precondition_error("equilibrium guess length does not match dimension");

    std::vector<double> history;
    RVec x = std::move(guess);
    for (int it = 0; it <= max_iterations; ++it) {
        RVec f = field.evaluate_field(x, mu);
        RMat J = field.jacobian_at(x, mu);
        double res = norm_inf(f);
        history.push_back(res);
        if (res <= tol_rel * (1.0 + norm_inf(J))) return x;
        if (it == max_iterations) break;

        CMat Jc = complex_copy(J);
        CVec rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = -f[i];
        CVec dx;
        try {
            dx = solve_complex(Jc, rhs);
        } catch (const numeric_error&) {
            throw numeric_error("singular Jacobian at Newton iterate " + std::to_string(it));
        }
        for (int i = 0; i < n; ++i) x[i] += dx[i].real();
    }
    std::ostringstream msg;
    msg << "Newton iteration did not converge; residual history:";
    for (double r : history) msg << ' ' << r;
    throw numeric_error(msg.str());
}

TransversalityReport transversality(const VectorFieldSpec& field, const RVec& mu0,
                                    const RVec& equilibrium0, int level) {
    const int m = field.parameter_count();
    if (level < 1 || level > 4) throw precondition_error("level must be in 1..4");
    if (m < level)
        throw precondition_error("transversality requires at least " + std::to_string(level) +
                                 " parameters, got " + std::to_string(m));

    const int order = std::max(2, 2 * (level - 1) + 1);

    RVec x0 = newton_equilibrium(field, mu0, equilibrium0);
    HomogeneousModel model0 = taylor_model(field, x0, mu0, order);
    Spectrum sp0 = eigen_all(model0.jacobian_matrix());
    CriticalPair cp = critical_pair(model0.jacobian_matrix(), sp0);
    const cx target(0.0, cp.omega0);

    auto phi = [&](const RVec& mu) {
        RVec out(level, 0.0);
        RVec x = newton_equilibrium(field, mu, x0);
        HomogeneousModel model = taylor_model(field, x, mu, order);
        TrackedPair tp = track_pair(model.jacobian_matrix(), target);
        out[0] = tp.lambda.real();
        if (level >= 2) {
            CenterManifoldTable table =
                center_manifold_shifted(model, tp.lambda, tp.q, tp.p, level - 1);
            LyapunovSet ls = lyapunov(table, level - 1);
            for (int k = 1; k < level; ++k) out[k] = ls.l[k - 1];
        }
        return out;
    };

    TransversalityReport rep;
    rep.level = level;
    rep.mu0 = mu0;
    rep.omega0 = cp.omega0;
    rep.eta0 = 0.0;
    rep.jacobian = RMat(level, m);

    for (int i = 0; i < m; ++i) {
        double step = 1e-5 * (1.0 + std::abs(mu0[i]));
        RVec mp = mu0, mm = mu0;
        mp[i] += step;
        mm[i] -= step;
        RVec fp = phi(mp);
        RVec fm = phi(mm);
        for (int r = 0; r < level; ++r) rep.jacobian(r, i) = (fp[r] - fm[r]) / (2.0 * step);
    }

    rep.sigma = singular_values(rep.jacobian);
    double smax = rep.sigma.front();
    double smin = rep.sigma.back();
    rep.rank_ratio = smax > 0.0 ? smin / smax : 0.0;
    rep.full_rank = rep.rank_ratio > 1e-6;
    return rep;
}

} // namespace hopf
