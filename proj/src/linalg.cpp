#include "hopf/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

namespace hopf {

namespace {

struct LUFactors {
    CMat lu;
    std::vector<int> perm;
    int sign = 1;
};

// relaxed = true floors tiny pivots instead of failing; used for inverse
// iteration where the matrix is singular by design
LUFactors lu_factor(CMat M, bool relaxed) {
    const int n = M.rows;
    double scale = norm_inf(M);
    if (scale == 0.0) scale = 1.0;
    const double hard_tol = 1e-14 * scale;
    const double floor_tol = 1e-280;

    LUFactors f{std::move(M), std::vector<int>(n), 1};
    CMat& a = f.lu;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            double m = std::abs(a(i, k));
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(k, j));
            f.sign = -f.sign;
        }
        f.perm[k] = piv;
        if (best < hard_tol) {
            if (!relaxed)
                throw numeric_error("singular matrix: pivot " + std::to_string(best) +
                                    " below " + std::to_string(hard_tol));
            if (best < floor_tol) a(k, k) = cx(hard_tol, 0.0);
            else a(k, k) *= hard_tol / best;
        }
        cx d = a(k, k);
        for (int i = k + 1; i < n; ++i) {
            cx m = a(i, k) / d;
            a(i, k) = m;
            if (m == cx(0)) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
        }
    }
    return f;
}

CVec lu_solve(const LUFactors& f, CVec b) {
    const int n = f.lu.rows;
    // rows were swapped in full during factorization, so permute first, then
    // run the clean triangular solves
    for (int k = 0; k < n; ++k) std::swap(b[k], b[f.perm[k]]);
    for (int i = 1; i < n; ++i) {
        cx s = b[i];
        for (int j = 0; j < i; ++j) s -= f.lu(i, j) * b[j];
        b[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        cx s = b[i];
        for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * b[j];
        b[i] = s / f.lu(i, i);
    }
    return b;
}

} // namespace

CVec solve_complex(const CMat& M, const CVec& b) {
    if (M.rows != M.cols || static_cast<int>(b.size()) != M.rows)
        throw precondition_error("solve_complex: shape mismatch");
    return lu_solve(lu_factor(M, false), b);
}

cx det_complex(CMat M) {
    int n = M.rows;
    cx det = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(M(k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::abs(M(i, k)) > best) {
                best = std::abs(M(i, k));
                piv = i;
            }
        if (best == 0.0) return 0.0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(M(piv, j), M(k, j));
            det = -det;
        }
        det *= M(k, k);
        for (int i = k + 1; i < n; ++i) {
            cx m = M(i, k) / M(k, k);
            for (int j = k + 1; j < n; ++j) M(i, j) -= m * M(k, j);
        }
    }
    return det;
}

// ---------------------------------------------------------------------------
// eigenvalues

namespace {

void hessenberg_reduce(RMat& a) {
    const int n = a.rows;
    for (int k = 0; k + 2 < n; ++k) {
        double xnorm = 0;
        for (int i = k + 1; i < n; ++i) xnorm += a(i, k) * a(i, k);
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;
        double alpha = (a(k + 1, k) >= 0.0) ? -xnorm : xnorm;
        // Householder vector v = x - alpha e1
        std::vector<double> v(n, 0.0);
        for (int i = k + 1; i < n; ++i) v[i] = a(i, k);
        v[k + 1] -= alpha;
        double vnorm2 = 0;
        for (int i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        // left: A -= 2 v (v^T A) / v.v
        for (int j = k; j < n; ++j) {
            double s = 0;
            for (int i = k + 1; i < n; ++i) s += v[i] * a(i, j);
            s *= 2.0 / vnorm2;
            for (int i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
        }
        // right: A -= 2 (A v) v^T / v.v
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (int j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
        }
        a(k + 1, k) = alpha;
        for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix; returns unsorted
// eigenvalues. Classic EISPACK-style sweep with deflation and exceptional
// shifts every 10 stalled iterations.
std::vector<cx> hqr(RMat a) {
    const int n = a.rows;
    std::vector<cx> out;
    out.reserve(n);

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
    if (anorm == 0.0) {
        for (int i = 0; i < n; ++i) out.push_back(0.0);
        return out;
    }

    int nn = n - 1;
    double t = 0.0;
    double p = 0, q = 0, r = 0, x = 0, y = 0, z = 0, w = 0, s = 0;
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 1; --l) {
                s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(a(l, l - 1)) <= DBL_EPSILON * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            x = a(nn, nn);
            if (l == nn) {
                out.push_back(cx(x + t, 0.0));
                --nn;
            } else {
                y = a(nn - 1, nn - 1);
                w = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + (p >= 0.0 ? std::abs(z) : -std::abs(z));
                        out.push_back(cx(x + z, 0.0));
                        out.push_back(cx(z != 0.0 ? x - w / z : x + z, 0.0));
                    } else {
                        out.push_back(cx(x + p, z));
                        out.push_back(cx(x + p, -z));
                    }
                    nn -= 2;
                } else {
                    if (its == 30) {
                        std::ostringstream msg;
                        msg << "eigenvalue iteration failed to converge (matrix norm " << anorm
                            << ", last shift " << t << ")";
                        throw numeric_error(msg.str());
                    }
                    if (its == 10 || its == 20) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                        s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m;
                    for (m = nn - 2; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                                                  std::abs(a(m + 1, m + 1)));
                        if (u <= DBL_EPSILON * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        a(i, i - 2) = 0.0;
                        if (i != m + 2) a(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0.0;
                            if (k != nn - 1) r = a(k + 2, k - 1);
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        s = std::sqrt(p * p + q * q + r * r);
                        if (p < 0.0) s = -s;
                        if (s != 0.0) {
                            if (k == m) {
                                if (l != m) a(k, k - 1) = -a(k, k - 1);
                            } else {
                                a(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = a(k, j) + q * a(k + 1, j);
                                if (k != nn - 1) {
                                    p += r * a(k + 2, j);
                                    a(k + 2, j) -= p * z;
                                }
                                a(k + 1, j) -= p * y;
                                a(k, j) -= p * x;
                            }
                            int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * a(i, k) + y * a(i, k + 1);
                                if (k != nn - 1) {
                                    p += z * a(i, k + 2);
                                    a(i, k + 2) -= p * r;
                                }
                                a(i, k + 1) -= p * q;
                                a(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return out;
}

CVec inverse_iteration(const CMat& M_shifted, const RMat& A, cx lambda) {
    const int n = A.rows;
    double anorm = std::max(1.0, norm_inf(A));
    LUFactors lu = lu_factor(M_shifted, true);

    auto residual = [&](const CVec& v) {
        CVec av = matvec(A, v);
        for (int i = 0; i < n; ++i) av[i] -= lambda * v[i];
        return norm2(av) / norm2(v);
    };

    // deterministic starts: all-ones, then unit vectors
    for (int start = -1; start < n; ++start) {
        CVec v(n);
        if (start < 0)
            for (int i = 0; i < n; ++i) v[i] = cx(1.0, 0.0);
        else {
            for (int i = 0; i < n; ++i) v[i] = cx(i == start ? 1.0 : 0.0, 0.0);
        }
        bool ok = true;
        for (int it = 0; it < 8; ++it) {
            v = lu_solve(lu, std::move(v));
            double nrm = norm2(v);
            if (!(nrm > 0.0) || !std::isfinite(nrm)) {
                ok = false;
                break;
            }
            for (cx& c : v) c /= nrm;
            if (residual(v) <= 1e-12 * anorm) break;
        }
        if (ok && residual(v) <= 1e-9 * anorm) return v;
    }
    throw numeric_error("inverse iteration failed to produce an eigenvector");
}

CVec eigenvector(const RMat& A, cx lambda) {
    CMat M = complex_copy(A);
    for (int i = 0; i < A.rows; ++i) M(i, i) -= lambda;
    return inverse_iteration(M, A, lambda);
}

CVec left_eigenvector(const RMat& A, cx lambda) {
    // eigenvector of A^T for conj(lambda)
    RMat At = transpose(A);
    CMat M = complex_copy(At);
    for (int i = 0; i < A.rows; ++i) M(i, i) -= std::conj(lambda);
    CVec p = inverse_iteration(M, At, std::conj(lambda));
    return p;
}

// ||q||_2 = 1/sqrt(2), largest-magnitude component real positive (first such
// index wins on ties)
void gauge_fix(CVec& q) {
    int imax = 0;
    double best = std::abs(q[0]);
    for (size_t i = 1; i < q.size(); ++i) {
        double m = std::abs(q[i]);
        if (m > best) {
            best = m;
            imax = static_cast<int>(i);
        }
    }
    cx c = q[imax];
    cx phase = std::conj(c) / std::abs(c);
    double scale = (1.0 / std::sqrt(2.0)) / norm2(q);
    for (cx& v : q) v *= phase * scale;
    q[imax] = cx(std::abs(q[imax]), 0.0);
}

TrackedPair make_pair(const RMat& A, cx lambda) {
    TrackedPair tp;
    tp.lambda = lambda;
    tp.q = eigenvector(A, lambda);
    tp.p = left_eigenvector(A, lambda);
    gauge_fix(tp.q);
    cx s = inner(tp.p, tp.q);
    if (std::abs(s) < 1e-12)
        throw numeric_error("critical eigenpair is numerically defective: <p,q> ~ 0");
    cx scale = 1.0 / std::conj(s);
    for (cx& v : tp.p) v *= scale;
    return tp;
}

} // namespace

Spectrum eigen_all(const RMat& A, double purity_tol_rel) {
    if (A.rows != A.cols) throw precondition_error("eigen_all: matrix not square");
    if (A.rows < 2) throw precondition_error("eigen_all: dimension must be >= 2");

    RMat H = A;
    hessenberg_reduce(H);
    std::vector<cx> vals = hqr(std::move(H));

    std::sort(vals.begin(), vals.end(), [](const cx& a, const cx& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });

    Spectrum sp;
    sp.values = std::move(vals);
    sp.purity_tol = purity_tol_rel * (1.0 + norm_inf(A));
    sp.classes.assign(sp.values.size(), eig_class::stable);

    std::vector<int> axis;
    for (size_t i = 0; i < sp.values.size(); ++i) {
        if (std::abs(sp.values[i].real()) <= sp.purity_tol)
            axis.push_back(static_cast<int>(i));
        else
            sp.classes[i] = sp.values[i].real() > 0 ? eig_class::unstable : eig_class::stable;
    }
    bool simple_pair = axis.size() == 2 &&
                       sp.values[axis[0]].imag() > sp.purity_tol &&
                       std::abs(sp.values[axis[0]].imag() + sp.values[axis[1]].imag()) <=
                           1e-12 * (1.0 + std::abs(sp.values[axis[0]].imag()));
    for (int i : axis)
        sp.classes[i] = simple_pair ? eig_class::critical_pair : eig_class::zero_real_other;
    return sp;
}

CriticalPair critical_pair(const RMat& A, const Spectrum& spectrum) {
    int pair_count = 0;
    int zero_other = 0;
    cx lambda = 0;
    for (size_t i = 0; i < spectrum.values.size(); ++i) {
        if (spectrum.classes[i] == eig_class::critical_pair) {
            ++pair_count;
            if (spectrum.values[i].imag() > 0) lambda = spectrum.values[i];
        } else if (spectrum.classes[i] == eig_class::zero_real_other) {
            ++zero_other;
        }
    }
    if (pair_count != 2) {
        if (zero_other > 0)
            throw precondition_error(
                "extra critical eigenvalue: the imaginary axis carries more than one simple pair");
        throw precondition_error("no critical pair: no simple purely imaginary eigenvalue pair");
    }
    if (zero_other > 0)
        throw precondition_error("extra critical eigenvalue next to the critical pair");

    double omega0 = lambda.imag();
    TrackedPair tp = make_pair(A, cx(0.0, omega0)); // real part zeroed below purity tolerance

    CriticalPair cp;
    cp.omega0 = omega0;
    cp.q = std::move(tp.q);
    cp.p = std::move(tp.p);
    CVec r = matvec(A, cp.q);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= cx(0.0, omega0) * cp.q[i];
    cp.q_residual = norm2(r) / norm2(cp.q);
    RMat At = transpose(A);
    CVec rp = matvec(At, cp.p);
    for (size_t i = 0; i < rp.size(); ++i) rp[i] += cx(0.0, omega0) * cp.p[i];
    cp.p_residual = norm2(rp) / norm2(cp.p);
    return cp;
}

TrackedPair track_pair(const RMat& A, cx target) {
    Spectrum sp = eigen_all(A);
    double d1 = 1e300, d2 = 1e300;
    cx best = 0;
    for (const cx& v : sp.values) {
        double d = std::abs(v - target);
        if (d < d1) {
            d2 = d1;
            d1 = d;
            best = v;
        } else if (d < d2) {
            d2 = d;
        }
    }
    if (d1 > 0.0 && d1 > 0.9 * d2)
        throw numeric_error("eigenvalue tracking ambiguous: two candidates within 10% of each other");
    if (best.imag() <= sp.purity_tol)
        throw numeric_error("tracked eigenvalue has lost its imaginary part");
    return make_pair(A, best);
}

BorderedSolution bordered_solve_shifted(const RMat& A, cx shift, const CVec& p, const CVec& q,
                                        const CVec& rhs) {
    const int n = A.rows;
    CMat M(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) M(i, j) = -A(i, j);
        M(i, i) += shift;
        M(i, n) = q[i];
        M(n, i) = std::conj(p[i]);
    }
    M(n, n) = 0.0;

    CVec b(n + 1, cx(0));
    for (int i = 0; i < n; ++i) b[i] = rhs[i];

    CVec hs = solve_complex(M, b);

    BorderedSolution sol;
    sol.h.assign(hs.begin(), hs.begin() + n);
    sol.s = hs[n];
    sol.compat_defect = std::abs(inner(p, rhs));
    sol.compat_warning = sol.compat_defect > 1e-8 * norm2(rhs);
    CVec res = matvec(A, sol.h);
    for (int i = 0; i < n; ++i) res[i] = shift * sol.h[i] - res[i] - rhs[i];
    sol.residual = norm2(res);
    return sol;
}

BorderedSolution bordered_solve(const RMat& A, double omega0, const CVec& p, const CVec& q,
                                const CVec& rhs) {
    return bordered_solve_shifted(A, cx(0.0, omega0), p, q, rhs);
}

std::vector<double> singular_values(const RMat& J) {
    const int r = J.rows;
    // B = J J^T, then cyclic Jacobi
    RMat B(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            double s = 0;
            for (int k = 0; k < J.cols; ++k) s += J(i, k) * J(j, k);
            B(i, j) = s;
        }
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) off += B(i, j) * B(i, j);
        if (off < 1e-300) break;
        for (int pi = 0; pi < r; ++pi)
            for (int qi = pi + 1; qi < r; ++qi) {
                if (std::abs(B(pi, qi)) < 1e-300) continue;
                double theta = 0.5 * std::atan2(2.0 * B(pi, qi), B(pi, pi) - B(qi, qi));
                double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < r; ++k) {
                    double bp = B(pi, k), bq = B(qi, k);
                    B(pi, k) = c * bp + s * bq;
                    B(qi, k) = -s * bp + c * bq;
                }
                for (int k = 0; k < r; ++k) {
                    double bp = B(k, pi), bq = B(k, qi);
                    B(k, pi) = c * bp + s * bq;
                    B(k, qi) = -s * bp + c * bq;
                }
            }
    }
    std::vector<double> sv(r);
    for (int i = 0; i < r; ++i) sv[i] = std::sqrt(std::max(0.0, B(i, i)));
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

} // namespace hopf
