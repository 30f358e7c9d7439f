#include "hopf/explicit_formulas.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hopf {

namespace {

CVec solve_shift(const RMat& A, cx shift, const CVec& rhs) {
    CMat M = complex_copy(A);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) M(i, j) = -M(i, j);
        M(i, i) += shift;
    }
    return solve_complex(M, rhs);
}

struct Acc {
    CVec v;
    explicit Acc(int n) : v(n, cx(0)) {}
    void add(double w, const CVec& x) {
        for (size_t i = 0; i < v.size(); ++i) v[i] += w * x[i];
    }
    void add(cx w, const CVec& x) {
        for (size_t i = 0; i < v.size(); ++i) v[i] += w * x[i];
    }
};

} // namespace

ExplicitCoeffs explicit_table(const HomogeneousModel& model, const CriticalPair& pair) {
    if (model.max_order() < 7)
        throw precondition_error("explicit_table needs a model of order >= 7");
    const int n = model.dimension();
    const RMat& A = model.jacobian_matrix();
    const double w0 = pair.omega0;
    const CVec& q = pair.q;
    const CVec& p = pair.p;
    const CVec qb = conj(q);
    const cx iw0(0.0, w0);

    auto B = [&](const CVec& a, const CVec& b) { return apply_form(model, 2, {a, b}); };
    auto C = [&](const CVec& a, const CVec& b, const CVec& c) {
        return apply_form(model, 3, {a, b, c});
    };
    auto D = [&](const CVec& a, const CVec& b, const CVec& c, const CVec& d) {
        return apply_form(model, 4, {a, b, c, d});
    };
    auto E = [&](const CVec& a, const CVec& b, const CVec& c, const CVec& d, const CVec& e) {
        return apply_form(model, 5, {a, b, c, d, e});
    };
    auto K = [&](const CVec& a, const CVec& b, const CVec& c, const CVec& d, const CVec& e,
                 const CVec& f) { return apply_form(model, 6, {a, b, c, d, e, f}); };
    auto L = [&](const CVec& a, const CVec& b, const CVec& c, const CVec& d, const CVec& e,
                 const CVec& f, const CVec& g) { return apply_form(model, 7, {a, b, c, d, e, f, g}); };

    ExplicitCoeffs t;

    t.h11 = solve_shift(A, 0.0, B(q, qb));
    t.h20 = solve_shift(A, 2.0 * iw0, B(q, q));

    {
        Acc H21(n);
        H21.add(1.0, C(q, q, qb));
        H21.add(1.0, B(qb, t.h20));
        H21.add(2.0, B(q, t.h11));
        t.G21 = inner(p, H21.v);
        Acc rhs(n);
        rhs.add(1.0, H21.v);
        rhs.add(-t.G21, q);
        t.h21 = bordered_solve(A, w0, p, q, rhs.v).h;
    }

    {
        Acc r(n);
        r.add(3.0, B(q, t.h20));
        r.add(1.0, C(q, q, q));
        t.h30 = solve_shift(A, 3.0 * iw0, r.v);
    }

    {
        Acc r(n);
        r.add(3.0, B(t.h20, t.h20));
        r.add(4.0, B(q, t.h30));
        r.add(6.0, C(q, q, t.h20));
        r.add(1.0, D(q, q, q, q));
        t.h40 = solve_shift(A, 4.0 * iw0, r.v);
    }

    {
        Acc r(n);
        r.add(3.0, B(q, t.h21));
        r.add(1.0, B(qb, t.h30));
        r.add(3.0, B(t.h20, t.h11));
        r.add(3.0, C(q, q, t.h11));
        r.add(3.0, C(q, qb, t.h20));
        r.add(1.0, D(q, q, q, qb));
        r.add(-3.0 * t.G21, t.h20);
        t.h31 = solve_shift(A, 2.0 * iw0, r.v);
    }

    const CVec h02 = conj(t.h20);
    const CVec h12 = conj(t.h21);

    {
        // includes the coupling -2 h11 (G21 + conj G21), which only drops out
        // when l1 vanishes exactly
        Acc r(n);
        r.add(1.0, D(q, q, qb, qb));
        r.add(4.0, C(q, qb, t.h11));
        r.add(1.0, C(qb, qb, t.h20));
        r.add(1.0, C(q, q, h02));
        r.add(2.0, B(t.h11, t.h11));
        r.add(2.0, B(q, h12));
        r.add(2.0, B(qb, t.h21));
        r.add(1.0, B(h02, t.h20));
        r.add(-2.0 * (t.G21 + std::conj(t.G21)), t.h11);
        t.h22 = solve_shift(A, 0.0, r.v);
    }

    {
        Acc H32(n);
        H32.add(6.0, B(t.h11, t.h21));
        H32.add(1.0, B(h02, t.h30));
        H32.add(3.0, B(h12, t.h20));
        H32.add(3.0, B(q, t.h22));
        H32.add(2.0, B(qb, t.h31));
        H32.add(6.0, C(q, t.h11, t.h11));
        H32.add(3.0, C(q, h02, t.h20));
        H32.add(3.0, C(q, q, h12));
        H32.add(6.0, C(q, qb, t.h21));
        H32.add(6.0, C(qb, t.h20, t.h11));
        H32.add(1.0, C(qb, qb, t.h30));
        H32.add(1.0, D(q, q, q, h02));
        H32.add(6.0, D(q, q, qb, t.h11));
        H32.add(3.0, D(q, qb, qb, t.h20));
        H32.add(1.0, E(q, q, q, qb, qb));
        H32.add(-6.0 * t.G21 - 3.0 * std::conj(t.G21), t.h21);
        t.G32 = inner(p, H32.v);
        Acc rhs(n);
        rhs.add(1.0, H32.v);
        rhs.add(-t.G32, q);
        t.h32 = bordered_solve(A, w0, p, q, rhs.v).h;
    }

    {
        Acc r(n);
        r.add(4.0, B(t.h11, t.h30));
        r.add(6.0, B(t.h20, t.h21));
        r.add(4.0, B(q, t.h31));
        r.add(1.0, B(qb, t.h40));
        r.add(12.0, C(q, t.h11, t.h20));
        r.add(6.0, C(q, q, t.h21));
        r.add(4.0, C(q, qb, t.h30));
        r.add(3.0, C(qb, t.h20, t.h20));
        r.add(4.0, D(q, q, q, t.h11));
        r.add(6.0, D(q, q, qb, t.h20));
        r.add(1.0, E(q, q, q, q, qb));
        r.add(-6.0 * t.G21, t.h30);
        t.h41 = solve_shift(A, 3.0 * iw0, r.v);
    }

    {
        Acc r(n);
        r.add(8.0, B(t.h11, t.h31));
        r.add(6.0, B(t.h20, t.h22));
        r.add(1.0, B(h02, t.h40));
        r.add(6.0, B(t.h21, t.h21));
        r.add(4.0, B(h12, t.h30));
        r.add(4.0, B(q, t.h32));
        r.add(2.0, B(qb, t.h41));
        r.add(12.0, C(t.h11, t.h11, t.h20));
        r.add(3.0, C(t.h20, t.h20, h02));
        r.add(24.0, C(q, t.h11, t.h21));
        r.add(12.0, C(q, t.h20, h12));
        r.add(4.0, C(q, h02, t.h30));
        r.add(6.0, C(q, q, t.h22));
        r.add(8.0, C(q, qb, t.h31));
        r.add(8.0, C(qb, t.h11, t.h30));
        r.add(12.0, C(qb, t.h20, t.h21));
        r.add(1.0, C(qb, qb, t.h40));
        r.add(12.0, D(q, q, t.h11, t.h11));
        r.add(6.0, D(q, q, t.h20, h02));
        r.add(4.0, D(q, q, q, h12));
        r.add(12.0, D(q, q, qb, t.h21));
        r.add(24.0, D(q, qb, t.h11, t.h20));
        r.add(4.0, D(q, qb, qb, t.h30));
        r.add(3.0, D(qb, qb, t.h20, t.h20));
        r.add(1.0, E(q, q, q, q, h02));
        r.add(8.0, E(q, q, q, qb, t.h11));
        r.add(6.0, E(q, q, qb, qb, t.h20));
        r.add(1.0, K(q, q, q, q, qb, qb));
        r.add(-4.0 * t.G32, t.h20);
        r.add(-4.0 * (3.0 * t.G21 + std::conj(t.G21)), t.h31);
        t.h42 = solve_shift(A, 2.0 * iw0, r.v);
    }

    const CVec h03 = conj(t.h30);
    const CVec h13 = conj(t.h31);
    const CVec h23 = conj(t.h32);

    {
        Acc r(n);
        r.add(9.0, B(t.h11, t.h22));
        r.add(3.0, B(t.h20, h13));
        r.add(3.0, B(h02, t.h31));
        r.add(9.0, B(t.h21, h12));
        r.add(1.0, B(h03, t.h30));
        r.add(3.0, B(q, h23));
        r.add(3.0, B(qb, t.h32));
        r.add(6.0, C(t.h11, t.h11, t.h11));
        r.add(9.0, C(t.h11, h02, t.h20));
        r.add(18.0, C(q, t.h11, h12));
        r.add(3.0, C(q, t.h20, h03));
        r.add(9.0, C(q, h02, t.h21));
        r.add(3.0, C(q, q, h13));
        r.add(9.0, C(q, qb, t.h22));
        r.add(18.0, C(qb, t.h11, t.h21));
        r.add(9.0, C(qb, t.h20, h12));
        r.add(3.0, C(qb, h02, t.h30));
        r.add(3.0, C(qb, qb, t.h31));
        r.add(9.0, D(q, q, h02, t.h11));
        r.add(1.0, D(q, q, q, h03));
        r.add(9.0, D(q, q, qb, h12));
        r.add(18.0, D(q, qb, t.h11, t.h11));
        r.add(9.0, D(q, qb, h02, t.h20));
        r.add(9.0, D(q, qb, qb, t.h21));
        r.add(9.0, D(qb, qb, t.h11, t.h20));
        // conjugate of the (q,q,q,h03) term; forced because h33 is real
        r.add(1.0, D(qb, qb, qb, t.h30));
        r.add(3.0, E(q, q, q, qb, h02));
        r.add(9.0, E(q, q, qb, qb, t.h11));
        r.add(3.0, E(q, qb, qb, qb, t.h20));
        r.add(1.0, K(q, q, q, qb, qb, qb));
        r.add(-3.0 * (t.G32 + std::conj(t.G32)), t.h11);
        r.add(-9.0 * (t.G21 + std::conj(t.G21)), t.h22);
        t.h33 = solve_shift(A, 0.0, r.v);
    }

    {
        Acc H43(n);
        H43.add(12.0, B(t.h11, t.h32));
        H43.add(6.0, B(t.h20, h23));
        H43.add(3.0, B(h02, t.h41));
        H43.add(18.0, B(t.h21, t.h22));
        H43.add(12.0, B(h12, t.h31));
        H43.add(4.0, B(t.h30, h13));
        H43.add(1.0, B(h03, t.h40));
        H43.add(4.0, B(q, t.h33));
        H43.add(3.0, B(qb, t.h42));
        H43.add(36.0, C(t.h11, t.h11, t.h21));
        H43.add(36.0, C(t.h11, t.h20, h12));
        H43.add(12.0, C(t.h11, h02, t.h30));
        H43.add(3.0, C(t.h20, t.h20, h03));
        H43.add(18.0, C(t.h20, h02, t.h21));
        H43.add(36.0, C(q, t.h11, t.h22));
        H43.add(12.0, C(q, t.h20, h13));
        H43.add(12.0, C(q, h02, t.h31));
        H43.add(36.0, C(q, t.h21, h12));
        H43.add(4.0, C(q, t.h30, h03));
        H43.add(6.0, C(q, q, h23));
        H43.add(12.0, C(q, qb, t.h32));
        H43.add(24.0, C(qb, t.h11, t.h31));
        H43.add(18.0, C(qb, t.h20, t.h22));
        H43.add(3.0, C(qb, h02, t.h40));
        H43.add(18.0, C(qb, t.h21, t.h21));
        H43.add(12.0, C(qb, h12, t.h30));
        H43.add(3.0, C(qb, qb, t.h41));
        H43.add(24.0, D(q, t.h11, t.h11, t.h11));
        H43.add(36.0, D(q, t.h11, t.h20, h02));
        H43.add(36.0, D(q, q, t.h11, h12));
        H43.add(6.0, D(q, q, t.h20, h03));
        H43.add(18.0, D(q, q, h02, t.h21));
        H43.add(4.0, D(q, q, q, h13));
        H43.add(18.0, D(q, q, qb, t.h22));
        H43.add(72.0, D(q, qb, t.h11, t.h21));
        H43.add(36.0, D(q, qb, t.h20, h12));
        H43.add(12.0, D(q, qb, h02, t.h30));
        H43.add(12.0, D(q, qb, qb, t.h31));
        H43.add(36.0, D(qb, t.h11, t.h11, t.h20));
        H43.add(9.0, D(qb, t.h20, t.h20, h02));
        H43.add(12.0, D(qb, qb, t.h11, t.h30));
        H43.add(18.0, D(qb, qb, t.h20, t.h21));
        H43.add(1.0, D(qb, qb, qb, t.h40));
        H43.add(12.0, E(q, q, q, t.h11, h02));
        H43.add(1.0, E(q, q, q, q, h03));
        H43.add(12.0, E(q, q, q, qb, h12));
        H43.add(36.0, E(q, q, qb, t.h11, t.h11));
        H43.add(18.0, E(q, q, qb, t.h20, h02));
        H43.add(18.0, E(q, q, qb, qb, t.h21));
        H43.add(36.0, E(q, qb, qb, t.h11, t.h20));
        H43.add(4.0, E(q, qb, qb, qb, t.h30));
        H43.add(3.0, E(qb, qb, qb, t.h20, t.h20));
        H43.add(3.0, K(q, q, q, q, qb, h02));
        H43.add(12.0, K(q, q, q, qb, qb, t.h11));
        H43.add(6.0, K(q, q, qb, qb, qb, t.h20));
        H43.add(1.0, L(q, q, q, q, qb, qb, qb));
        H43.add(-6.0 * (2.0 * t.G32 + std::conj(t.G32)), t.h21);
        H43.add(-6.0 * (3.0 * t.G21 + 2.0 * std::conj(t.G21)), t.h32);
        t.G43 = inner(p, H43.v);
        Acc rhs(n);
        rhs.add(1.0, H43.v);
        rhs.add(-t.G43, q);
        t.h43 = bordered_solve(A, w0, p, q, rhs.v).h;
    }

    return t;
}

// ---------------------------------------------------------------------------
// planar oracle: scalar Poincare normal form

namespace {

// dense scalar bivariate grids; every grid in one oracle run shares the same
// allocation stride (deg+1), truncation is a separate bound
using Grid = std::vector<cx>;

Grid grid_make(int deg) { return Grid((deg + 1) * (deg + 1), cx(0)); }

cx grid_get(const Grid& g, int deg, int j, int k) {
    return (j >= 0 && k >= 0 && j + k <= deg) ? g[j * (deg + 1) + k] : cx(0);
}

void grid_set(Grid& g, int deg, int j, int k, cx v) { g[j * (deg + 1) + k] = v; }

Grid grid_mul(const Grid& a, const Grid& b, int deg, int trunc) {
    Grid out = grid_make(deg);
    for (int j1 = 0; j1 <= trunc; ++j1)
        for (int k1 = 0; j1 + k1 <= trunc; ++k1) {
            cx av = a[j1 * (deg + 1) + k1];
            if (av == cx(0)) continue;
            for (int j2 = 0; j1 + k1 + j2 <= trunc; ++j2)
                for (int k2 = 0; j1 + k1 + j2 + k2 <= trunc; ++k2) {
                    cx bv = b[j2 * (deg + 1) + k2];
                    if (bv == cx(0)) continue;
                    out[(j1 + j2) * (deg + 1) + (k1 + k2)] += av * bv;
                }
        }
    return out;
}

} // namespace

std::array<cx, 4> planar_oracle(const HomogeneousModel& model, const CriticalPair& pair,
                                int level) {
    if (model.dimension() != 2)
        throw precondition_error("planar_oracle requires a two-dimensional field");
    if (level < 1 || level > 4) throw precondition_error("level must be in 1..4");
    const int deg = 2 * level + 1;
    if (model.max_order() < deg)
        throw precondition_error("planar_oracle needs model order >= " + std::to_string(deg));

    const CVec& q = pair.q;
    const CVec& p = pair.p;
    const cx lam(0.0, pair.omega0);

    // scalar Taylor coefficients of z' = <p, F(z q + zbar qbar)>:
    // g_{JK} = <p, Form_{J+K}(q x J, qbar x K)> / (J! K!)
    Grid g = grid_make(deg);
    for (int d = 2; d <= deg; ++d) {
        for (int J = 0; J <= d; ++J) {
            int Kc = d - J;
            std::vector<CVec> args;
            args.reserve(d);
            for (int s = 0; s < J; ++s) args.push_back(q);
            for (int s = 0; s < Kc; ++s) args.push_back(conj(q));
            CVec form = apply_form(model, d, args);
            grid_set(g, deg, J, Kc, inner(p, form) / (factorial(J) * factorial(Kc)));
        }
    }

    // near-identity transformation z = T(v, vbar), T = v + higher terms; its
    // coefficients are independent in (j,k) (no conjugation symmetry)
    Grid T = grid_make(deg);
    grid_set(T, deg, 1, 0, 1.0);

    std::array<cx, 4> c{};
    int known = 0;

    for (int d = 2; d <= deg; ++d) {
        // compose the scalar field with the transformation known so far
        Grid Tb = grid_make(deg);
        for (int j = 0; j <= deg; ++j)
            for (int k = 0; j + k <= deg; ++k)
                grid_set(Tb, deg, j, k, std::conj(grid_get(T, deg, k, j)));

        std::vector<Grid> pT{grid_make(deg)}, pTb{grid_make(deg)};
        grid_set(pT[0], deg, 0, 0, 1.0);
        grid_set(pTb[0], deg, 0, 0, 1.0);
        for (int e = 1; e <= d; ++e) {
            pT.push_back(grid_mul(pT[e - 1], T, deg, d));
            pTb.push_back(grid_mul(pTb[e - 1], Tb, deg, d));
        }

        Grid S = grid_make(deg);
        for (int J = 0; J <= d; ++J)
            for (int Kc = 0; J + Kc <= d; ++Kc) {
                if (J + Kc < 2) continue;
                cx gv = grid_get(g, deg, J, Kc);
                if (gv == cx(0)) continue;
                Grid prod = grid_mul(pT[J], pTb[Kc], deg, d);
                for (int j = 0; j <= d; ++j)
                    for (int k = 0; j + k <= d; ++k)
                        S[j * (deg + 1) + k] += gv * prod[j * (deg + 1) + k];
            }

        for (int j = d; j >= 0; --j) {
            int k = d - j;
            cx R = grid_get(S, deg, j, k);
            for (int m = 1; m <= known; ++m) {
                int r = j - m, s = k - m;
                if (r < 0 || s < 0 || r + s < 1) continue;
                if (j == k + 1 && m == k) continue;
                R -= (double(r) * c[m - 1] + double(s) * std::conj(c[m - 1])) *
                     grid_get(T, deg, r, s);
            }
            if (j == k + 1) {
                c[k - 1] = R;
                known = std::max(known, k);
                // resonant transformation component stays zero
            } else {
                cx denom = cx(0.0, double(j - k - 1) * pair.omega0);
                grid_set(T, deg, j, k, R / denom);
            }
        }
    }

    std::array<cx, 4> G{};
    for (int m = 1; m <= level; ++m) G[m - 1] = factorial(m + 1) * factorial(m) * c[m - 1];
    return G;
}

VectorFieldSpec normal_form_system(double omega0, const std::array<cx, 4>& c) {
    if (!(omega0 > 0.0)) throw precondition_error("normal_form_system requires omega0 > 0");
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "(%.17g)", v);
        return std::string(buf);
    };
    std::ostringstream fx, fy;
    fx << "-" << num(omega0) << "*y";
    fy << num(omega0) << "*x";
    for (int k = 1; k <= 4; ++k) {
        cx ck = c[k - 1];
        if (ck == cx(0)) continue;
        std::string radial = "(x^2 + y^2)";
        if (k > 1) radial += "^" + std::to_string(k);
        fx << " + " << radial << "*(" << num(ck.real()) << "*x + " << num(-ck.imag()) << "*y)";
        fy << " + " << radial << "*(" << num(ck.imag()) << "*x + " << num(ck.real()) << "*y)";
    }
    return VectorFieldSpec({"x", "y"}, {}, std::vector<std::string>{fx.str(), fy.str()});
}

// ---------------------------------------------------------------------------
// degree-(5,4) closed-form reconstruction

namespace {

struct DisplayTerm {
    double coeff;
    std::vector<std::pair<int, int>> slots; // (1,0) = q, (0,1) = qbar, else h_jk
};

// Closed-form term list for the degree-(5,4) right side. Three entries carry
// a degree signature inconsistent with (5,4) or an ambiguous conjugate
// subscript; the reconstruction filters them out and reports the exclusions.
const std::vector<DisplayTerm>& h54_terms() {
    static const std::vector<DisplayTerm> terms = {
        {20, {{1, 1}, {4, 3}}},
        {10, {{2, 0}, {3, 4}}},
        {6, {{0, 2}, {5, 2}}},
        {40, {{2, 1}, {3, 3}}},
        {30, {{1, 2}, {4, 2}}},
        {60, {{2, 2}, {3, 2}}},
        {10, {{3, 0}, {2, 4}}},
        {4, {{0, 3}, {5, 1}}},
        {40, {{3, 1}, {2, 3}}},
        {20, {{1, 3}, {4, 1}}},
        {5, {{4, 0}, {1, 4}}},
        {1, {{0, 4}, {5, 0}}},
        {5, {{1, 0}, {4, 4}}},
        {4, {{0, 1}, {5, 3}}},
        {120, {{1, 1}, {1, 1}, {3, 2}}},
        {60, {{1, 1}, {0, 2}, {4, 1}}},
        {360, {{1, 1}, {2, 1}, {2, 2}}},
        {240, {{1, 1}, {1, 2}, {3, 1}}},
        {80, {{1, 1}, {3, 0}, {1, 3}}},
        {20, {{1, 1}, {0, 3}, {4, 0}}},
        {120, {{2, 0}, {1, 1}, {2, 3}}},
        {15, {{2, 0}, {2, 0}, {1, 4}}},
        {60, {{2, 0}, {0, 2}, {3, 2}}},
        {120, {{2, 0}, {2, 1}, {1, 3}}},
        {180, {{2, 0}, {1, 2}, {2, 2}}},
        {10, {{2, 0}, {3, 0}, {0, 4}}},
        {40, {{2, 0}, {0, 3}, {3, 1}}},
        {3, {{0, 2}, {0, 2}, {5, 0}}},
        {120, {{0, 2}, {2, 1}, {3, 1}}},
        {30, {{0, 2}, {1, 2}, {4, 0}}},
        {60, {{0, 2}, {3, 0}, {2, 2}}},
        {180, {{2, 1}, {2, 1}, {1, 2}}},
        {60, {{1, 2}, {1, 2}, {3, 0}}},
        {40, {{3, 0}, {2, 1}, {0, 3}}},
        {80, {{1, 0}, {1, 1}, {3, 3}}},
        {30, {{1, 0}, {2, 0}, {2, 4}}},
        {30, {{1, 0}, {0, 2}, {4, 2}}},
        {120, {{1, 0}, {2, 1}, {2, 3}}},
        {120, {{1, 0}, {1, 2}, {3, 2}}},
        {90, {{1, 0}, {2, 2}, {2, 2}}},
        {20, {{1, 0}, {3, 0}, {1, 4}}},
        {20, {{1, 0}, {0, 3}, {4, 1}}},
        {80, {{1, 0}, {3, 1}, {1, 3}}},
        {5, {{1, 0}, {4, 0}, {0, 4}}},
        {10, {{1, 0}, {1, 0}, {3, 4}}},
        {20, {{1, 0}, {0, 1}, {4, 3}}},
        {60, {{0, 1}, {1, 1}, {4, 2}}},
        {40, {{0, 1}, {2, 0}, {3, 3}}},
        {12, {{0, 1}, {0, 2}, {5, 1}}},
        {120, {{0, 1}, {2, 1}, {3, 2}}},
        {60, {{0, 1}, {1, 2}, {4, 1}}},
        {40, {{0, 1}, {3, 0}, {2, 3}}},
        {4, {{0, 1}, {0, 3}, {5, 0}}},
        {120, {{0, 1}, {3, 1}, {2, 2}}},
        {20, {{0, 1}, {4, 0}, {1, 3}}},
        {6, {{0, 1}, {0, 1}, {5, 2}}},
        {240, {{1, 1}, {1, 1}, {1, 1}, {2, 1}}},
        {120, {{1, 1}, {1, 1}, {0, 2}, {3, 0}}},
        {360, {{2, 0}, {1, 1}, {1, 1}, {1, 2}}},
        {360, {{2, 0}, {1, 1}, {0, 2}, {2, 1}}},
        {60, {{2, 0}, {2, 0}, {1, 1}, {0, 3}}},
        {90, {{2, 0}, {2, 0}, {0, 2}, {1, 2}}},
        {30, {{2, 0}, {0, 2}, {0, 2}, {3, 0}}},
        {360, {{1, 0}, {1, 1}, {1, 1}, {2, 2}}},
        {240, {{1, 0}, {1, 1}, {0, 2}, {3, 1}}},
        {720, {{1, 0}, {1, 1}, {2, 1}, {1, 2}}},
        {80, {{1, 0}, {1, 1}, {3, 0}, {0, 3}}},
        {240, {{1, 0}, {2, 0}, {1, 1}, {1, 3}}},
        {15, {{1, 0}, {2, 0}, {2, 0}, {0, 4}}},
        {180, {{1, 0}, {2, 0}, {0, 2}, {2, 2}}},
        {120, {{1, 0}, {2, 0}, {2, 1}, {0, 3}}},
        {180, {{1, 0}, {2, 0}, {1, 2}, {1, 2}}},
        {15, {{1, 0}, {0, 2}, {0, 2}, {4, 0}}},
        {180, {{1, 0}, {0, 2}, {0, 2}, {2, 1}}}, // degree (3,5); filtered
        {120, {{1, 0}, {0, 2}, {3, 0}, {1, 2}}},
        {120, {{1, 0}, {1, 0}, {1, 1}, {2, 3}}},
        {30, {{1, 0}, {1, 0}, {2, 0}, {1, 4}}},
        {60, {{1, 0}, {1, 0}, {0, 2}, {3, 2}}},
        {120, {{1, 0}, {1, 0}, {2, 1}, {1, 3}}},
        {180, {{1, 0}, {1, 0}, {1, 2}, {2, 2}}},
        {10, {{1, 0}, {1, 0}, {3, 0}, {0, 4}}},
        {40, {{1, 0}, {1, 0}, {0, 3}, {3, 1}}},
        {10, {{1, 0}, {1, 0}, {1, 0}, {2, 4}}},
        {40, {{1, 0}, {1, 0}, {0, 1}, {3, 3}}},
        {240, {{1, 0}, {0, 1}, {1, 1}, {3, 2}}},
        {120, {{1, 0}, {0, 1}, {2, 0}, {2, 3}}},
        {60, {{1, 0}, {0, 1}, {0, 2}, {4, 1}}},
        {360, {{1, 0}, {0, 1}, {2, 1}, {2, 2}}},
        {240, {{1, 0}, {0, 1}, {1, 2}, {3, 1}}},
        {80, {{1, 0}, {0, 1}, {3, 0}, {1, 3}}},
        {20, {{1, 0}, {0, 1}, {0, 3}, {4, 0}}},
        {30, {{1, 0}, {0, 1}, {0, 1}, {4, 2}}},
        {240, {{0, 1}, {1, 1}, {1, 1}, {3, 1}}},
        {60, {{0, 1}, {1, 1}, {0, 2}, {4, 0}}},
        {360, {{0, 1}, {1, 1}, {2, 1}, {2, 1}}},
        {240, {{0, 1}, {1, 1}, {3, 0}, {1, 2}}},
        {360, {{0, 1}, {2, 0}, {1, 1}, {2, 2}}},
        {60, {{0, 1}, {2, 0}, {2, 0}, {1, 3}}},
        {120, {{0, 1}, {2, 0}, {0, 2}, {3, 1}}},
        {360, {{0, 1}, {2, 0}, {2, 1}, {1, 2}}},
        {40, {{0, 1}, {2, 0}, {3, 0}, {0, 3}}},
        {120, {{0, 1}, {0, 2}, {3, 0}, {2, 1}}},
        {60, {{0, 1}, {0, 1}, {1, 1}, {4, 1}}},
        {60, {{0, 1}, {0, 1}, {2, 0}, {3, 2}}},
        {6, {{0, 1}, {0, 1}, {2, 0}, {5, 0}}}, // degree (7,2); filtered
        {120, {{0, 1}, {0, 1}, {2, 1}, {3, 1}}},
        {60, {{0, 1}, {0, 1}, {3, 0}, {2, 2}}},
        {4, {{0, 1}, {0, 1}, {0, 1}, {5, 1}}},
        {120, {{1, 0}, {1, 1}, {1, 1}, {1, 1}, {1, 1}}},
        {360, {{1, 0}, {2, 0}, {1, 1}, {1, 1}, {0, 2}}},
        {45, {{1, 0}, {2, 0}, {2, 0}, {0, 2}, {0, 2}}},
        {360, {{1, 0}, {1, 0}, {1, 1}, {1, 1}, {1, 2}}},
        {360, {{1, 0}, {1, 0}, {1, 1}, {0, 2}, {2, 1}}},
        {120, {{1, 0}, {1, 0}, {2, 0}, {1, 1}, {0, 3}}},
        {180, {{1, 0}, {1, 0}, {2, 0}, {0, 2}, {1, 2}}},
        {30, {{1, 0}, {1, 0}, {0, 2}, {0, 2}, {3, 0}}},
        {80, {{1, 0}, {1, 0}, {1, 0}, {1, 1}, {1, 3}}},
        {10, {{1, 0}, {1, 0}, {1, 0}, {2, 0}, {0, 4}}},
        {60, {{1, 0}, {1, 0}, {1, 0}, {0, 2}, {2, 2}}},
        {40, {{1, 0}, {1, 0}, {1, 0}, {2, 1}, {0, 3}}},
        {60, {{1, 0}, {1, 0}, {1, 0}, {1, 2}, {1, 2}}},
        {5, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 4}}},
        {40, {{1, 0}, {1, 0}, {1, 0}, {0, 1}, {2, 3}}},
        {360, {{1, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 2}}},
        {120, {{1, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 3}}},
        {120, {{1, 0}, {1, 0}, {0, 1}, {0, 2}, {3, 1}}},
        {360, {{1, 0}, {1, 0}, {0, 1}, {2, 1}, {1, 2}}},
        {40, {{1, 0}, {1, 0}, {0, 1}, {3, 0}, {0, 3}}},
        {60, {{1, 0}, {1, 0}, {0, 1}, {0, 1}, {3, 2}}},
        {720, {{1, 0}, {0, 1}, {1, 1}, {1, 1}, {2, 1}}},
        {240, {{1, 0}, {0, 1}, {1, 1}, {0, 2}, {3, 0}}},
        {720, {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {1, 2}}},
        {60, {{1, 0}, {0, 1}, {2, 0}, {2, 0}, {0, 3}}},
        {360, {{1, 0}, {0, 1}, {2, 0}, {0, 2}, {2, 1}}},
        {240, {{1, 0}, {0, 1}, {0, 1}, {1, 1}, {3, 1}}},
        {180, {{1, 0}, {0, 1}, {0, 1}, {2, 0}, {2, 2}}},
        {30, {{1, 0}, {0, 1}, {0, 1}, {0, 2}, {4, 0}}},
        {180, {{1, 0}, {0, 1}, {0, 1}, {2, 1}, {2, 1}}},
        {120, {{1, 0}, {0, 1}, {0, 1}, {3, 0}, {1, 2}}},
        {20, {{1, 0}, {0, 1}, {0, 1}, {0, 1}, {4, 1}}},
        {240, {{0, 1}, {2, 0}, {1, 1}, {1, 1}, {1, 1}}},
        {180, {{0, 1}, {2, 0}, {2, 0}, {1, 1}, {0, 2}}},
        {120, {{0, 1}, {0, 1}, {1, 1}, {1, 1}, {3, 0}}},
        {360, {{0, 1}, {0, 1}, {2, 0}, {1, 1}, {2, 1}}},
        {90, {{0, 1}, {0, 1}, {2, 0}, {2, 0}, {1, 2}}},
        {60, {{0, 1}, {0, 1}, {2, 0}, {0, 2}, {3, 0}}},
        {20, {{0, 1}, {0, 1}, {0, 1}, {1, 1}, {4, 0}}},
        {40, {{0, 1}, {0, 1}, {0, 1}, {2, 0}, {3, 1}}},
        {40, {{0, 1}, {0, 1}, {0, 1}, {3, 0}, {2, 1}}},
        {1, {{0, 1}, {0, 1}, {0, 1}, {0, 1}, {5, 0}}},
        {120, {{1, 0}, {1, 0}, {1, 0}, {1, 1}, {1, 1}, {0, 2}}},
        {30, {{1, 0}, {1, 0}, {1, 0}, {2, 0}, {0, 2}, {0, 2}}},
        {20, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 1}, {0, 3}}},
        {30, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 2}, {1, 2}}},
        {1, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 4}}},
        {20, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 1}, {1, 3}}},
        {240, {{1, 0}, {1, 0}, {1, 0}, {0, 1}, {1, 1}, {1, 2}}},
        {40, {{1, 0}, {1, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 3}}},
        {120, {{1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 2}, {2, 1}}},
        {60, {{1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {2, 2}}},
        {240, {{1, 0}, {1, 0}, {0, 1}, {1, 1}, {1, 1}, {1, 1}}},
        {360, {{1, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}},
        {360, {{1, 0}, {1, 0}, {0, 1}, {0, 1}, {1, 1}, {2, 1}}},
        {180, {{1, 0}, {1, 0}, {0, 1}, {0, 1}, {2, 0}, {1, 2}}},
        {60, {{1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 2}, {3, 0}}},
        {40, {{1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}, {3, 1}}},
        {360, {{1, 0}, {0, 1}, {0, 1}, {2, 0}, {1, 1}, {1, 1}}},
        {90, {{1, 0}, {0, 1}, {0, 1}, {2, 0}, {2, 0}, {0, 2}}},
        {80, {{1, 0}, {0, 1}, {0, 1}, {0, 1}, {1, 1}, {3, 0}}},
        {120, {{1, 0}, {0, 1}, {0, 1}, {0, 1}, {2, 0}, {2, 1}}},
        {5, {{1, 0}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {4, 0}}},
        {60, {{0, 1}, {0, 1}, {0, 1}, {2, 0}, {2, 0}, {1, 1}}},
        {10, {{0, 1}, {0, 1}, {0, 1}, {0, 1}, {2, 0}, {3, 0}}},
        {3, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 2}, {0, 2}}},
        {4, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 3}}},
        {60, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 1}, {1, 1}, {0, 2}}},
        {30, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {1, 2}}},
        {120, {{1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {1, 1}, {1, 1}}},
        {60, {{1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {2, 0}, {0, 2}}},
        {40, {{1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}, {2, 1}}},
        {120, {{1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}, {2, 0}, {1, 1}}},
        {10, {{1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {3, 0}}},
        {15, {{1, 0}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {2, 0}, {2, 0}}},
        {6, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 2}}},
        {20, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}, {1, 1}}},
        {10, {{1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {2, 0}}},
        {1, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 1}, {0, 1}}},
    };
    return terms;
}

} // namespace

CVec h54_closed_form(const HomogeneousModel& model, const CenterManifoldTable& table,
                     std::vector<std::string>* excluded) {
    if (table.level < 4)
        throw precondition_error("h54 reconstruction needs a level-4 table");
    const int n = model.dimension();

    auto slot_value = [&](std::pair<int, int> jk) -> CVec {
        if (jk == std::pair<int, int>{1, 0}) return table.q;
        if (jk == std::pair<int, int>{0, 1}) return conj(table.q);
        const CVec* h = table.coefficient(jk.first, jk.second);
        if (!h)
            throw precondition_error("missing table coefficient h_" + std::to_string(jk.first) +
                                     std::to_string(jk.second));
        return *h;
    };

    CVec total(n, cx(0));
    for (const DisplayTerm& term : h54_terms()) {
        int dj = 0, dk = 0;
        for (auto [j, k] : term.slots) {
            dj += j;
            dk += k;
        }
        if (dj != 5 || dk != 4) {
            if (excluded) {
                std::ostringstream msg;
                msg << "term with weight " << term.coeff << " has degree signature (" << dj << ","
                    << dk << "), not (5,4); excluded";
                excluded->push_back(msg.str());
            }
            continue;
        }
        std::vector<CVec> args;
        args.reserve(term.slots.size());
        for (auto jk : term.slots) args.push_back(slot_value(jk));
        CVec form = apply_form(model, static_cast<int>(term.slots.size()), args);
        for (int i = 0; i < n; ++i) total[i] += term.coeff * form[i];
    }
    if (excluded)
        excluded->push_back(
            "one order-4 term has an ambiguous conjugate subscript and is excluded");
    return total;
}

CVec h54_field_part(const HomogeneousModel& model, const CenterManifoldTable& table) {
    if (table.level < 4)
        throw precondition_error("h54 field part needs a level-4 table");
    const int n = model.dimension();
    BivariatePolyVec H(n, 9);
    H.set(1, 0, table.q);
    H.set(0, 1, conj(table.q));
    for (const auto& [jk, hv] : table.h) {
        double f = factorial(jk.first) * factorial(jk.second);
        CVec taylor(n);
        for (int i = 0; i < n; ++i) taylor[i] = hv[i] / f;
        H.set(jk.first, jk.second, std::move(taylor));
    }
    BivariatePolyVec FH = compose_field(model, H, 9);
    CVec phi = FH.get(5, 4);
    for (int i = 0; i < n; ++i) phi[i] *= 2880.0;
    return phi;
}

} // namespace hopf
