#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "hopf/errors.hpp"
#include "hopf/types.hpp"

namespace hopf {

// Truncated scalar series in (w, conj w): dense (deg+1)^2 grid, entries with
// j + k > deg are kept at zero.
class BiPoly {
public:
    explicit BiPoly(int max_degree) : deg_(max_degree), c_((max_degree + 1) * (max_degree + 1), cx(0)) {}

    int max_degree() const { return deg_; }
    cx get(int j, int k) const { return (j <= deg_ && k <= deg_ && j + k <= deg_) ? c_[idx(j, k)] : cx(0); }
    void set(int j, int k, cx v) { c_[idx(j, k)] = v; }
    void add(int j, int k, cx v) { c_[idx(j, k)] += v; }

private:
    int idx(int j, int k) const { return j * (deg_ + 1) + k; }
    int deg_;
    std::vector<cx> c_;
};

inline BiPoly mul_trunc(const BiPoly& a, const BiPoly& b, int deg) {
    BiPoly out(deg);
    for (int j1 = 0; j1 <= std::min(a.max_degree(), deg); ++j1)
        for (int k1 = 0; j1 + k1 <= std::min(a.max_degree(), deg); ++k1) {
            cx av = a.get(j1, k1);
            if (av == cx(0)) continue;
            for (int j2 = 0; j1 + k1 + j2 <= deg && j2 <= b.max_degree(); ++j2)
                for (int k2 = 0; j1 + k1 + j2 + k2 <= deg && j2 + k2 <= b.max_degree(); ++k2) {
                    cx bv = b.get(j2, k2);
                    if (bv == cx(0)) continue;
                    out.add(j1 + j2, k1 + k2, av * bv);
                }
        }
    return out;
}

inline BiPoly d_dw(const BiPoly& a) {
    BiPoly out(a.max_degree());
    for (int j = 1; j <= a.max_degree(); ++j)
        for (int k = 0; j + k <= a.max_degree(); ++k) out.set(j - 1, k, double(j) * a.get(j, k));
    return out;
}

inline BiPoly d_dwbar(const BiPoly& a) {
    BiPoly out(a.max_degree());
    for (int j = 0; j <= a.max_degree(); ++j)
        for (int k = 1; j + k <= a.max_degree(); ++k) out.set(j, k - 1, double(k) * a.get(j, k));
    return out;
}

// Vector-valued truncated series in (w, conj w): map from exponent pairs to
// complex n-vector coefficients. Coefficients below 1e-300 are pruned.
class BivariatePolyVec {
public:
    BivariatePolyVec(int dimension, int max_degree) : n_(dimension), deg_(max_degree) {}

    int dimension() const { return n_; }
    int max_degree() const { return deg_; }

    void set(int j, int k, CVec v) {
        if (j + k > deg_)
            throw precondition_error("bivariate coefficient beyond degree bound");
        if (norm_inf(v) < 1e-300) {
            c_.erase({j, k});
            return;
        }
        c_[{j, k}] = std::move(v);
    }

    const CVec* find(int j, int k) const {
        auto it = c_.find({j, k});
        return it == c_.end() ? nullptr : &it->second;
    }

    CVec get(int j, int k) const {
        const CVec* v = find(j, k);
        return v ? *v : CVec(n_, cx(0));
    }

    const std::map<std::pair<int, int>, CVec>& entries() const { return c_; }

    BiPoly component(int i, int degree) const {
        BiPoly out(degree);
        for (const auto& [jk, v] : c_)
            if (jk.first + jk.second <= degree) out.set(jk.first, jk.second, v[i]);
        return out;
    }

private:
    int n_, deg_;
    std::map<std::pair<int, int>, CVec> c_;
};

} // namespace hopf
