#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace hopf {

using cx = std::complex<double>;
using RVec = std::vector<double>;
using CVec = std::vector<cx>;

// Small dense row-major matrix. All problems here are desk scale (n <= ~20),
// so no effort is spent on layout or blocking.
template <typename T>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, T{}) {}

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

using RMat = Mat<double>;
using CMat = Mat<cx>;

inline double norm_inf(const RVec& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double norm_inf(const CVec& v) {
    double m = 0;
    for (const cx& x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double norm2(const CVec& v) {
    double s = 0;
    for (const cx& x : v) s += std::norm(x);
    return std::sqrt(s);
}

inline double norm2(const RVec& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Row-sum norm.
template <typename T>
double norm_inf(const Mat<T>& m) {
    double best = 0;
    for (int i = 0; i < m.rows; ++i) {
        double s = 0;
        for (int j = 0; j < m.cols; ++j) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

// <p, y> = sum conj(p_i) y_i
inline cx inner(const CVec& p, const CVec& y) {
    cx s = 0;
    for (size_t i = 0; i < p.size(); ++i) s += std::conj(p[i]) * y[i];
    return s;
}

inline CVec conj(const CVec& v) {
    CVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = std::conj(v[i]);
    return r;
}

inline CVec operator*(cx a, const CVec& v) {
    CVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = a * v[i];
    return r;
}

inline CVec& operator+=(CVec& u, const CVec& v) {
    for (size_t i = 0; i < u.size(); ++i) u[i] += v[i];
    return u;
}

inline CVec& operator-=(CVec& u, const CVec& v) {
    for (size_t i = 0; i < u.size(); ++i) u[i] -= v[i];
    return u;
}

inline CVec operator+(CVec u, const CVec& v) { u += v; return u; }
inline CVec operator-(CVec u, const CVec& v) { u -= v; return u; }

inline CVec matvec(const CMat& m, const CVec& v) {
    CVec r(m.rows, cx(0));
    for (int i = 0; i < m.rows; ++i) {
        cx s = 0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline CVec matvec(const RMat& m, const CVec& v) {
    CVec r(m.rows, cx(0));
    for (int i = 0; i < m.rows; ++i) {
        cx s = 0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline RVec matvec(const RMat& m, const RVec& v) {
    RVec r(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline RMat transpose(const RMat& m) {
    RMat t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

inline CMat complex_copy(const RMat& m) {
    CMat c(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) c(i, j) = m(i, j);
    return c;
}

} // namespace hopf
