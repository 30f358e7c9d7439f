#pragma once

#include <vector>

#include "hopf/errors.hpp"
#include "hopf/types.hpp"

namespace hopf {

// LU with partial pivoting; throws numeric_error when a pivot falls below
// 1e-14 * ||M||_inf (signals resonance or a zero eigenvalue).
CVec solve_complex(const CMat& M, const CVec& b);

// Determinant via LU; test oracle for the eigensolver.
cx det_complex(CMat M);

enum class eig_class { critical_pair, zero_real_other, stable, unstable };

struct Spectrum {
    std::vector<cx> values;            // descending Re, then descending Im
    std::vector<eig_class> classes;
    double purity_tol = 0.0;           // absolute threshold used for |Re|
};

// All eigenvalues of a real matrix via Householder reduction to Hessenberg
// form followed by Francis double-shift QR iteration. Classification uses
// purity_tol_rel * (1 + ||A||_inf) for "zero real part".
Spectrum eigen_all(const RMat& A, double purity_tol_rel = 1e-8);

struct CriticalPair {
    double omega0 = 0.0;
    CVec q, p;
    double q_residual = 0.0; // ||A q - i w0 q|| / ||q||
    double p_residual = 0.0;
};

// Normalized critical eigenpair: A q = i w0 q, A^T p = -i w0 p, <p,q> = 1.
// Gauge: ||q||_2 = 1/sqrt(2) with the largest-magnitude component of q real
// and positive; with this scaling the w-chart of the standard planar center
// x' = -w0 y, y' = w0 x is exactly x + iy.
CriticalPair critical_pair(const RMat& A, const Spectrum& spectrum);

// Eigen-triple for a (possibly off-axis) simple eigenvalue, used when the
// analysis is continued in parameters: picks the eigenvalue nearest to
// `target`, errors out when the two nearest candidates are within 10% of
// each other or the tracked eigenvalue has lost its imaginary part.
struct TrackedPair {
    cx lambda;
    CVec q, p;
};
TrackedPair track_pair(const RMat& A, cx target);

struct BorderedSolution {
    CVec h;
    cx s = 0.0;
    double compat_defect = 0.0;  // |<p, rhs>|
    bool compat_warning = false; // defect > 1e-8 * ||rhs||
    double residual = 0.0;       // singular-system residual ||(shift I - A) h - rhs||
};

// Solves the nonsingular (n+1)-dimensional system
//   [ i w0 I - A   q ] [h]   [rhs]
//   [ conj(p)^T    0 ] [s] = [ 0 ]
// When <p, rhs> = 0 the returned h solves (i w0 I - A) h = rhs with
// <p, h> = 0 and s ~ 0; in general s = <p, rhs>.
BorderedSolution bordered_solve(const RMat& A, double omega0, const CVec& p, const CVec& q,
                                const CVec& rhs);

// Same bordered system with a general complex shift in place of i w0.
BorderedSolution bordered_solve_shifted(const RMat& A, cx shift, const CVec& p, const CVec& q,
                                        const CVec& rhs);

// Singular values (descending) of a small real rectangular matrix, via the
// symmetric eigenproblem of J J^T; adequate for the rank checks here.
std::vector<double> singular_values(const RMat& J);

} // namespace hopf
