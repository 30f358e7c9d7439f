#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "hopf/linalg.hpp"
#include "hopf/mlforms.hpp"
#include "hopf/series.hpp"

namespace hopf {

struct SolveDiagnostic {
    int j = 0, k = 0;
    bool bordered = false;
    double rhs_norm = 0.0;      // norm of the assembled right side
    double residual = 0.0;      // linear-system residual
    double s_mag = 0.0;         // |s| of the bordered solve
    double ortho = 0.0;         // |<p, h>| for resonant coefficients
    double compat_defect = 0.0; // |<p, rhs>| fed to the bordered system
};

// Output of the homological recursion: coefficients of the center-manifold
// immersion H(w, wbar) = w q + wbar qbar + sum h_jk w^j wbar^k / (j! k!) and
// the resonant coefficients of the restricted equation
// w' = lambda w + G21 w|w|^2 / 2 + G32 w|w|^4 / 12 + G43 w|w|^6 / 144
//              + G54 w|w|^8 / 2880.
// h-values are stored in the 1/(j!k!) series convention; the recursion
// itself works with plain Taylor coefficients and converts at the boundary.
struct CenterManifoldTable {
    int level = 0;
    double omega0 = 0.0;
    cx lambda = 0.0; // i*omega0, or the tracked eigenvalue in continued mode
    CVec q, p;

    std::map<std::pair<int, int>, CVec> h; // both (j,k) and (k,j), 2 <= j+k <= 2*level
    std::array<cx, 4> G{};                 // G[k-1] = G_{k+1,k}

    std::vector<SolveDiagnostic> diagnostics;
    double master_residual = 0.0; // max coefficient norm of H_w w' + H_wbar wbar' - F(H)
    std::map<std::pair<int, int>, double> master_per_jk;
    double model_scale = 1.0;

    const CVec* coefficient(int j, int k) const {
        auto it = h.find({j, k});
        return it == h.end() ? nullptr : &it->second;
    }
};

// F composed with a truncated immersion, truncated after every product.
// Includes the linear and constant blocks of the model.
BivariatePolyVec compose_field(const HomogeneousModel& model, const BivariatePolyVec& H,
                               int max_degree);

// Degree-by-degree homological recursion at a Hopf point (lambda = i*omega0).
CenterManifoldTable center_manifold(const HomogeneousModel& model, const CriticalPair& pair,
                                    int level);

// Same recursion with a general simple eigenvalue lambda = eta + i*omega;
// used to continue the coefficients off the critical parameter value. The
// resonant rows stay bordered, so the construction degenerates smoothly to
// the critical case as eta -> 0.
CenterManifoldTable center_manifold_shifted(const HomogeneousModel& model, cx lambda,
                                            const CVec& q, const CVec& p, int level);

struct LyapunovSet {
    int level = 0;
    std::array<double, 4> l{};
    std::array<cx, 4> G{};
    std::vector<std::string> caveats;
};

// l1 = Re G21 / 2, l2 = Re G32 / 12, l3 = Re G43 / 144, l4 = Re G54 / 2880.
// A caveat is recorded for l_k when some lower |l_j| exceeds the
// interpretation threshold.
LyapunovSet lyapunov(const CenterManifoldTable& table, int level, double caveat_tol = 1e-6);

// Newton refinement of an equilibrium with the symbolic Jacobian.
RVec newton_equilibrium(const VectorFieldSpec& field, const RVec& mu, RVec guess,
                        double tol_rel = 1e-12, int max_iterations = 50);

struct TransversalityReport {
    int level = 0;
    RVec mu0;
    double omega0 = 0.0;
    double eta0 = 0.0;
    RMat jacobian;                  // level x m, rows: eta, l1, ..., l_{level-1}
    std::vector<double> sigma;      // singular values, descending
    double rank_ratio = 0.0;        // sigma_min / sigma_max
    bool full_rank = false;
};

// Finite-difference Jacobian of mu -> (eta, l1, ..., l_{level-1}) at mu0,
// with the equilibrium continued by Newton and the critical eigenvalue
// tracked from the base point. Full rank iff sigma_min/sigma_max > 1e-6.
TransversalityReport transversality(const VectorFieldSpec& field, const RVec& mu0,
                                    const RVec& equilibrium0, int level);

} // namespace hopf
