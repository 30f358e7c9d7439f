#pragma once

#include <array>

#include "hopf/engine.hpp"

namespace hopf {

// Closed-form transcription of the low-order center-manifold coefficients,
// used as an independent oracle against the generic recursion. Every value is
// assembled from the multilinear forms B..L with explicit solves, not from
// the degree-by-degree engine.
struct ExplicitCoeffs {
    CVec h11, h20, h30, h21, h40, h31, h22, h32, h41, h42, h33, h43;
    cx G21 = 0, G32 = 0, G43 = 0;
};

// Requires a model of order >= 7 and a valid critical pair. The h22 and h33
// expressions keep the full G-coupling terms (they only vanish when the lower
// Lyapunov coefficients are exactly zero, which never happens numerically).
ExplicitCoeffs explicit_table(const HomogeneousModel& model, const CriticalPair& pair);

// Independent planar route: for n = 2 the critical plane is the whole space,
// so the field complexifies to a scalar equation z' = i w0 z + sum g_jk
// z^j zbar^k / (j!k!). A classical scalar Poincare normal-form pass (resonant
// transformation components set to zero, matching the <p,h> = 0 gauge)
// yields the surviving resonant coefficients, returned in the same
// G_{k+1,k} normalization as the engine. Requires model order >= 2*level+1.
std::array<cx, 4> planar_oracle(const HomogeneousModel& model, const CriticalPair& pair,
                                int level);

// Planar polynomial field whose complexification is exactly
//   w' = i w0 w + c1 w|w|^2 + c2 w|w|^4 + c3 w|w|^6 + c4 w|w|^8,
// i.e. x' = -w0 y + sum_k (Re c_k x - Im c_k y)(x^2+y^2)^k and the symmetric
// y' line. By construction the engine reports l_k = Re c_k on this family.
VectorFieldSpec normal_form_system(double omega0, const std::array<cx, 4>& c);

// Reconstruction of the degree-(5,4) right side from the closed-form term
// list, evaluated with the engine's own h-table (the list references
// coefficients up to degree 8, all of which the level-4 recursion produces).
// Entries whose degree signature is inconsistent with (5,4) are excluded;
// `excluded` receives a human-readable note per exclusion.
CVec h54_closed_form(const HomogeneousModel& model, const CenterManifoldTable& table,
                     std::vector<std::string>* excluded = nullptr);

// The engine's own degree-(5,4) assembly of F(H) (scaled by 5!4!), i.e. the
// composition part of the right side with no resonant-coupling subtraction,
// which is what the closed-form term list represents.
CVec h54_field_part(const HomogeneousModel& model, const CenterManifoldTable& table);

} // namespace hopf
