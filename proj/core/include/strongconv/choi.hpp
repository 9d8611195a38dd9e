#pragma once

#include "strongconv/channel.hpp"

namespace strongconv {

// Image of an operation under the state-form isomorphism: the operator
// (Phi (x) id_R)(omega) on B (x) R for a fixed pure omega on A (x) R with
// faithful marginals. Carries the purification so the map can be inverted.
struct ChoiOperator {
  PositiveOperator matrix;   // on dim_B * dim_R
  Purification purification_used;
  Index dim_B = 0;
  Index rank = 0;            // eigenvalues above tol.rank
};

struct MembershipResult {
  bool member = false;
  double witness = 0.0;  // largest eigenvalue of the compatibility matrix
};

// Default isomorphism anchor: purification of default_faithful_state(d) with
// a reference of the same dimension.
Purification default_purification(Index d);

// Compatibility test for an R-marginal rho_R against the anchor marginal:
// the matrix M_ij = <psi_i| rho_R |psi_j> / sqrt(lambda_i lambda_j) in the
// anchor eigenbasis must satisfy M <= I. Witness reports lambda_max(M).
MembershipResult cj_membership(const PositiveOperator& rho_R,
                               const Purification& anchor,
                               const Tolerances& tol = {});

ChoiOperator cj_forward(const QuantumOperation& op, const Purification& anchor,
                        const Tolerances& tol = {});
ChoiOperator cj_forward(const QuantumOperation& op, const Tolerances& tol = {});

// Inverse direction: reads the Kraus list off the eigendecomposition of the
// Choi operator (eigenvalue threshold tol.rank). Requires the R-marginal to
// pass cj_membership; produces a channel exactly when the R-marginal matches
// the anchor marginal.
QuantumOperation cj_inverse(const ChoiOperator& choi, const Tolerances& tol = {});

// Minimal-Kraus representative of the same map: forward then inverse through
// the default anchor.
QuantumOperation canonical_form(const QuantumOperation& op, const Tolerances& tol = {});

}  // namespace strongconv
