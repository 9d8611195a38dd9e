#pragma once

#include <vector>

#include "strongconv/choi_fit.hpp"
#include "strongconv/convergence.hpp"

namespace strongconv {

// Canonical recovery map for a pair (forward, reference): the map
// omega -> sqrt(sigma) forward*( pinv_sqrt(forward(sigma)) omega
// pinv_sqrt(forward(sigma)) ) sqrt(sigma), held in Kraus form. Sends the
// output space back to the input space, restores sigma from forward(sigma)
// exactly, and is trace-preserving on the support of forward(sigma).
struct PetzMap {
  QuantumOperation theta;    // B -> A
  QuantumOperation forward;  // A -> B
  State reference;           // sigma on A
  double support_cutoff = 0.0;
};

PetzMap petz_map(const QuantumOperation& phi, const State& sigma,
                 double eps_supp = Tolerances{}.supp, const Tolerances& tol = {});

// Recovery map of the interpolated reference t rho + (1-t) sigma; approaches
// petz_map(phi, sigma) in strong distance as t -> 0.
PetzMap petz_interpolated(const QuantumOperation& phi, const State& rho,
                          const State& sigma, double t,
                          double eps_supp = Tolerances{}.supp,
                          const Tolerances& tol = {});

// Saturation test for the data-processing inequality: the divergence drop
// gap = D(rho||sigma) - D(phi rho||phi sigma) vanishes exactly when the
// recovery map of sigma restores rho from phi(rho).
struct ReversibilityReport {
  bool vacuous = false;  // input divergence infinite, nothing to test
  double d_in = 0.0;
  double d_out = 0.0;
  double gap = 0.0;
  double recovery_error = 0.0;  // || theta(phi rho) - rho ||_1
  bool saturated = false;       // gap <= tol.rev
  bool recovered = false;       // recovery_error <= tol.rev
  bool consistent = false;      // the two flags agree
};

ReversibilityReport reversibility_test(const QuantumOperation& phi,
                                       const State& rho, const State& sigma,
                                       const Tolerances& tol = {});

// Interpolation identity for the divergence: with sigma_t = t rho + (1-t)
// sigma, t D(rho||sigma) = t D(rho||sigma_t) + (1-t) D(sigma||sigma_t)
// + D(sigma_t||sigma). Exact; the residual is pure numerics.
struct DonaldReport {
  bool finite = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

DonaldReport donald_identity_check(const State& rho, const State& sigma,
                                   double t, const Tolerances& tol = {});

// Least-squares search for a channel undoing phi on every state of the
// family. residual is the worst trace-norm recovery error of the fitted
// channel over the family; for families no channel can reverse, it reports
// the optimizer's floor.
struct ReversingFit {
  FitResult fit;
  double residual = 0.0;           // max over the family
  std::vector<double> per_state;   // trace-norm error per family member
};

ReversingFit fit_reversing_channel(const QuantumOperation& phi,
                                   const std::vector<State>& family,
                                   const FitOptions& opts = {},
                                   const Tolerances& tol = {});

// Limit behavior of reversing maps: given phi_n with a strong limit and
// psi_n reversing phi_n on the family per index, restrict psi_n to the
// numerical support of the limit outputs, extract a limit of the restricted
// maps, and verify it reverses the phi-limit on the family.
struct ReversingSequenceReport {
  bool per_index_ok = false;
  double worst_per_index = 0.0;    // worst recovery error over window and family
  ExtractionResult phi_extraction;
  ExtractionResult psi_extraction;  // restricted reversing maps
  double limit_residual = 0.0;      // worst recovery error at the limit
  Index support_rank = 0;           // dimension of the restriction subspace
  bool passed = false;
  std::string status;
};

ReversingSequenceReport reversing_sequence_harness(
    const ChannelSequence& phi_seq, const ChannelSequence& psi_seq,
    const std::vector<State>& family, const std::vector<Index>& window,
    const Tolerances& tol = {});

}  // namespace strongconv
