#pragma once

#include <functional>
#include <optional>
#include <string>

#include "strongconv/choi.hpp"
#include "strongconv/families.hpp"
#include "strongconv/limit_estimator.hpp"

namespace strongconv {

// t(m) = max over the window of tr (I - P_m) Phi_n(sigma): how much output
// mass escapes each truncation rung, uniformly over the observed indices.
struct TailMassProfile {
  std::vector<Index> ranks;
  std::vector<double> values;
  std::vector<Index> witness_index;  // window index attaining each max
};

TailMassProfile tail_mass_profile(const ChannelSequence& seq, const State& sigma,
                                  const TruncationLadder& ladder,
                                  const std::vector<Index>& window,
                                  const Tolerances& tol = {});

// Weak-operator limits of the dual ladder: A_m estimated from Phi_n*(P_m)
// along a nested tail subsequence of the window, A_* from Phi_n*(I). The gap
// lambda_max(A_* - A_top) is the truncation surrogate of the uniform-tail
// criterion: ~0 for families with limit points, ~1 for escaping families.
struct DualLadderRung {
  Index rank = 0;
  Cmat limit;
  bool converged = false;
  double uncertainty = 0.0;
};

struct DualLadder {
  std::vector<DualLadderRung> rungs;
  Cmat top;  // A_* estimate
  bool top_converged = false;
  double top_uncertainty = 0.0;
  bool conclusive = false;  // every rung and the top stabilized
  double gap = 0.0;         // lambda_max(A_* - A_M); meaningful when conclusive
  double monotonicity_defect = 0.0;  // worst violation of 0 <= A_m <= A_{m+1} <= A_*
  std::vector<Index> subsequence;    // final nested tail
};

DualLadder dual_ladder(const ChannelSequence& seq, const TruncationLadder& ladder,
                       const std::vector<Index>& window, const Tolerances& tol = {});

// Diagonal-method limit extraction: for every matrix unit of the input basis
// the window tail is filtered to a cluster on which the image sequence
// stabilizes (nested over units, lexicographic order), the entrywise limits
// are extrapolated, and the limiting map is reassembled through its Choi
// matrix. Failure reports the first matrix unit with no stabilizing cluster.
struct ExtractionResult {
  bool success = false;
  std::optional<QuantumOperation> limit;
  std::vector<Index> subsequence;
  Index offending_i = -1;
  Index offending_j = -1;
  double max_uncertainty = 0.0;
  double assembly_defect = 0.0;  // negative-eigenvalue mass / trace excess clipped
  std::string status;            // "ok" or failure note
};

ExtractionResult extract_limit_point(const ChannelSequence& seq,
                                     const std::vector<Index>& window,
                                     const Cmat& input_basis = Cmat(),
                                     const Tolerances& tol = {});

// Faithful-input compactness check: inputs rho_n converging to a faithful
// rho0 and outputs Phi_n(rho_n) converging to sigma0 force limit points; the
// extracted limit must map rho0 to sigma0.
struct DominatedLimitReport {
  bool hypotheses_ok = false;
  bool passed = false;
  std::string status;  // ok / precondition-violated / extraction-contradiction
  double input_terminal = 0.0;   // ||rho_n - rho0||_1 at window end
  double output_terminal = 0.0;  // ||Phi_n(rho_n) - sigma0||_1 at window end
  double limit_residual = 0.0;   // ||Phi_limit(rho0) - sigma0||_1
  ExtractionResult extraction;
};

DominatedLimitReport dominated_limit_check(
    const ChannelSequence& seq, const std::function<State(Index)>& rho_n,
    const State& rho0, const PositiveOperator& sigma0,
    const std::vector<Index>& window, const Tolerances& tol = {});

// Domination variant: c Psi_n(sigma) <= Phi_n(sigma) with Phi_n convergent
// forces Psi-limit points with c Psi0(sigma) <= Phi0(sigma).
struct DominationReport {
  bool domination_ok = false;
  bool passed = false;
  std::string status;
  double worst_violation = 0.0;  // most negative eigenvalue observed
  double limit_violation = 0.0;  // most negative eigenvalue at the limit
  ExtractionResult psi_extraction;
  ExtractionResult phi_extraction;
};

DominationReport domination_limit_check(const ChannelSequence& psi_seq,
                                        const ChannelSequence& phi_seq,
                                        const State& sigma, double c,
                                        const std::vector<Index>& window,
                                        const Tolerances& tol = {});

// Kraus-level limit extraction for sequences with a uniform Kraus-count
// bound. Each Kraus operator is phase-aligned against the window-tail anchor
// (per-operator phases are representation gauge) before the shared nested
// cluster/extrapolation pass; the reassembled operation is compared with the
// separately extracted map limit.
struct KrausExtractionResult {
  bool success = false;
  std::vector<Cmat> kraus_limits;
  std::vector<Index> subsequence;
  Index offending_kraus = -1;
  double max_uncertainty = 0.0;
  double reconstruction_residual = 0.0;  // strong distance to the map-level limit
  std::optional<QuantumOperation> assembled;
  std::string status;
};

KrausExtractionResult extract_kraus_subsequence(const ChannelSequence& seq,
                                                const std::vector<Index>& window,
                                                Index max_kraus,
                                                const Tolerances& tol = {});

// Rank-one alignment: for sequences of single-Kraus operations converging to
// a single-Kraus limit, fixes the phase of each element by maximizing the
// real overlap with the limit on the purification of the reference state,
// then extracts the aligned operator limit.
struct RankOneAlignment {
  bool success = false;
  Cmat aligned_limit;
  std::vector<Index> subsequence;
  double residual = 0.0;  // strong distance of aligned limit vs given limit
  double max_uncertainty = 0.0;
  std::string status;
};

RankOneAlignment align_rank_one(const ChannelSequence& seq,
                                const QuantumOperation& limit,
                                const std::vector<Index>& window,
                                const Tolerances& tol = {});

// s(m) = max over the family of sum_i p_i ||(I - P_m) A phi_i||^2, the
// operator-family analogue of the tail-mass profile. basis columns are the
// phi_i, weights the p_i. Also reports the family-free basis tail
// eps(m) = sum_i p_i ||(I - P_m) phi_i||^2 for bound checks.
struct OperatorTailProfile {
  std::vector<Index> ranks;
  std::vector<double> s;
  std::vector<double> basis_tail;
  bool in_unit_ball = false;
  double worst_norm = 0.0;
};

OperatorTailProfile operator_family_tail_test(const std::vector<Cmat>& ops,
                                              const Cmat& basis,
                                              const std::vector<double>& weights,
                                              const TruncationLadder& ladder,
                                              const Tolerances& tol = {});

// Two-step uniqueness argument: outputs on a faithful input must converge to
// the candidate's output, and every limit point extracted from the window
// must coincide with the candidate.
struct TwoStepReport {
  bool passed = false;
  std::string status;
  std::vector<double> step1_profile;  // || Phi_n(sigma) - Phi0(sigma) ||_1
  double step1_terminal = 0.0;
  std::vector<ExtractionResult> extractions;
  std::vector<double> limit_distances;  // strong distance of each limit to Phi0
};

TwoStepReport two_step_limit_proof(const ChannelSequence& seq,
                                   const QuantumOperation& candidate,
                                   const State& sigma,
                                   const std::vector<Index>& window,
                                   const Tolerances& tol = {});

// One named piece of evidence evaluated by the diagnosis run.
struct CriterionVerdict {
  std::string name;
  bool evaluated = false;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct ConvergenceVerdict {
  bool has_limit_point = false;
  std::string criterion;  // name of the first piece of evidence that fired
  std::vector<CriterionVerdict> criteria;
  std::vector<Index> subsequence;
  std::string status;  // ok / inconclusive / contradiction note
};

// Full diagnosis: tail profile, dual ladder, extraction, and the per-criterion
// verdicts, with the tolerances and window recorded.
struct DiagnosticsReport {
  ConvergenceVerdict verdict;
  TailMassProfile tail;
  DualLadder ladder;
  ExtractionResult extraction;
  std::vector<Index> window;
  std::vector<Index> ladder_ranks;
  Tolerances tol;
};

DiagnosticsReport run_diagnostics(const ChannelSequence& seq,
                                  const std::vector<Index>& window,
                                  std::optional<TruncationLadder> ladder = {},
                                  std::optional<State> sigma = {},
                                  const Tolerances& tol = {});

}  // namespace strongconv
