#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "strongconv/convergence.hpp"
#include "strongconv/families.hpp"

namespace strongconv {

// Value of a divergence that may be +infinity. The flag is set exactly when
// the mass of the first argument outside the support of the second exceeds
// the support-defect tolerance; 'value' is meaningless in that case.
struct ExtendedReal {
  double value = 0.0;
  bool infinite = false;
  double support_defect = 0.0;

  static ExtendedReal inf(double defect) { return {0.0, true, defect}; }
};

// Truncated Hamiltonian: positive, eigenvalues non-decreasing in canonical
// order when diagonal. ground_shift records the amount subtracted to reach
// positivity, so energies can be reported on the original scale.
class EnergyModel {
 public:
  EnergyModel(Cmat h, double ground_shift = 0.0, const Tolerances& tol = {});

  const Cmat& hamiltonian() const { return h_; }
  double ground_shift() const { return shift_; }
  Index dim() const { return h_.rows(); }
  double energy(const Cmat& rho) const;  // tr H rho + shift tr rho

  static EnergyModel number_operator(Index dim);  // diag(0, 1, ..., dim-1)

 private:
  Cmat h_;
  double shift_ = 0.0;
};

// -sum r ln r over the spectrum, 0 ln 0 = 0. Natural log.
double von_neumann_entropy(const PositiveOperator& rho);

// Relative entropy in nats with the extension to arbitrary positive
// operators: sum_i r_i ln r_i - sum_ij r_i |<u_i|v_j>|^2 ln s_j
// + tr sigma - tr rho, equal to the usual formula on states. By convention
// the value at rho = 0 is tr sigma, and the result is +infinity exactly when
// rho has mass above tol.supp_defect outside the support of sigma.
ExtendedReal relative_entropy(const PositiveOperator& rho,
                              const PositiveOperator& sigma,
                              const Tolerances& tol = {});

// I(X:Y) = D(omega || omega_X (x) omega_Y) for a state; a subnormalized
// positive operator with trace c scales as c times the value of its
// normalization. Always finite on valid inputs.
double mutual_information(const PositiveOperator& omega, Index dim_x,
                          Index dim_y, const Tolerances& tol = {});

// Conditional mutual information I(A:C|B) via projector-compression suprema
// over nested ladders, with the direct four-entropy formula as cross-check.
// Values are in nats and are lower bounds restricted to the given ladders;
// the default ladders are eigenbasis-ordered prefixes of the A (resp. C)
// marginal, whose top rung is full rank so the sup is attained there.
struct QcmiResult {
  double value_a_side = 0.0;  // max over P_A of I(A:BC) - I(A:B) compressed
  double value_c_side = 0.0;  // max over P_C of I(AB:C) - I(B:C) compressed
  double agreement = 0.0;     // |value_a_side - value_c_side|
  double value_direct = 0.0;  // S(AB) + S(BC) - S(ABC) - S(B)
  std::vector<double> a_side_profile;  // per ladder prefix, non-decreasing
  std::vector<double> c_side_profile;
};

QcmiResult qcmi(const State& omega, Index dim_a, Index dim_b, Index dim_c,
                std::optional<TruncationLadder> ladder_a = {},
                std::optional<TruncationLadder> ladder_c = {},
                const Tolerances& tol = {});

// Data-processing slack D(rho||sigma) - D(Phi rho||Phi sigma); nonnegative
// up to numerics whenever the input divergence is finite.
struct MonotonicityReport {
  bool vacuous = false;  // input divergence infinite
  double d_in = 0.0;
  double d_out = 0.0;
  double slack = 0.0;
};

MonotonicityReport monotonicity_check(const QuantumOperation& phi,
                                      const PositiveOperator& rho,
                                      const PositiveOperator& sigma,
                                      const Tolerances& tol = {});

// Recovery-fidelity bound check for a candidate recovery channel B -> BC:
// exp(-I(A:C|B)/2) <= F(omega, (id_A (x) rec)(omega_AB)), plus the marginal
// reproduction residuals of rec on omega_B.
struct FidelityBoundReport {
  double qcmi_nats = 0.0;
  double lhs = 0.0;  // exp(-qcmi/2), the bound 2^{-I_bits/2} in base-2 terms
  double rhs = 0.0;  // fidelity of omega with the recovered extension
  double marginal_residual_b = 0.0;
  double marginal_residual_c = 0.0;
  bool satisfied = false;
  bool marginals_exact = false;
};

FidelityBoundReport fr_verify(const State& omega, Index dim_a, Index dim_b,
                              Index dim_c, const QuantumOperation& recovery,
                              const Tolerances& tol = {});

// Output-marginal domination over a window: [Phi_n(rho)]_B <= beta and
// [Phi_n(rho)]_C <= gamma for all observed n. When both hold the window is
// forwarded to limit extraction, since dominated output marginals pin the
// output family to a compact set.
struct MarginalDominationReport {
  bool dominated = false;
  double worst_b = 0.0;  // largest eigenvalue violation on the B side
  double worst_c = 0.0;
  ExtractionResult extraction;
  bool passed = false;
  std::string status;
};

MarginalDominationReport marginal_domination_check(
    const ChannelSequence& seq, const State& rho, const PositiveOperator& beta,
    const PositiveOperator& gamma, Index dim_b, Index dim_c,
    const std::vector<Index>& window, const Tolerances& tol = {});

// K-hat = max over probes of tr H_B Phi(rho) / tr H_A rho. Zero-energy
// probes are excluded and noted. Optionally also evaluates the constraint
// tr H_B Phi(state) <= bound.
struct EnergyAmplificationReport {
  double k_hat = 0.0;
  std::vector<double> ratios;       // aligned with probes; excluded -> 0
  std::vector<bool> included;
  bool constraint_evaluated = false;
  double constraint_value = 0.0;
  bool constraint_ok = true;
  std::string notice;
};

EnergyAmplificationReport energy_amplification(
    const QuantumOperation& phi, const EnergyModel& h_in,
    const EnergyModel& h_out, const std::vector<State>& probes,
    std::optional<double> energy_bound = {},
    std::optional<State> constraint_state = {}, const Tolerances& tol = {});

// Harness for preservation of relative-entropy convergence: given input
// sequences rho_n -> rho0, sigma_n -> sigma0 with D(rho_n||sigma_n)
// -> D(rho0||sigma0) finite, and maps Phi_n whose outputs converge on the
// window, the output divergences must converge to the divergence of the
// output limits. Rows tabulate both divergences per index.
struct PreservationRow {
  Index n = 0;
  double d_in = 0.0;
  double d_out = 0.0;
  bool d_in_infinite = false;
  bool d_out_infinite = false;
};

struct PreservationReport {
  bool hypotheses_ok = false;
  bool passed = false;
  double input_limit = 0.0;     // D(rho0||sigma0)
  double limit_value = 0.0;     // divergence of the extrapolated output limits
  double terminal_deviation = 0.0;  // |d_out at window end - limit_value|
  std::vector<PreservationRow> rows;
  std::string status;
};

PreservationReport convergence_preservation_harness(
    const ChannelSequence& maps, const std::function<State(Index)>& rho_n,
    const std::function<State(Index)>& sigma_n, const State& rho0,
    const State& sigma0, const std::vector<Index>& window,
    const Tolerances& tol = {});

// Fixed-map convenience overload.
PreservationReport convergence_preservation_harness(
    const QuantumOperation& phi, const std::function<State(Index)>& rho_n,
    const std::function<State(Index)>& sigma_n, const State& rho0,
    const State& sigma0, const std::vector<Index>& window,
    const Tolerances& tol = {});

}  // namespace strongconv
