#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strongconv/choi_fit.hpp"
#include "strongconv/convergence.hpp"

namespace strongconv {

// Two-sided feasibility search: a channel is degradable when some channel
// maps its output to its environment marginal, anti-degradable when some
// channel maps the environment marginal back to the output. Both directions
// are fitted against one canonical complement; objectives are Choi-space
// Frobenius surrogates and verdicts are re-measured in strong distance.
struct DegradabilityCertificate {
  double deg_residual = 0.0;      // strong distance of Theta o Phi vs complement
  double deg_objective = 0.0;     // optimizer's squared-Frobenius floor
  double antideg_residual = 0.0;  // strong distance of Theta' o complement vs Phi
  double antideg_objective = 0.0;
  std::optional<QuantumOperation> degrading;      // B -> E
  std::optional<QuantumOperation> antidegrading;  // E -> B
  bool degradable = false;
  bool antidegradable = false;
  bool deg_conclusive = false;      // certified, or optimizer converged
  bool antideg_conclusive = false;
  bool conclusive = false;          // both sides conclusive
  int restarts = 0;
  std::uint64_t seed = 0;
};

DegradabilityCertificate degradability_certificate(const QuantumOperation& phi,
                                                   const FitOptions& opts = {},
                                                   const Tolerances& tol = {});

// Closure of the certified-degradable set under strong limits: certify
// members along the window, extract the limit, certify it, and extract a
// limit of the members' degrading maps restricted to the numerical support
// of the limit outputs.
struct ClosureReport {
  std::vector<Index> sampled;  // member indices actually certified
  std::vector<DegradabilityCertificate> member_certificates;
  bool members_degradable = false;
  double worst_member_residual = 0.0;
  ExtractionResult limit_extraction;  // of the channel sequence itself
  std::optional<DegradabilityCertificate> limit_certificate;
  ExtractionResult degrading_extraction;  // of the restricted degrading maps
  Index support_rank = 0;
  bool limit_degradable = false;
  bool passed = false;
  std::string status;
};

ClosureReport degradable_closure_harness(const ChannelSequence& seq,
                                         const std::vector<Index>& window,
                                         const FitOptions& opts = {},
                                         const Tolerances& tol = {});

}  // namespace strongconv
