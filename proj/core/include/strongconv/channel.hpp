#pragma once

#include <vector>

#include "strongconv/operator_core.hpp"

namespace strongconv {

enum class OpKind { operation, channel };

// Completely positive trace-non-increasing map held as a Kraus list.
// Construction validates sum V_k* V_k <= I (and = I for kind channel).
class QuantumOperation {
 public:
  QuantumOperation(std::vector<Cmat> kraus, OpKind kind, const Tolerances& tol = {});
  static QuantumOperation identity(Index d);

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  OpKind kind() const { return kind_; }
  bool is_channel() const { return kind_ == OpKind::channel; }
  const std::vector<Cmat>& kraus() const { return kraus_; }
  Index kraus_count() const { return static_cast<Index>(kraus_.size()); }

  // Linear action sum_k V_k m V_k*; accepts arbitrary matrices so the map can
  // be evaluated on matrix units and coherences.
  Cmat apply_matrix(const Cmat& m) const;
  PositiveOperator apply(const PositiveOperator& rho) const;

  // Dual (Heisenberg) action sum_k V_k* b V_k on the output algebra.
  Cmat dual_apply(const Cmat& b) const;

  // Max-entry deviation of sum V_k* V_k from the identity; zero for channels.
  double trace_defect() const;

 private:
  Index dim_in_ = 0;
  Index dim_out_ = 0;
  OpKind kind_ = OpKind::operation;
  std::vector<Cmat> kraus_;
};

// Complementary operation: the environment marginal of the Stinespring
// dilation V phi = sum_k (V_k phi) (x) |k>. The environment dimension equals
// the Kraus count of the input list.
QuantumOperation complementary(const QuantumOperation& op, const Tolerances& tol = {});

QuantumOperation tensor(const QuantumOperation& a, const QuantumOperation& b,
                        const Tolerances& tol = {});

// Composition after(before): apply 'before' first.
QuantumOperation compose(const QuantumOperation& after, const QuantumOperation& before,
                         const Tolerances& tol = {});

// Distance proxy on a finite probe list: sum_i 2^-i || (A - B)(rho_i) ||_1.
// Declared here because it is the comparison used throughout; probes default
// to default_probes(dim_in) when empty.
double strong_distance(const QuantumOperation& a, const QuantumOperation& b,
                       const std::vector<Cmat>& probes = {});

// Probe list spanning all matrix units of a d-dim input: interleaved by index
// pair (i, j), the diagonal pair contributing the basis projector and each
// off-diagonal pair its two coherence states.
std::vector<Cmat> default_probes(Index d);

// Canonical-basis Choi matrix on out (x) in: sum_ij op(|i><j|) (x) |i><j|.
Cmat canonical_choi(const QuantumOperation& op);

// Kraus list read off the eigendecomposition of a canonical-basis Choi
// matrix; eigenvalues at or below the cutoff are dropped. The inverse of
// canonical_choi up to Kraus gauge.
std::vector<Cmat> kraus_from_canonical_choi(const Cmat& choi, Index dim_out,
                                            Index dim_in, double cutoff);

}  // namespace strongconv
