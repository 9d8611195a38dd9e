#pragma once

#include <vector>

#include "strongconv/common.hpp"

namespace strongconv {

// Validated positive semidefinite operator. The stored matrix is the
// Hermitian symmetrization of the input; construction rejects inputs whose
// Hermiticity defect exceeds tol.herm or whose smallest eigenvalue is below
// -tol.psd. Instances are immutable.
class PositiveOperator {
 public:
  explicit PositiveOperator(const Cmat& m, const Tolerances& tol = {});

  const Cmat& matrix() const { return mat_; }
  Index dim() const { return mat_.rows(); }
  double trace() const { return trace_; }
  double min_eigenvalue() const { return min_eig_; }
  Index rank(double eps_supp = Tolerances{}.supp) const;

 private:
  Cmat mat_;
  double trace_ = 0.0;
  double min_eig_ = 0.0;
};

// Density operator: positive with unit trace within tol.trace.
class State {
 public:
  explicit State(const Cmat& m, const Tolerances& tol = {});
  explicit State(const PositiveOperator& p, const Tolerances& tol = {});

  const Cmat& matrix() const { return op_.matrix(); }
  const PositiveOperator& positive() const { return op_; }
  Index dim() const { return op_.dim(); }
  bool faithful(double eps_supp = Tolerances{}.supp) const;

 private:
  PositiveOperator op_;
};

// Orthogonal projector: Hermitian idempotent within tolerance.
class Projector {
 public:
  explicit Projector(const Cmat& m, const Tolerances& tol = {});
  // Projector onto the span of orthonormal columns.
  static Projector from_basis(const Cmat& columns, const Tolerances& tol = {});
  // Projector onto the first r canonical basis vectors of a d-dim space.
  static Projector prefix(Index d, Index r);

  const Cmat& matrix() const { return mat_; }
  Index dim() const { return mat_.rows(); }
  Index rank() const { return rank_; }

 private:
  Projector() = default;
  Cmat mat_;
  Index rank_ = 0;
};

// Increasing finite family P_1 <= P_2 <= ... of projectors, the truncation
// analogue of an exhausting sequence of finite-rank projectors.
class TruncationLadder {
 public:
  explicit TruncationLadder(std::vector<Projector> rungs, const Tolerances& tol = {});
  // Canonical-basis prefix projectors with the given ranks.
  static TruncationLadder prefixes(Index d, const std::vector<Index>& ranks);
  // Prefix projectors onto the leading columns of an orthonormal basis.
  static TruncationLadder from_basis(const Cmat& basis, const std::vector<Index>& ranks,
                                     const Tolerances& tol = {});

  Index size() const { return static_cast<Index>(rungs_.size()); }
  const Projector& rung(Index m) const { return rungs_.at(static_cast<size_t>(m)); }
  const std::vector<Projector>& rungs() const { return rungs_; }
  Index dim() const { return rungs_.front().dim(); }

 private:
  std::vector<Projector> rungs_;
};

// Purification of a state sigma on A: a unit vector on A (x) R whose first
// marginal is sigma. The R-side Schmidt basis is canonical, ordered by
// non-increasing Schmidt coefficient.
struct Purification {
  Cvec vector;               // on A (x) R, index a*dim_R + r
  State reduced_A;           // recomputed marginal on A
  PositiveOperator reduced_R;  // marginal on R (diagonal in canonical basis)
  std::vector<double> spectrum;  // non-increasing eigenvalues of sigma
  Cmat basis_A;              // columns: A-side Schmidt vectors matching spectrum
  Index dim_A = 0;
  Index dim_R = 0;
};

double trace_norm(const Cmat& m);

// Uhlmann fidelity || sqrt(rho) sqrt(sigma) ||_1 for positive operators.
double fidelity(const PositiveOperator& rho, const PositiveOperator& sigma);

// Partial trace of an operator on X (x) Y (index x*dim_y + y). keep_first
// selects which marginal survives.
Cmat partial_trace(const Cmat& m, Index dim_x, Index dim_y, bool keep_first);

// Partial trace over several factors at once: dims lists the factor sizes in
// index-major order, keep[i] tells whether factor i survives.
Cmat partial_trace_multi(const Cmat& m, const std::vector<Index>& dims,
                         const std::vector<bool>& keep);

// Purify sigma into A (x) R. Requires dim_R >= rank(sigma) at eps_supp.
Purification purify(const State& sigma, Index dim_R, const Tolerances& tol = {});

// Square root with eigenvalues below eps_supp mapped to zero.
Cmat sqrt_psd(const PositiveOperator& p, double eps_supp = Tolerances{}.supp);

// Inverse square root on the numerical support, zero on its complement.
Cmat pinv_sqrt(const PositiveOperator& p, double eps_supp = Tolerances{}.supp);

Projector support_projector(const PositiveOperator& p,
                            double eps_supp = Tolerances{}.supp);

// Diagonal state with geometrically decaying spectrum 2^-i, normalized at the
// truncation dimension. Faithful at every d, used as the reference input for
// probe generation and Choi constructions.
State default_faithful_state(Index d);

State normalized(const PositiveOperator& p);

}  // namespace strongconv
