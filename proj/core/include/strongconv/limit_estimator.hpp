#pragma once

#include <vector>

#include "strongconv/common.hpp"

namespace strongconv {

// Estimated limit of a matrix-valued sequence observed at finitely many
// indices. The estimate extrapolates in 1/n over geometrically spaced nodes
// of the observed tail; 'uncertainty' is the cross-order stabilization error
// of the extrapolant, and 'converged' means it fell below the requested
// tolerance. Constant tails reduce to the exact value with zero uncertainty.
struct LimitEstimate {
  bool converged = false;
  Cmat limit;
  double uncertainty = 0.0;
  std::vector<Index> nodes;  // sequence indices the extrapolation used
};

// Indices (ascending) whose values sit within a relative radius of the value
// at the largest index. This isolates the tail cluster the estimate is
// anchored to: sequences hopping between separated accumulation points keep
// only the indices near the final one, convergent sequences keep their tail.
std::vector<Index> tail_cluster(const std::vector<Index>& indices,
                                const std::vector<Cmat>& values,
                                double radius_rel);

// Limit estimate over the given indices (ascending, values aligned). The
// caller normally passes a tail cluster. Fewer than three supporting points
// never certify convergence.
LimitEstimate estimate_limit(const std::vector<Index>& indices,
                             const std::vector<Cmat>& values, double eps_cauchy);

// Convenience for scalar sequences.
struct ScalarLimitEstimate {
  bool converged = false;
  cplx limit = 0.0;
  double uncertainty = 0.0;
};
ScalarLimitEstimate estimate_scalar_limit(const std::vector<Index>& indices,
                                          const std::vector<cplx>& values,
                                          double eps_cauchy);

std::vector<Index> dense_indices(Index lo, Index hi);
std::vector<Index> geometric_indices(Index lo, Index hi, Index max_points);

}  // namespace strongconv
