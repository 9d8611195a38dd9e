#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "strongconv/channel.hpp"

namespace strongconv {

// Least-squares channel fit through the Choi parameterization: minimize
// sum_s || L_C(X_s) - Y_s ||_F^2 over canonical Choi matrices C of channels
// (PSD, input marginal = identity), where L_C is the map with Choi matrix C.
struct ChoiFitProblem {
  Index dim_in = 0;   // input dimension of the unknown map
  Index dim_out = 0;
  std::vector<Cmat> inputs;   // X_s on the input space
  std::vector<Cmat> targets;  // Y_s on the output space
};

struct FitOptions {
  int max_iters = 3000;
  int restarts = 20;
  int patience = 60;              // non-improving iterations before stopping
  double objective_floor = 1e-22;
  std::uint64_t seed = 0;
  bool feasibility_polish = true;  // extra alternating projection when near 0
  std::optional<Cmat> warm_start;  // Choi used as the first restart
};

struct FitResult {
  QuantumOperation fitted;
  Cmat choi;              // canonical Choi of 'fitted'
  double objective = 0.0;  // squared-Frobenius objective of 'fitted'
  double residual = 0.0;   // sqrt(objective)
  int iterations = 0;      // iterations used by the winning restart
  bool converged = true;   // winning restart stopped before the iteration cap
  int best_restart = -1;
};

// Accelerated projected gradient (momentum with adaptive restart,
// backtracking line search) alternated with a Dykstra projection onto
// {PSD} intersect {trace-preserving}; deterministic multi-restart keyed by
// opts.seed. When the best objective lands near zero and polish is enabled,
// an alternating projection between the feasible set and the data-consistency
// affine set tightens the iterate toward an exactly feasible solution.
FitResult fit_channel_choi(const ChoiFitProblem& problem,
                           const FitOptions& opts = {},
                           const Tolerances& tol = {});

}  // namespace strongconv
