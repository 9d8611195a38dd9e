#pragma once

#include <cstdint>
#include <random>

#include "strongconv/channel.hpp"

namespace strongconv {

// Deterministic random source. Uniform and Gaussian variates are derived
// from the raw engine output directly so streams are reproducible independent
// of the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();   // [0, 1)
  double gaussian();  // standard normal
  cplx gaussian_c();  // complex standard normal (unit total variance)
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Haar-distributed unitary via QR of a Gaussian matrix with phase fixing.
Cmat random_unitary(Rng& rng, Index d);

// Random state of the given rank (0 = full rank) from a Gaussian purification.
State random_state(Rng& rng, Index d, Index rank = 0);

// Random full-rank state with spectrum bounded below by floor/d.
State random_faithful_state(Rng& rng, Index d, double floor = 1e-2);

// Channel from a Haar-random Stinespring isometry with the given Kraus count.
QuantumOperation random_channel(Rng& rng, Index dim_in, Index dim_out,
                                Index kraus_count);

// Trace-non-increasing operation: a random channel contracted by the given
// factor in (0, 1].
QuantumOperation random_operation(Rng& rng, Index dim_in, Index dim_out,
                                  Index kraus_count, double contraction = 0.9);

}  // namespace strongconv
