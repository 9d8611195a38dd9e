#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "strongconv/channel.hpp"

namespace strongconv {

// Lazily evaluated sequence of operations with common dimensions, indexed
// from 1. Generators must be pure functions of the index.
class ChannelSequence {
 public:
  ChannelSequence(std::function<QuantumOperation(Index)> gen, Index dim_in,
                  Index dim_out, std::optional<Index> length = std::nullopt,
                  std::string family = "explicit_list");

  QuantumOperation at(Index n) const;
  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  std::optional<Index> length() const { return length_; }
  const std::string& family() const { return family_; }

  // Ladder the diagnostics default to for this sequence. Block-structured
  // families cap the rank so the index window outruns every rung; everything
  // else gets the full canonical prefix ladder.
  std::vector<Index> preferred_ladder_ranks() const;

 private:
  std::function<QuantumOperation(Index)> gen_;
  Index dim_in_ = 0;
  Index dim_out_ = 0;
  std::optional<Index> length_;
  std::string family_;
};

// Isometries with mutually orthogonal ranges: element n embeds the input
// space into block n of a dim_in*blocks output space. A sequence with no
// limit points; the dual ladder saturates at zero while the dual of the
// identity stays I.
ChannelSequence orthogonal_isometries_family(Index dim_in, Index blocks);

// Measure-and-reprepare in a rotating basis: element n measures in the basis
// R(theta_scale/n) e_k and reprepares the unrotated basis states. Converges
// strongly to the canonical-basis pinching (complete dephasing), not to the
// identity.
ChannelSequence rotating_basis_family(Index dim, double theta_scale = 1.0);

// The basis rotation used by rotating_basis_family: the ordered product of
// adjacent-pair Givens rotations with a shared angle.
Cmat rotation_matrix(Index dim, double theta);

// The strong limit of rotating_basis_family: complete dephasing in the
// canonical basis.
QuantumOperation pinching_channel(Index dim);

// Constant-output maps rho -> [tr rho] sigma_n with sigma_n -> sigma0 along a
// 1/(n+1) mixing schedule toward 'mix'. The strong limit is the constant map
// onto sigma0. Defaults: sigma0 = default_faithful_state(dim), mix = ground
// projector.
ChannelSequence constant_output_family(Index dim, std::optional<State> sigma0 = {},
                                       std::optional<State> mix = {});

// The constant map rho -> [tr rho] sigma as a channel.
QuantumOperation constant_output_channel(const State& sigma);

ChannelSequence explicit_list_family(std::vector<QuantumOperation> ops);

// rho -> U rho U* for unitary (or isometric) u.
QuantumOperation unitary_channel(const Cmat& u);

// Qubit amplitude damping with decay probability gamma in [0, 1].
QuantumOperation amplitude_damping(double gamma);

// (1-p) rho + p [tr rho] I/d, Kraus form via the Weyl shift/clock operators.
QuantumOperation depolarizing_channel(Index dim, double p);

}  // namespace strongconv
