#include "strongconv/families.hpp"

#include <cmath>
#include <memory>
#include <utility>

namespace strongconv {

ChannelSequence::ChannelSequence(std::function<QuantumOperation(Index)> gen,
                                 Index dim_in, Index dim_out,
                                 std::optional<Index> length, std::string family)
    : gen_(std::move(gen)),
      dim_in_(dim_in),
      dim_out_(dim_out),
      length_(length),
      family_(std::move(family)) {}

QuantumOperation ChannelSequence::at(Index n) const {
  if (n < 1) throw InvalidInput("sequence indices start at 1");
  if (length_ && n > *length_)
    throw Infeasible("index " + std::to_string(n) + " beyond declared length " +
                     std::to_string(*length_));
  QuantumOperation op = gen_(n);
  if (op.dim_in() != dim_in_ || op.dim_out() != dim_out_)
    throw InvalidInput("generator produced mismatched dimensions at index " +
                       std::to_string(n));
  return op;
}

std::vector<Index> ChannelSequence::preferred_ladder_ranks() const {
  std::vector<Index> ranks;
  if (family_ == "orthogonal_isometries" && length_) {
    const Index blocks = *length_;
    const Index use = std::max<Index>(1, blocks / 2);
    for (Index m = 1; m <= use; ++m) ranks.push_back(m * dim_in_);
  } else {
    for (Index r = 1; r <= dim_out_; ++r) ranks.push_back(r);
  }
  return ranks;
}

ChannelSequence orthogonal_isometries_family(Index dim_in, Index blocks) {
  if (dim_in < 1 || blocks < 1) throw InvalidInput("need dim_in >= 1 and blocks >= 1");
  const Index dim_out = dim_in * blocks;
  auto gen = [dim_in, dim_out](Index n) {
    Cmat v = Cmat::Zero(dim_out, dim_in);
    for (Index a = 0; a < dim_in; ++a) v((n - 1) * dim_in + a, a) = 1.0;
    return QuantumOperation({std::move(v)}, OpKind::channel);
  };
  return ChannelSequence(gen, dim_in, dim_out, blocks, "orthogonal_isometries");
}

Cmat rotation_matrix(Index dim, double theta) {
  Cmat r = Cmat::Identity(dim, dim);
  for (Index i = 0; i + 1 < dim; ++i) {
    Cmat g = Cmat::Identity(dim, dim);
    g(i, i) = std::cos(theta);
    g(i + 1, i + 1) = std::cos(theta);
    g(i, i + 1) = -std::sin(theta);
    g(i + 1, i) = std::sin(theta);
    r = g * r;
  }
  return r;
}

ChannelSequence rotating_basis_family(Index dim, double theta_scale) {
  if (dim < 2) throw InvalidInput("rotating basis needs dim >= 2");
  auto gen = [dim, theta_scale](Index n) {
    const Cmat r = rotation_matrix(dim, theta_scale / static_cast<double>(n));
    std::vector<Cmat> kraus;
    kraus.reserve(static_cast<size_t>(dim));
    for (Index k = 0; k < dim; ++k) {
      // |e_k><phi_k^n| : measure the rotated vector, reprepare the fixed one.
      Cmat op = Cmat::Zero(dim, dim);
      op.row(k) = r.col(k).adjoint();
      kraus.push_back(std::move(op));
    }
    return QuantumOperation(std::move(kraus), OpKind::channel);
  };
  return ChannelSequence(gen, dim, dim, std::nullopt, "rotating_basis");
}

QuantumOperation pinching_channel(Index dim) {
  std::vector<Cmat> kraus;
  kraus.reserve(static_cast<size_t>(dim));
  for (Index k = 0; k < dim; ++k) {
    Cmat op = Cmat::Zero(dim, dim);
    op(k, k) = 1.0;
    kraus.push_back(std::move(op));
  }
  return QuantumOperation(std::move(kraus), OpKind::channel);
}

QuantumOperation constant_output_channel(const State& sigma) {
  const Index d = sigma.dim();
  const EigenSystem es = eig_desc(sigma.matrix());
  std::vector<Cmat> kraus;
  for (Index i = 0; i < d; ++i) {
    if (es.values(i) <= 0.0) continue;
    const double c = std::sqrt(es.values(i));
    for (Index a = 0; a < d; ++a) {
      Cmat op = Cmat::Zero(d, d);
      op.col(a) = c * es.vectors.col(i);
      kraus.push_back(std::move(op));
    }
  }
  return QuantumOperation(std::move(kraus), OpKind::channel);
}

ChannelSequence constant_output_family(Index dim, std::optional<State> sigma0,
                                       std::optional<State> mix) {
  State s0 = sigma0 ? *sigma0 : default_faithful_state(dim);
  State sm = mix ? *mix : [dim] {
    Cmat g = Cmat::Zero(dim, dim);
    g(0, 0) = 1.0;
    return State(g);
  }();
  if (s0.dim() != dim || sm.dim() != dim)
    throw InvalidInput("constant_output states must match the declared dimension");
  auto s0p = std::make_shared<State>(std::move(s0));
  auto smp = std::make_shared<State>(std::move(sm));
  auto gen = [s0p, smp](Index n) {
    const double eps = 1.0 / static_cast<double>(n + 1);
    const Cmat m = (1.0 - eps) * s0p->matrix() + eps * smp->matrix();
    return constant_output_channel(State(m));
  };
  return ChannelSequence(gen, dim, dim, std::nullopt, "constant_output");
}

QuantumOperation unitary_channel(const Cmat& u) {
  return QuantumOperation({u}, OpKind::channel);
}

QuantumOperation amplitude_damping(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw InvalidInput("gamma must lie in [0, 1]");
  Cmat k0 = Cmat::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  Cmat k1 = Cmat::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumOperation({std::move(k0), std::move(k1)}, OpKind::channel);
}

QuantumOperation depolarizing_channel(Index dim, double p) {
  if (dim < 2) throw InvalidInput("depolarizing needs dim >= 2");
  if (p < 0.0 || p > 1.0) throw InvalidInput("p must lie in [0, 1]");
  Cmat shift = Cmat::Zero(dim, dim);   // X |j> = |j+1 mod d>
  Cmat clock = Cmat::Zero(dim, dim);   // Z |j> = w^j |j>
  const double two_pi = 2.0 * std::acos(-1.0);
  for (Index j = 0; j < dim; ++j) {
    shift((j + 1) % dim, j) = 1.0;
    clock(j, j) = std::polar(1.0, two_pi * static_cast<double>(j) / static_cast<double>(dim));
  }
  const double d2 = static_cast<double>(dim * dim);
  std::vector<Cmat> kraus;
  Cmat xa = Cmat::Identity(dim, dim);
  for (Index a = 0; a < dim; ++a) {
    Cmat w = xa;
    for (Index b = 0; b < dim; ++b) {
      const double weight = (a == 0 && b == 0) ? 1.0 - p + p / d2 : p / d2;
      if (weight > 0.0) kraus.push_back(std::sqrt(weight) * w);
      w = w * clock;
    }
    xa = shift * xa;
  }
  return QuantumOperation(std::move(kraus), OpKind::channel);
}

ChannelSequence explicit_list_family(std::vector<QuantumOperation> ops) {
  if (ops.empty()) throw InvalidInput("explicit list must be non-empty");
  const Index din = ops.front().dim_in();
  const Index dout = ops.front().dim_out();
  for (const auto& op : ops)
    if (op.dim_in() != din || op.dim_out() != dout)
      throw InvalidInput("explicit list has mixed dimensions");
  auto list = std::make_shared<std::vector<QuantumOperation>>(std::move(ops));
  auto gen = [list](Index n) { return (*list)[static_cast<size_t>(n - 1)]; };
  return ChannelSequence(gen, din, dout, static_cast<Index>(list->size()),
                         "explicit_list");
}

}  // namespace strongconv
