#include "strongconv/random.hpp"

#include <cmath>

namespace strongconv {

double Rng::uniform() {
  // 53 high bits of the engine output, the usual double mantissa trick.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  // Box-Muller; rejects the u = 0 corner so the log stays finite.
  double u = 0.0;
  do {
    u = uniform();
  } while (u <= 0.0);
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::acos(-1.0) * v);
}

cplx Rng::gaussian_c() {
  const double a = gaussian();
  const double b = gaussian();
  return cplx(a, b) / std::sqrt(2.0);
}

Cmat random_unitary(Rng& rng, Index d) {
  if (d < 1) throw InvalidInput("dimension must be positive");
  Cmat g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = rng.gaussian_c();
  Eigen::HouseholderQR<Cmat> qr(g);
  Cmat q = qr.householderQ() * Cmat::Identity(d, d);
  const Cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the diagonal phases so the distribution is Haar.
  for (Index j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

State random_state(Rng& rng, Index d, Index rank) {
  if (d < 1) throw InvalidInput("dimension must be positive");
  if (rank <= 0 || rank > d) rank = d;
  Cmat g(d, rank);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < rank; ++j) g(i, j) = rng.gaussian_c();
  Cmat m = g * g.adjoint();
  m /= m.trace().real();
  return State(hermitize(m));
}

State random_faithful_state(Rng& rng, Index d, double floor) {
  if (floor <= 0.0 || floor >= 1.0) throw InvalidInput("floor must be in (0, 1)");
  const Cmat u = random_unitary(rng, d);
  Rvec spec(d);
  double total = 0.0;
  for (Index i = 0; i < d; ++i) {
    spec(i) = floor / static_cast<double>(d) + rng.uniform();
    total += spec(i);
  }
  Cmat m = Cmat::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    m += (spec(i) / total) * u.col(i) * u.col(i).adjoint();
  return State(hermitize(m));
}

QuantumOperation random_channel(Rng& rng, Index dim_in, Index dim_out,
                                Index kraus_count) {
  if (dim_in < 1 || dim_out < 1 || kraus_count < 1)
    throw InvalidInput("dimensions and Kraus count must be positive");
  if (dim_out * kraus_count < dim_in)
    throw InvalidInput("no isometry into a smaller space");
  const Index rows = dim_out * kraus_count;
  Cmat g(rows, dim_in);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < dim_in; ++j) g(i, j) = rng.gaussian_c();
  Eigen::HouseholderQR<Cmat> qr(g);
  const Cmat v = qr.householderQ() * Cmat::Identity(rows, dim_in);
  std::vector<Cmat> kraus;
  kraus.reserve(static_cast<size_t>(kraus_count));
  for (Index e = 0; e < kraus_count; ++e) {
    Cmat k(dim_out, dim_in);
    for (Index b = 0; b < dim_out; ++b) k.row(b) = v.row(e * dim_out + b);
    kraus.push_back(std::move(k));
  }
  return QuantumOperation(std::move(kraus), OpKind::channel);
}

QuantumOperation random_operation(Rng& rng, Index dim_in, Index dim_out,
                                  Index kraus_count, double contraction) {
  if (contraction <= 0.0 || contraction > 1.0)
    throw InvalidInput("contraction must be in (0, 1]");
  const QuantumOperation ch = random_channel(rng, dim_in, dim_out, kraus_count);
  std::vector<Cmat> kraus;
  kraus.reserve(ch.kraus().size());
  const double c = std::sqrt(contraction);
  for (const Cmat& k : ch.kraus()) kraus.push_back(c * k);
  return QuantumOperation(std::move(kraus), OpKind::operation);
}

}  // namespace strongconv
