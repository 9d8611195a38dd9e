#include "strongconv/channel.hpp"

#include <cmath>

namespace strongconv {

QuantumOperation::QuantumOperation(std::vector<Cmat> kraus, OpKind kind,
                                   const Tolerances& tol)
    : kind_(kind), kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw InvalidInput("empty Kraus list");
  dim_out_ = kraus_.front().rows();
  dim_in_ = kraus_.front().cols();
  if (dim_in_ == 0 || dim_out_ == 0) throw InvalidInput("zero-dimensional Kraus operator");
  for (const Cmat& k : kraus_)
    if (k.rows() != dim_out_ || k.cols() != dim_in_)
      throw InvalidInput("Kraus operators have mixed shapes");
  Cmat acc = Cmat::Zero(dim_in_, dim_in_);
  for (const Cmat& k : kraus_) acc += k.adjoint() * k;
  const Cmat defect = acc - Cmat::Identity(dim_in_, dim_in_);
  if (kind_ == OpKind::channel) {
    if (defect.cwiseAbs().maxCoeff() > tol.trace)
      throw NotAnOperation("Kraus list is not trace preserving, defect " +
                           std::to_string(defect.cwiseAbs().maxCoeff()));
  } else {
    Eigen::SelfAdjointEigenSolver<Cmat> es(hermitize(defect), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > tol.psd)
      throw NotAnOperation("Kraus list exceeds the trace bound by " +
                           std::to_string(es.eigenvalues().maxCoeff()));
  }
}

QuantumOperation QuantumOperation::identity(Index d) {
  return QuantumOperation({Cmat::Identity(d, d)}, OpKind::channel);
}

Cmat QuantumOperation::apply_matrix(const Cmat& m) const {
  if (m.rows() != dim_in_ || m.cols() != dim_in_)
    throw InvalidInput("input dimension mismatch in apply");
  Cmat out = Cmat::Zero(dim_out_, dim_out_);
  for (const Cmat& k : kraus_) out += k * m * k.adjoint();
  return out;
}

PositiveOperator QuantumOperation::apply(const PositiveOperator& rho) const {
  Tolerances loose;
  loose.herm = 1e-8;
  loose.psd = 1e-8;
  return PositiveOperator(apply_matrix(rho.matrix()), loose);
}

Cmat QuantumOperation::dual_apply(const Cmat& b) const {
  if (b.rows() != dim_out_ || b.cols() != dim_out_)
    throw InvalidInput("output dimension mismatch in dual_apply");
  Cmat out = Cmat::Zero(dim_in_, dim_in_);
  for (const Cmat& k : kraus_) out += k.adjoint() * b * k;
  return out;
}

double QuantumOperation::trace_defect() const {
  Cmat acc = Cmat::Zero(dim_in_, dim_in_);
  for (const Cmat& k : kraus_) acc += k.adjoint() * k;
  return (acc - Cmat::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff();
}

QuantumOperation complementary(const QuantumOperation& op, const Tolerances& tol) {
  const Index d_e = op.kraus_count();
  const Index d_a = op.dim_in();
  const Index d_b = op.dim_out();
  // Environment-side Kraus operators W_b with (W_b)_{e,a} = (V_e)_{b,a}.
  std::vector<Cmat> w(static_cast<size_t>(d_b));
  for (Index b = 0; b < d_b; ++b) {
    Cmat m(d_e, d_a);
    for (Index e = 0; e < d_e; ++e)
      m.row(e) = op.kraus()[static_cast<size_t>(e)].row(b);
    w[static_cast<size_t>(b)] = std::move(m);
  }
  return QuantumOperation(std::move(w), op.kind(), tol);
}

QuantumOperation tensor(const QuantumOperation& a, const QuantumOperation& b,
                        const Tolerances& tol) {
  std::vector<Cmat> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const Cmat& ka : a.kraus())
    for (const Cmat& kb : b.kraus()) kraus.push_back(kron(ka, kb));
  const OpKind kind = (a.is_channel() && b.is_channel()) ? OpKind::channel
                                                         : OpKind::operation;
  return QuantumOperation(std::move(kraus), kind, tol);
}

QuantumOperation compose(const QuantumOperation& after, const QuantumOperation& before,
                         const Tolerances& tol) {
  if (after.dim_in() != before.dim_out())
    throw InvalidInput("composition dimension mismatch");
  std::vector<Cmat> kraus;
  kraus.reserve(after.kraus().size() * before.kraus().size());
  for (const Cmat& ka : after.kraus())
    for (const Cmat& kb : before.kraus()) kraus.push_back(ka * kb);
  const OpKind kind = (after.is_channel() && before.is_channel()) ? OpKind::channel
                                                                  : OpKind::operation;
  return QuantumOperation(std::move(kraus), kind, tol);
}

std::vector<Cmat> default_probes(Index d) {
  std::vector<Cmat> probes;
  probes.reserve(static_cast<size_t>(d * d));
  const double inv2 = 0.5;
  for (Index i = 0; i < d; ++i) {
    for (Index j = i; j < d; ++j) {
      if (i == j) {
        Cmat p = Cmat::Zero(d, d);
        p(i, i) = 1.0;
        probes.push_back(std::move(p));
        continue;
      }
      Cmat p = Cmat::Zero(d, d);
      p(i, i) = inv2;
      p(j, j) = inv2;
      p(i, j) = inv2;
      p(j, i) = inv2;
      probes.push_back(std::move(p));
      Cmat q = Cmat::Zero(d, d);
      q(i, i) = inv2;
      q(j, j) = inv2;
      q(i, j) = cplx(0.0, -inv2);
      q(j, i) = cplx(0.0, inv2);
      probes.push_back(std::move(q));
    }
  }
  return probes;
}

Cmat canonical_choi(const QuantumOperation& op) {
  const Index din = op.dim_in();
  const Index dout = op.dim_out();
  Cmat choi = Cmat::Zero(dout * din, dout * din);
  for (const Cmat& k : op.kraus()) {
    // (K (x) I)|Omega> has component K(b, i) at index b*din + i.
    Cvec v(dout * din);
    for (Index b = 0; b < dout; ++b)
      for (Index i = 0; i < din; ++i) v(b * din + i) = k(b, i);
    choi += v * v.adjoint();
  }
  return choi;
}

std::vector<Cmat> kraus_from_canonical_choi(const Cmat& choi, Index dim_out,
                                            Index dim_in, double cutoff) {
  if (choi.rows() != dim_out * dim_in || choi.cols() != choi.rows())
    throw InvalidInput("Choi matrix size does not match the declared split");
  const EigenSystem es = eig_desc(hermitize(choi));
  std::vector<Cmat> kraus;
  for (Index a = 0; a < es.values.size(); ++a) {
    if (es.values(a) <= cutoff) continue;
    Cmat k(dim_out, dim_in);
    const double c = std::sqrt(es.values(a));
    for (Index b = 0; b < dim_out; ++b)
      for (Index i = 0; i < dim_in; ++i) k(b, i) = c * es.vectors(b * dim_in + i, a);
    kraus.push_back(std::move(k));
  }
  if (kraus.empty()) kraus.push_back(Cmat::Zero(dim_out, dim_in));
  return kraus;
}

double strong_distance(const QuantumOperation& a, const QuantumOperation& b,
                       const std::vector<Cmat>& probes) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
    throw InvalidInput("strong_distance needs matching dimensions");
  const std::vector<Cmat> defaults =
      probes.empty() ? default_probes(a.dim_in()) : std::vector<Cmat>{};
  const std::vector<Cmat>& list = probes.empty() ? defaults : probes;
  double acc = 0.0;
  double w = 0.5;
  for (const Cmat& rho : list) {
    acc += w * trace_norm(a.apply_matrix(rho) - b.apply_matrix(rho));
    w *= 0.5;
  }
  return acc;
}

}  // namespace strongconv
