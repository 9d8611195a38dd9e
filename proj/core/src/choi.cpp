#include "strongconv/choi.hpp"

#include <cmath>

namespace strongconv {

Purification default_purification(Index d) {
  return purify(default_faithful_state(d), d);
}

MembershipResult cj_membership(const PositiveOperator& rho_R,
                               const Purification& anchor,
                               const Tolerances& tol) {
  if (rho_R.dim() != anchor.dim_R)
    throw InvalidInput("marginal dimension does not match the anchor reference");
  // The anchor R-marginal is diagonal in the canonical basis with the Schmidt
  // spectrum; entries below the support cutoff make the test infeasible.
  const Index d = rho_R.dim();
  Cmat m = Cmat::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    const double li = i < static_cast<Index>(anchor.spectrum.size())
                          ? anchor.spectrum[static_cast<size_t>(i)]
                          : 0.0;
    for (Index j = 0; j < d; ++j) {
      const double lj = j < static_cast<Index>(anchor.spectrum.size())
                            ? anchor.spectrum[static_cast<size_t>(j)]
                            : 0.0;
      if (li <= tol.supp || lj <= tol.supp) {
        const double mass = std::abs(rho_R.matrix()(i, j));
        if (mass > tol.supp_defect)
          throw PreconditionViolated("marginal has mass outside the anchor support");
        continue;
      }
      m(i, j) = rho_R.matrix()(i, j) / std::sqrt(li * lj);
    }
  }
  Eigen::SelfAdjointEigenSolver<Cmat> es(hermitize(m), Eigen::EigenvaluesOnly);
  MembershipResult out;
  out.witness = es.eigenvalues().maxCoeff();
  out.member = out.witness <= 1.0 + tol.membership;
  return out;
}

ChoiOperator cj_forward(const QuantumOperation& op, const Purification& anchor,
                        const Tolerances& tol) {
  if (op.dim_in() != anchor.dim_A)
    throw InvalidInput("operation input does not match the anchor system");
  if (!anchor.reduced_A.faithful(tol.supp))
    throw PreconditionViolated("anchor marginal on A must be faithful");
  const Index d_B = op.dim_out();
  const Index d_R = anchor.dim_R;
  Cmat acc = Cmat::Zero(d_B * d_R, d_B * d_R);
  for (const Cmat& k : op.kraus()) {
    const Cvec v = kron(k, Cmat::Identity(d_R, d_R)) * anchor.vector;
    acc += v * v.adjoint();
  }
  Tolerances loose = tol;
  loose.herm = std::max(tol.herm, 1e-9);
  loose.psd = std::max(tol.psd, 1e-9);
  ChoiOperator out{PositiveOperator(acc, loose), anchor, d_B, 0};
  const EigenSystem es = eig_desc(acc);
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > tol.rank) ++out.rank;
  return out;
}

ChoiOperator cj_forward(const QuantumOperation& op, const Tolerances& tol) {
  return cj_forward(op, default_purification(op.dim_in()), tol);
}

QuantumOperation cj_inverse(const ChoiOperator& choi, const Tolerances& tol) {
  const Purification& anchor = choi.purification_used;
  const Index d_B = choi.dim_B;
  const Index d_R = anchor.dim_R;
  const Index d_A = anchor.dim_A;
  const PositiveOperator marg(
      partial_trace(choi.matrix.matrix(), d_B, d_R, false),
      [] {
        Tolerances t;
        t.herm = 1e-8;
        t.psd = 1e-8;
        return t;
      }());
  const MembershipResult mem = cj_membership(marg, anchor, tol);
  if (!mem.member)
    throw PreconditionViolated("R-marginal fails the compatibility bound, witness " +
                               std::to_string(mem.witness));
  const EigenSystem es = eig_desc(choi.matrix.matrix());
  std::vector<Cmat> kraus;
  for (Index a = 0; a < es.values.size(); ++a) {
    if (es.values(a) <= tol.rank) continue;
    const double w = std::sqrt(es.values(a));
    // Unfold the eigenvector on B (x) R, divide out the Schmidt weights, and
    // rotate the R index back to the A-side Schmidt basis.
    Cmat m(d_B, d_R);
    for (Index b = 0; b < d_B; ++b)
      for (Index r = 0; r < d_R; ++r) m(b, r) = w * es.vectors(b * d_R + r, a);
    Cmat scaled = Cmat::Zero(d_B, d_A);
    for (Index i = 0; i < std::min(d_R, d_A); ++i) {
      const double li = anchor.spectrum[static_cast<size_t>(i)];
      if (li <= tol.supp) continue;
      scaled.col(i) = m.col(i) / std::sqrt(li);
    }
    kraus.push_back(scaled * anchor.basis_A.adjoint());
  }
  if (kraus.empty()) kraus.push_back(Cmat::Zero(d_B, d_A));
  // Channel exactly when the R-marginal equals the anchor marginal.
  const double marg_dev =
      (marg.matrix() - anchor.reduced_R.matrix()).cwiseAbs().maxCoeff();
  const OpKind kind = marg_dev <= 1e-8 ? OpKind::channel : OpKind::operation;
  Tolerances loose = tol;
  loose.trace = std::max(tol.trace, 1e-8);
  loose.psd = std::max(tol.psd, 1e-8);
  return QuantumOperation(std::move(kraus), kind, loose);
}

QuantumOperation canonical_form(const QuantumOperation& op, const Tolerances& tol) {
  return cj_inverse(cj_forward(op, tol), tol);
}

}  // namespace strongconv
