#include "strongconv/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "strongconv/entropy.hpp"
#include "strongconv/families.hpp"

namespace strongconv {

namespace {

double err_trace(const Cmat& a, const Cmat& b) { return trace_norm(a - b); }

}  // namespace

PetzMap petz_map(const QuantumOperation& phi, const State& sigma,
                 double eps_supp, const Tolerances& tol) {
  if (sigma.dim() != phi.dim_in())
    throw InvalidInput("petz_map: reference state dimension mismatch");
  if (!sigma.faithful(eps_supp))
    throw PreconditionViolated("petz_map: reference state must be faithful");

  const Cmat sig_sqrt = sqrt_psd(sigma.positive());
  const PositiveOperator out = phi.apply(sigma.positive());
  const Cmat out_isqrt = pinv_sqrt(out, eps_supp);

  std::vector<Cmat> ks;
  ks.reserve(phi.kraus().size());
  for (const Cmat& v : phi.kraus())
    ks.push_back(sig_sqrt * v.adjoint() * out_isqrt);

  // The gram equals the support projector of phi(sigma): a channel exactly
  // when the output state has full rank, a trace-reducing operation
  // otherwise. Unitality of the dual holds on that support by construction.
  Cmat gram = Cmat::Zero(phi.dim_out(), phi.dim_out());
  for (const Cmat& w : ks) gram += w.adjoint() * w;
  const double defect =
      (Cmat::Identity(phi.dim_out(), phi.dim_out()) - hermitize(gram))
          .cwiseAbs()
          .maxCoeff();
  Tolerances ctor = tol;
  ctor.trace = std::max(tol.trace, 1e-8);
  QuantumOperation theta(ks, defect <= 1e-9 ? OpKind::channel : OpKind::operation,
                         ctor);
  return PetzMap{std::move(theta), phi, sigma, eps_supp};
}

PetzMap petz_interpolated(const QuantumOperation& phi, const State& rho,
                          const State& sigma, double t, double eps_supp,
                          const Tolerances& tol) {
  if (!(t > 0.0 && t < 1.0))
    throw InvalidInput("petz_interpolated: t must lie strictly inside (0,1)");
  if (rho.dim() != sigma.dim())
    throw InvalidInput("petz_interpolated: state dimension mismatch");
  const Cmat mix = t * rho.matrix() + (1.0 - t) * sigma.matrix();
  return petz_map(phi, normalized(PositiveOperator(mix, tol)), eps_supp, tol);
}

ReversibilityReport reversibility_test(const QuantumOperation& phi,
                                       const State& rho, const State& sigma,
                                       const Tolerances& tol) {
  ReversibilityReport rep;
  const ExtendedReal din =
      relative_entropy(rho.positive(), sigma.positive(), tol);
  if (din.infinite) {
    rep.vacuous = true;
    rep.d_in = std::numeric_limits<double>::infinity();
    return rep;
  }
  const PositiveOperator out_rho = phi.apply(rho.positive());
  const PositiveOperator out_sig = phi.apply(sigma.positive());
  const ExtendedReal dout = relative_entropy(out_rho, out_sig, tol);
  rep.d_in = din.value;
  rep.d_out = dout.infinite ? std::numeric_limits<double>::infinity() : dout.value;
  rep.gap = rep.d_in - rep.d_out;
  if (rep.gap < 0.0 && rep.gap > -1e-9) rep.gap = 0.0;

  const PetzMap pm = petz_map(phi, sigma, Tolerances{}.supp, tol);
  rep.recovery_error =
      err_trace(pm.theta.apply_matrix(out_rho.matrix()), rho.matrix());
  rep.saturated = rep.gap <= tol.rev;
  rep.recovered = rep.recovery_error <= tol.rev;
  rep.consistent = rep.saturated == rep.recovered;
  return rep;
}

DonaldReport donald_identity_check(const State& rho, const State& sigma,
                                   double t, const Tolerances& tol) {
  if (!(t > 0.0 && t < 1.0))
    throw InvalidInput("donald_identity_check: t must lie strictly inside (0,1)");
  if (rho.dim() != sigma.dim())
    throw InvalidInput("donald_identity_check: state dimension mismatch");
  DonaldReport rep;
  const PositiveOperator mix(
      t * rho.matrix() + (1.0 - t) * sigma.matrix(), tol);
  const ExtendedReal d_rs = relative_entropy(rho.positive(), sigma.positive(), tol);
  if (d_rs.infinite) return rep;  // both sides infinite; nothing to compare
  const ExtendedReal d_rm = relative_entropy(rho.positive(), mix, tol);
  const ExtendedReal d_sm = relative_entropy(sigma.positive(), mix, tol);
  const ExtendedReal d_ms = relative_entropy(mix, sigma.positive(), tol);
  if (d_rm.infinite || d_sm.infinite || d_ms.infinite) return rep;
  rep.finite = true;
  rep.lhs = t * d_rs.value;
  rep.rhs = t * d_rm.value + (1.0 - t) * d_sm.value + d_ms.value;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  return rep;
}

ReversingFit fit_reversing_channel(const QuantumOperation& phi,
                                   const std::vector<State>& family,
                                   const FitOptions& opts,
                                   const Tolerances& tol) {
  if (family.empty())
    throw InvalidInput("fit_reversing_channel: empty state family");
  for (const State& s : family)
    if (s.dim() != phi.dim_in())
      throw InvalidInput("fit_reversing_channel: family member dimension mismatch");

  ChoiFitProblem prob;
  prob.dim_in = phi.dim_out();
  prob.dim_out = phi.dim_in();
  prob.inputs.reserve(family.size());
  prob.targets.reserve(family.size());
  for (const State& s : family) {
    prob.inputs.push_back(phi.apply(s.positive()).matrix());
    prob.targets.push_back(s.matrix());
  }

  ReversingFit out{fit_channel_choi(prob, opts, tol), 0.0, {}};
  out.per_state.reserve(family.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double e = err_trace(out.fit.fitted.apply_matrix(prob.inputs[i]),
                               prob.targets[i]);
    out.per_state.push_back(e);
    worst = std::max(worst, e);
  }
  out.residual = worst;
  return out;
}

ReversingSequenceReport reversing_sequence_harness(
    const ChannelSequence& phi_seq, const ChannelSequence& psi_seq,
    const std::vector<State>& family, const std::vector<Index>& window,
    const Tolerances& tol) {
  if (family.empty())
    throw InvalidInput("reversing_sequence_harness: empty state family");
  if (window.size() < 6)
    throw InvalidInput("reversing_sequence_harness: window too short");

  ReversingSequenceReport rep;

  // Stage 1: each psi_n must undo phi_n on the family.
  double worst = 0.0;
  for (Index n : window) {
    const QuantumOperation fwd = phi_seq.at(n);
    const QuantumOperation rev = psi_seq.at(n);
    for (const State& s : family)
      worst = std::max(
          worst, err_trace(rev.apply_matrix(fwd.apply(s.positive()).matrix()),
                           s.matrix()));
  }
  rep.worst_per_index = worst;
  rep.per_index_ok = worst <= std::max(tol.rev, 1e-6);
  if (!rep.per_index_ok) {
    rep.status = "per-index reversal fails on the window";
    return rep;
  }

  // Stage 2: strong limit of the forward sequence.
  rep.phi_extraction = extract_limit_point(phi_seq, window, Cmat(), tol);
  if (!rep.phi_extraction.success) {
    rep.status = "forward sequence has no limit point on the window";
    return rep;
  }
  const QuantumOperation& phi0 = *rep.phi_extraction.limit;

  // Restriction subspace: numerical support of the limit output on the
  // uniform mixture of the family.
  Cmat mix = Cmat::Zero(phi0.dim_in(), phi0.dim_in());
  for (const State& s : family) mix += s.matrix();
  mix /= static_cast<double>(family.size());
  const Cmat out0 = hermitize(phi0.apply_matrix(mix));
  Eigen::SelfAdjointEigenSolver<Cmat> es(out0);
  std::vector<Index> keep;
  for (Index i = 0; i < out0.rows(); ++i)
    if (es.eigenvalues()(i) > tol.supp) keep.push_back(i);
  if (keep.empty()) {
    rep.status = "limit output has empty numerical support";
    return rep;
  }
  Cmat isom(out0.rows(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    isom.col(static_cast<Index>(c)) = es.eigenvectors().col(keep[c]);
  rep.support_rank = isom.cols();

  // Stage 3: limit of the reversing maps restricted to that subspace. The
  // restriction of a channel along an isometry is again exactly a channel.
  Tolerances rtol = tol;
  rtol.trace = std::max(tol.trace, 1e-8);
  ChannelSequence restricted(
      [&psi_seq, isom, rtol](Index n) {
        const QuantumOperation full = psi_seq.at(n);
        std::vector<Cmat> ks;
        ks.reserve(full.kraus().size());
        for (const Cmat& k : full.kraus()) ks.push_back(k * isom);
        return QuantumOperation(ks, full.kind(), rtol);
      },
      isom.cols(), psi_seq.dim_out(), psi_seq.length(),
      psi_seq.family() + "-restricted");

  rep.psi_extraction = extract_limit_point(restricted, window, Cmat(), tol);
  if (!rep.psi_extraction.success) {
    rep.status = "reversing sequence has no limit point on the support";
    return rep;
  }

  // Stage 4: the extracted limit must reverse the extracted forward limit.
  double limit_worst = 0.0;
  for (const State& s : family) {
    const Cmat compressed =
        isom.adjoint() * phi0.apply_matrix(s.matrix()) * isom;
    limit_worst = std::max(
        limit_worst,
        err_trace(rep.psi_extraction.limit->apply_matrix(compressed),
                  s.matrix()));
  }
  rep.limit_residual = limit_worst;
  const double bar =
      std::max({tol.rev, 1e-6,
                10.0 * (rep.phi_extraction.max_uncertainty +
                        rep.psi_extraction.max_uncertainty)});
  rep.passed = limit_worst <= bar;
  rep.status = rep.passed ? "limit reverses the forward limit"
                          : "limit fails to reverse the forward limit";
  return rep;
}

}  // namespace strongconv
