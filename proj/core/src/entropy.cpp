#include "strongconv/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace strongconv {

namespace {

Tolerances loose_state_tol() {
  Tolerances t;
  t.psd = 1e-6;
  t.herm = 1e-8;
  t.trace = 1e-6;
  return t;
}

std::vector<Index> sorted_window(const std::vector<Index>& window) {
  if (window.empty()) throw InvalidInput("empty index window");
  std::vector<Index> w = window;
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  if (w.front() < 1) throw InvalidInput("sequence indices start at 1");
  return w;
}

LimitEstimate cluster_and_estimate(const std::vector<Index>& window,
                                   const std::vector<Cmat>& values,
                                   const Tolerances& tol) {
  const std::vector<Index> kept = tail_cluster(window, values, tol.cluster);
  std::vector<Cmat> kv;
  kv.reserve(kept.size());
  for (Index n : kept) {
    const auto it = std::lower_bound(window.begin(), window.end(), n);
    kv.push_back(values[static_cast<size_t>(it - window.begin())]);
  }
  return estimate_limit(kept, kv, tol.cauchy);
}

// Clip extrapolation noise off the spectrum before handing a matrix limit to
// the divergence routines.
PositiveOperator clipped_positive(const Cmat& m) {
  const EigenSystem es = eig_desc(hermitize(m));
  Cmat out = Cmat::Zero(m.rows(), m.cols());
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > 0.0)
      out += es.values(i) * es.vectors.col(i) * es.vectors.col(i).adjoint();
  return PositiveOperator(out, loose_state_tol());
}

}  // namespace

EnergyModel::EnergyModel(Cmat h, double ground_shift, const Tolerances& tol)
    : h_(std::move(h)), shift_(ground_shift) {
  if (h_.rows() != h_.cols() || h_.rows() < 1)
    throw InvalidInput("Hamiltonian must be square");
  if (herm_defect(h_) > tol.herm)
    throw InvalidInput("Hamiltonian must be Hermitian");
  h_ = hermitize(h_);
  const EigenSystem es = eig_desc(h_);
  if (es.values.minCoeff() < -tol.psd)
    throw InvalidInput("Hamiltonian must be positive after the ground shift");
  // Diagonal models must list energies in non-decreasing canonical order.
  double offdiag = 0.0;
  for (Index i = 0; i < h_.rows(); ++i)
    for (Index j = 0; j < h_.cols(); ++j)
      if (i != j) offdiag = std::max(offdiag, std::abs(h_(i, j)));
  if (offdiag <= 1e-14) {
    for (Index i = 0; i + 1 < h_.rows(); ++i)
      if (h_(i, i).real() > h_(i + 1, i + 1).real() + 1e-12)
        throw InvalidInput("diagonal Hamiltonian must be non-decreasing");
  }
}

double EnergyModel::energy(const Cmat& rho) const {
  if (rho.rows() != h_.rows()) throw InvalidInput("energy: dimension mismatch");
  return (h_ * rho).trace().real() + shift_ * rho.trace().real();
}

EnergyModel EnergyModel::number_operator(Index dim) {
  Cmat h = Cmat::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) h(i, i) = static_cast<double>(i);
  return EnergyModel(std::move(h));
}

double von_neumann_entropy(const PositiveOperator& rho) {
  const EigenSystem es = eig_desc(rho.matrix());
  double s = 0.0;
  for (Index i = 0; i < es.values.size(); ++i) {
    const double r = es.values(i);
    if (r > 0.0) s -= r * std::log(r);
  }
  return s;
}

ExtendedReal relative_entropy(const PositiveOperator& rho,
                              const PositiveOperator& sigma,
                              const Tolerances& tol) {
  if (rho.dim() != sigma.dim())
    throw InvalidInput("relative entropy needs matching dimensions");
  const EigenSystem er = eig_desc(rho.matrix());
  const EigenSystem es = eig_desc(sigma.matrix());
  const double tr_rho = rho.trace();
  const double tr_sigma = sigma.trace();
  if (tr_rho <= 1e-14) return {tr_sigma, false, 0.0};  // divergence at zero

  const double r_clip = tol.supp * std::max(1.0, er.values.maxCoeff());
  const double s_clip = tol.supp * std::max(1.0, es.values.maxCoeff());

  // Overlaps |<u_i|v_j>|^2 between the two eigenbases.
  const Cmat overlap = er.vectors.adjoint() * es.vectors;

  double defect = 0.0;
  for (Index i = 0; i < er.values.size(); ++i) {
    const double r = std::max(0.0, er.values(i));
    if (r <= r_clip) continue;
    for (Index j = 0; j < es.values.size(); ++j)
      if (es.values(j) <= s_clip) defect += r * std::norm(overlap(i, j));
  }
  if (defect > tol.supp_defect) return ExtendedReal::inf(defect);

  double d = tr_sigma - tr_rho;
  for (Index i = 0; i < er.values.size(); ++i) {
    const double r = std::max(0.0, er.values(i));
    if (r <= r_clip) continue;
    d += r * std::log(r);
    for (Index j = 0; j < es.values.size(); ++j) {
      const double s = es.values(j);
      if (s <= s_clip) continue;
      d -= r * std::norm(overlap(i, j)) * std::log(s);
    }
  }
  return {d, false, defect};
}

double mutual_information(const PositiveOperator& omega, Index dim_x,
                          Index dim_y, const Tolerances& tol) {
  if (omega.dim() != dim_x * dim_y)
    throw InvalidInput("mutual information: split does not match the operator");
  const double c = omega.trace();
  if (c <= 1e-14) return 0.0;
  const Cmat norm_m = omega.matrix() / c;
  const PositiveOperator hat(norm_m, loose_state_tol());
  const Cmat mx = partial_trace(norm_m, dim_x, dim_y, true);
  const Cmat my = partial_trace(norm_m, dim_x, dim_y, false);
  const PositiveOperator prod(kron(mx, my), loose_state_tol());
  const ExtendedReal d = relative_entropy(hat, prod, tol);
  if (!d.infinite) return c * std::max(0.0, d.value);
  // Support roundoff pathologies: fall back to the entropy-sum form, which is
  // the same quantity and always finite here.
  const double s = von_neumann_entropy(PositiveOperator(mx, loose_state_tol())) +
                   von_neumann_entropy(PositiveOperator(my, loose_state_tol())) -
                   von_neumann_entropy(hat);
  return c * std::max(0.0, s);
}

QcmiResult qcmi(const State& omega, Index dim_a, Index dim_b, Index dim_c,
                std::optional<TruncationLadder> ladder_a,
                std::optional<TruncationLadder> ladder_c,
                const Tolerances& tol) {
  if (omega.dim() != dim_a * dim_b * dim_c)
    throw InvalidInput("qcmi: tripartite split does not match the state");
  const Cmat& w = omega.matrix();
  const std::vector<Index> dims = {dim_a, dim_b, dim_c};
  const Cmat w_ab = partial_trace_multi(w, dims, {true, true, false});
  const Cmat w_bc = partial_trace_multi(w, dims, {false, true, true});
  const Cmat w_a = partial_trace_multi(w, dims, {true, false, false});
  const Cmat w_b = partial_trace_multi(w, dims, {false, true, false});
  const Cmat w_c = partial_trace_multi(w, dims, {false, false, true});

  std::vector<Index> full_a, full_c;
  for (Index r = 1; r <= dim_a; ++r) full_a.push_back(r);
  for (Index r = 1; r <= dim_c; ++r) full_c.push_back(r);
  const TruncationLadder la =
      ladder_a ? *ladder_a
               : TruncationLadder::from_basis(eig_desc(w_a).vectors, full_a);
  const TruncationLadder lc =
      ladder_c ? *ladder_c
               : TruncationLadder::from_basis(eig_desc(w_c).vectors, full_c);
  if (la.dim() != dim_a || lc.dim() != dim_c)
    throw InvalidInput("qcmi: ladder dimensions do not match the split");

  QcmiResult out;
  const Cmat id_bc = Cmat::Identity(dim_b * dim_c, dim_b * dim_c);
  const Cmat id_ab = Cmat::Identity(dim_a * dim_b, dim_a * dim_b);
  const Cmat id_b = Cmat::Identity(dim_b, dim_b);
  for (Index m = 0; m < la.size(); ++m) {
    const Cmat& p = la.rung(m).matrix();
    const Cmat q = kron(p, id_bc);
    const PositiveOperator comp(hermitize(q * w * q), loose_state_tol());
    const Cmat q_ab = kron(p, id_b);
    const PositiveOperator comp_ab(hermitize(q_ab * w_ab * q_ab), loose_state_tol());
    const double v = mutual_information(comp, dim_a, dim_b * dim_c, tol) -
                     mutual_information(comp_ab, dim_a, dim_b, tol);
    out.a_side_profile.push_back(v);
  }
  for (Index m = 0; m < lc.size(); ++m) {
    const Cmat& p = lc.rung(m).matrix();
    const Cmat q = kron(id_ab, p);
    const PositiveOperator comp(hermitize(q * w * q), loose_state_tol());
    const Cmat q_bc = kron(id_b, p);
    const PositiveOperator comp_bc(hermitize(q_bc * w_bc * q_bc), loose_state_tol());
    const double v = mutual_information(comp, dim_a * dim_b, dim_c, tol) -
                     mutual_information(comp_bc, dim_b, dim_c, tol);
    out.c_side_profile.push_back(v);
  }
  const auto clipped_max = [](const std::vector<double>& xs) {
    double best = -1e300;
    for (double x : xs) best = std::max(best, x);
    return (best < 0.0 && best >= -1e-8) ? 0.0 : best;
  };
  out.value_a_side = clipped_max(out.a_side_profile);
  out.value_c_side = clipped_max(out.c_side_profile);
  out.agreement = std::abs(out.value_a_side - out.value_c_side);
  const Tolerances lt = loose_state_tol();
  out.value_direct = von_neumann_entropy(PositiveOperator(w_ab, lt)) +
                     von_neumann_entropy(PositiveOperator(w_bc, lt)) -
                     von_neumann_entropy(omega.positive()) -
                     von_neumann_entropy(PositiveOperator(w_b, lt));
  return out;
}

MonotonicityReport monotonicity_check(const QuantumOperation& phi,
                                      const PositiveOperator& rho,
                                      const PositiveOperator& sigma,
                                      const Tolerances& tol) {
  MonotonicityReport out;
  const ExtendedReal din = relative_entropy(rho, sigma, tol);
  if (din.infinite) {
    out.vacuous = true;
    return out;
  }
  const PositiveOperator prho(phi.apply_matrix(rho.matrix()), loose_state_tol());
  const PositiveOperator psigma(phi.apply_matrix(sigma.matrix()), loose_state_tol());
  const ExtendedReal dout = relative_entropy(prho, psigma, tol);
  out.d_in = din.value;
  out.d_out = dout.infinite ? din.value : dout.value;  // cannot exceed input
  out.slack = out.d_in - out.d_out;
  return out;
}

FidelityBoundReport fr_verify(const State& omega, Index dim_a, Index dim_b,
                              Index dim_c, const QuantumOperation& recovery,
                              const Tolerances& tol) {
  if (omega.dim() != dim_a * dim_b * dim_c)
    throw InvalidInput("fr_verify: tripartite split does not match the state");
  if (recovery.dim_in() != dim_b || recovery.dim_out() != dim_b * dim_c)
    throw InvalidInput("recovery map must send B to B(x)C");
  const std::vector<Index> dims = {dim_a, dim_b, dim_c};
  const Cmat& w = omega.matrix();
  const Cmat w_ab = partial_trace_multi(w, dims, {true, true, false});
  const Cmat w_b = partial_trace_multi(w, dims, {false, true, false});
  const Cmat w_c = partial_trace_multi(w, dims, {false, false, true});

  FidelityBoundReport out;
  const QcmiResult q = qcmi(omega, dim_a, dim_b, dim_c, {}, {}, tol);
  out.qcmi_nats = std::max(0.0, q.value_a_side);
  out.lhs = std::exp(-0.5 * out.qcmi_nats);

  const QuantumOperation extended =
      tensor(QuantumOperation::identity(dim_a), recovery);
  const PositiveOperator recovered(extended.apply_matrix(w_ab), loose_state_tol());
  out.rhs = fidelity(omega.positive(), recovered);

  const Cmat rec_b = recovery.apply_matrix(w_b);  // on B (x) C
  out.marginal_residual_b =
      trace_norm(partial_trace(rec_b, dim_b, dim_c, true) - w_b);
  out.marginal_residual_c =
      trace_norm(partial_trace(rec_b, dim_b, dim_c, false) - w_c);
  out.satisfied = out.lhs <= out.rhs + 1e-9;
  out.marginals_exact = out.marginal_residual_b <= tol.roundtrip &&
                        out.marginal_residual_c <= tol.roundtrip;
  return out;
}

MarginalDominationReport marginal_domination_check(
    const ChannelSequence& seq, const State& rho, const PositiveOperator& beta,
    const PositiveOperator& gamma, Index dim_b, Index dim_c,
    const std::vector<Index>& window, const Tolerances& tol) {
  if (seq.dim_out() != dim_b * dim_c)
    throw InvalidInput("output split does not match the sequence");
  if (rho.dim() != seq.dim_in()) throw InvalidInput("probe dimension mismatch");
  const std::vector<Index> w = sorted_window(window);
  MarginalDominationReport out;
  double worst_b = 0.0, worst_c = 0.0;
  for (Index n : w) {
    const Cmat img = seq.at(n).apply_matrix(rho.matrix());
    const Cmat mb = partial_trace(img, dim_b, dim_c, true);
    const Cmat mc = partial_trace(img, dim_b, dim_c, false);
    const auto min_eig = [](const Cmat& m) {
      Eigen::SelfAdjointEigenSolver<Cmat> s(hermitize(m), Eigen::EigenvaluesOnly);
      return s.eigenvalues().minCoeff();
    };
    worst_b = std::min(worst_b, min_eig(beta.matrix() - mb));
    worst_c = std::min(worst_c, min_eig(gamma.matrix() - mc));
  }
  out.worst_b = -worst_b;
  out.worst_c = -worst_c;
  out.dominated = out.worst_b <= tol.psd + 1e-12 && out.worst_c <= tol.psd + 1e-12;
  if (!out.dominated) {
    out.status = "domination fails on this window";
    return out;
  }
  out.extraction = extract_limit_point(seq, w, Cmat(), tol);
  out.passed = out.extraction.success;
  out.status = out.passed
                   ? "ok"
                   : "contradiction: marginals dominated but extraction failed";
  return out;
}

EnergyAmplificationReport energy_amplification(
    const QuantumOperation& phi, const EnergyModel& h_in,
    const EnergyModel& h_out, const std::vector<State>& probes,
    std::optional<double> energy_bound, std::optional<State> constraint_state,
    const Tolerances& tol) {
  (void)tol;
  if (h_in.dim() != phi.dim_in() || h_out.dim() != phi.dim_out())
    throw InvalidInput("energy models must match the channel's spaces");
  if (probes.empty()) throw InvalidInput("need at least one probe state");
  EnergyAmplificationReport out;
  Index excluded = 0;
  for (const State& p : probes) {
    const double e_in = h_in.energy(p.matrix());
    if (e_in <= 1e-12) {
      out.ratios.push_back(0.0);
      out.included.push_back(false);
      ++excluded;
      continue;
    }
    const double e_out = h_out.energy(phi.apply_matrix(p.matrix()));
    out.ratios.push_back(e_out / e_in);
    out.included.push_back(true);
    out.k_hat = std::max(out.k_hat, e_out / e_in);
  }
  if (excluded > 0)
    out.notice = std::to_string(excluded) + " zero-energy probe(s) excluded";
  if (energy_bound) {
    const State& s = constraint_state ? *constraint_state : probes.front();
    out.constraint_evaluated = true;
    out.constraint_value = h_out.energy(phi.apply_matrix(s.matrix()));
    out.constraint_ok = out.constraint_value <= *energy_bound + 1e-9;
  }
  return out;
}

PreservationReport convergence_preservation_harness(
    const ChannelSequence& maps, const std::function<State(Index)>& rho_n,
    const std::function<State(Index)>& sigma_n, const State& rho0,
    const State& sigma0, const std::vector<Index>& window,
    const Tolerances& tol) {
  const std::vector<Index> w = sorted_window(window);
  PreservationReport out;
  const ExtendedReal din0 = relative_entropy(rho0.positive(), sigma0.positive(), tol);
  if (din0.infinite) {
    out.status = "precondition-violated: limit divergence is infinite";
    return out;
  }
  out.input_limit = din0.value;

  std::vector<cplx> din_profile;
  std::vector<Cmat> out_rho, out_sigma;
  bool any_infinite = false;
  for (Index n : w) {
    const State rn = rho_n(n);
    const State sn = sigma_n(n);
    const QuantumOperation op = maps.at(n);
    const Cmat pr = op.apply_matrix(rn.matrix());
    const Cmat ps = op.apply_matrix(sn.matrix());
    const ExtendedReal din = relative_entropy(rn.positive(), sn.positive(), tol);
    const ExtendedReal dout = relative_entropy(PositiveOperator(pr, loose_state_tol()),
                                               PositiveOperator(ps, loose_state_tol()), tol);
    PreservationRow row;
    row.n = n;
    row.d_in = din.infinite ? 0.0 : din.value;
    row.d_in_infinite = din.infinite;
    row.d_out = dout.infinite ? 0.0 : dout.value;
    row.d_out_infinite = dout.infinite;
    any_infinite = any_infinite || din.infinite;
    out.rows.push_back(row);
    din_profile.push_back(row.d_in);
    out_rho.push_back(pr);
    out_sigma.push_back(ps);
  }
  if (any_infinite) {
    out.status = "precondition-violated: input divergence infinite on the window";
    return out;
  }
  const ScalarLimitEstimate din_est = estimate_scalar_limit(w, din_profile, tol.cauchy);
  if (!din_est.converged ||
      std::abs(din_est.limit.real() - out.input_limit) >
          std::max(tol.conv, 10.0 * din_est.uncertainty)) {
    out.status = "precondition-violated: input divergences do not converge to the limit";
    return out;
  }
  const LimitEstimate rho_est = cluster_and_estimate(w, out_rho, tol);
  const LimitEstimate sigma_est = cluster_and_estimate(w, out_sigma, tol);
  if (!rho_est.converged || !sigma_est.converged) {
    out.status = "precondition-violated: output sequences do not converge on the window";
    return out;
  }
  out.hypotheses_ok = true;
  const ExtendedReal dlim = relative_entropy(clipped_positive(rho_est.limit),
                                             clipped_positive(sigma_est.limit), tol);
  if (dlim.infinite) {
    out.status = "output limit divergence infinite";
    return out;
  }
  out.limit_value = dlim.value;
  out.terminal_deviation = std::abs(out.rows.back().d_out - out.limit_value);
  out.passed = out.terminal_deviation <= tol.conv;
  out.status = out.passed ? "ok" : "terminal deviation above tolerance";
  return out;
}

PreservationReport convergence_preservation_harness(
    const QuantumOperation& phi, const std::function<State(Index)>& rho_n,
    const std::function<State(Index)>& sigma_n, const State& rho0,
    const State& sigma0, const std::vector<Index>& window,
    const Tolerances& tol) {
  const ChannelSequence constant(
      [phi](Index) { return phi; }, phi.dim_in(), phi.dim_out(), std::nullopt,
      "constant");
  return convergence_preservation_harness(constant, rho_n, sigma_n, rho0,
                                          sigma0, window, tol);
}

}  // namespace strongconv
