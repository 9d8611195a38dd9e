#include "strongconv/degradability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <utility>

#include "strongconv/families.hpp"

namespace strongconv {

namespace {

std::vector<Cmat> matrix_units(Index d) {
  std::vector<Cmat> us;
  us.reserve(static_cast<std::size_t>(d * d));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      Cmat u = Cmat::Zero(d, d);
      u(i, j) = 1.0;
      us.push_back(std::move(u));
    }
  return us;
}

ChoiFitProblem image_matching_problem(const QuantumOperation& from,
                                      const QuantumOperation& to) {
  // Unknown map X with X o from = to, fitted on the matrix units of the
  // common input space.
  ChoiFitProblem prob;
  prob.dim_in = from.dim_out();
  prob.dim_out = to.dim_out();
  const auto units = matrix_units(from.dim_in());
  prob.inputs.reserve(units.size());
  prob.targets.reserve(units.size());
  for (const Cmat& u : units) {
    prob.inputs.push_back(from.apply_matrix(u));
    prob.targets.push_back(to.apply_matrix(u));
  }
  return prob;
}

}  // namespace

DegradabilityCertificate degradability_certificate(const QuantumOperation& phi,
                                                   const FitOptions& opts,
                                                   const Tolerances& tol) {
  if (!phi.is_channel())
    throw PreconditionViolated(
        "degradability_certificate: input must be a channel");

  const QuantumOperation phihat = complementary(phi, tol);

  DegradabilityCertificate cert;
  cert.restarts = opts.restarts;
  cert.seed = opts.seed;

  // Degrading direction: Theta o Phi = complement. A warm start, when given,
  // seeds this side only; the opposite side has a differently shaped Choi.
  {
    FitOptions deg_opts = opts;
    if (deg_opts.warm_start &&
        deg_opts.warm_start->rows() != phihat.dim_out() * phi.dim_out())
      deg_opts.warm_start.reset();
    const FitResult fit =
        fit_channel_choi(image_matching_problem(phi, phihat), deg_opts, tol);
    cert.deg_objective = fit.objective;
    cert.deg_residual = strong_distance(compose(fit.fitted, phi, tol), phihat);
    cert.degradable = cert.deg_residual <= tol.cert;
    cert.deg_conclusive = cert.degradable || fit.converged;
    cert.degrading = fit.fitted;
  }

  // Anti-degrading direction: Theta' o complement = Phi.
  {
    FitOptions anti_opts = opts;
    anti_opts.warm_start.reset();
    const FitResult fit =
        fit_channel_choi(image_matching_problem(phihat, phi), anti_opts, tol);
    cert.antideg_objective = fit.objective;
    cert.antideg_residual = strong_distance(compose(fit.fitted, phihat, tol), phi);
    cert.antidegradable = cert.antideg_residual <= tol.cert;
    cert.antideg_conclusive = cert.antidegradable || fit.converged;
    cert.antidegrading = fit.fitted;
  }

  cert.conclusive = cert.deg_conclusive && cert.antideg_conclusive;
  return cert;
}

ClosureReport degradable_closure_harness(const ChannelSequence& seq,
                                         const std::vector<Index>& window,
                                         const FitOptions& opts,
                                         const Tolerances& tol) {
  if (window.size() < 6)
    throw InvalidInput("degradable_closure_harness: window too short");
  std::vector<Index> w = window;
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  if (w.front() < 1)
    throw InvalidInput("degradable_closure_harness: indices start at 1");

  ClosureReport rep;

  // Geometrically spaced member sample; certification per index is the
  // expensive part, so cap it at eight indices.
  {
    const double lo = static_cast<double>(w.front());
    const double hi = static_cast<double>(w.back());
    constexpr int kSamples = 8;
    for (int k = 0; k < kSamples; ++k) {
      const double target =
          lo * std::pow(hi / lo, static_cast<double>(k) / (kSamples - 1));
      const auto it = std::min_element(
          w.begin(), w.end(), [target](Index a, Index b) {
            return std::abs(static_cast<double>(a) - target) <
                   std::abs(static_cast<double>(b) - target);
          });
      if (rep.sampled.empty() || rep.sampled.back() != *it)
        rep.sampled.push_back(*it);
    }
  }

  // Certify members oldest-first, chaining each degrading map into the next
  // fit as a warm start; smooth parameter families then stay on one branch.
  FitOptions member_opts = opts;
  member_opts.restarts = std::max(2, opts.restarts / 5);
  bool all_deg = true;
  double worst = 0.0;
  for (Index n : rep.sampled) {
    const QuantumOperation member = seq.at(n);
    DegradabilityCertificate cert =
        degradability_certificate(member, member_opts, tol);
    all_deg = all_deg && cert.degradable;
    worst = std::max(worst, cert.deg_residual);
    if (cert.degrading) member_opts.warm_start = canonical_choi(*cert.degrading);
    rep.member_certificates.push_back(std::move(cert));
  }
  rep.members_degradable = all_deg;
  rep.worst_member_residual = worst;

  // Limit of the sequence itself over the full window.
  rep.limit_extraction = extract_limit_point(seq, w, Cmat(), tol);
  if (!rep.limit_extraction.success) {
    rep.status = "no strong limit found on the window";
    return rep;
  }
  const QuantumOperation& phi0 = *rep.limit_extraction.limit;
  if (!phi0.is_channel()) {
    rep.status = "extracted limit is not trace preserving";
    return rep;
  }

  // Full-strength certificate at the limit, warmed by the last member.
  FitOptions limit_opts = opts;
  if (member_opts.warm_start) limit_opts.warm_start = member_opts.warm_start;
  rep.limit_certificate = degradability_certificate(phi0, limit_opts, tol);
  rep.limit_degradable = rep.limit_certificate->degradable;

  // Limit of the degrading maps, restricted to the numerical support of the
  // limit outputs on the canonical faithful input.
  const State rho0 = default_faithful_state(phi0.dim_in());
  const PositiveOperator out0 = phi0.apply(rho0.positive());
  Eigen::SelfAdjointEigenSolver<Cmat> es(out0.matrix());
  std::vector<Index> keep;
  for (Index i = 0; i < out0.dim(); ++i)
    if (es.eigenvalues()(i) > tol.supp) keep.push_back(i);
  Cmat isom(out0.dim(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    isom.col(static_cast<Index>(c)) = es.eigenvectors().col(keep[c]);
  rep.support_rank = isom.cols();

  bool dims_agree = true;
  Index de = -1;
  for (const auto& cert : rep.member_certificates) {
    if (!cert.degrading) { dims_agree = false; break; }
    if (de < 0) de = cert.degrading->dim_out();
    if (cert.degrading->dim_out() != de ||
        cert.degrading->dim_in() != out0.dim()) {
      dims_agree = false;
      break;
    }
  }

  if (dims_agree && rep.support_rank > 0 &&
      rep.member_certificates.size() >= 3) {
    Tolerances rtol = tol;
    rtol.trace = std::max(tol.trace, 1e-8);
    auto table = std::make_shared<std::map<Index, QuantumOperation>>();
    for (std::size_t i = 0; i < rep.sampled.size(); ++i) {
      const QuantumOperation& full = *rep.member_certificates[i].degrading;
      std::vector<Cmat> ks;
      ks.reserve(full.kraus().size());
      for (const Cmat& k : full.kraus()) ks.push_back(k * isom);
      table->emplace(rep.sampled[i],
                     QuantumOperation(ks, full.kind(), rtol));
    }
    ChannelSequence restricted(
        [table](Index n) { return table->at(n); }, isom.cols(), de,
        std::nullopt, seq.family() + "-degrading-restricted");
    rep.degrading_extraction =
        extract_limit_point(restricted, rep.sampled, Cmat(), tol);
  } else {
    rep.degrading_extraction.status =
        "degrading maps unavailable or dimension-mismatched; extraction skipped";
  }

  rep.passed = rep.members_degradable && rep.limit_degradable;
  if (rep.passed) {
    rep.status = rep.degrading_extraction.success
                     ? "limit certified degradable; degrading maps converge "
                       "on the support"
                     : "limit certified degradable; degrading-map extraction "
                       "inconclusive";
  } else if (!rep.members_degradable) {
    rep.status = "a sampled member failed certification";
  } else {
    rep.status = rep.limit_certificate->conclusive
                     ? "limit not certified degradable"
                     : "limit certificate inconclusive";
  }
  return rep;
}

}  // namespace strongconv
