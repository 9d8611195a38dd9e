#include "strongconv/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace strongconv {

namespace {

std::vector<Index> checked_window(const std::vector<Index>& window) {
  if (window.empty()) throw InvalidInput("empty index window");
  std::vector<Index> w = window;
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  if (w.front() < 1) throw InvalidInput("sequence indices start at 1");
  return w;
}

// One evaluation of the sequence per window index, shared by every pass.
class WindowCache {
 public:
  WindowCache(const ChannelSequence& seq, const std::vector<Index>& window)
      : window_(window) {
    ops_.reserve(window.size());
    for (Index n : window) ops_.push_back(seq.at(n));
  }

  const std::vector<Index>& window() const { return window_; }
  const QuantumOperation& at(Index n) const {
    const auto it = std::lower_bound(window_.begin(), window_.end(), n);
    if (it == window_.end() || *it != n)
      throw Error("internal: index not in window cache");
    return ops_[static_cast<size_t>(it - window_.begin())];
  }

 private:
  std::vector<Index> window_;
  std::vector<QuantumOperation> ops_;
};

std::vector<Cmat> gather(const std::vector<Index>& at,
                         const std::function<Cmat(Index)>& f) {
  std::vector<Cmat> out;
  out.reserve(at.size());
  for (Index n : at) out.push_back(f(n));
  return out;
}

double lambda_max(const Cmat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Cmat> es(hermitize(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double lambda_min(const Cmat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Cmat> es(hermitize(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Cluster then extrapolate; updates the nested subsequence in place.
LimitEstimate nested_estimate(std::vector<Index>& subseq,
                              const std::function<Cmat(Index)>& value_at,
                              const Tolerances& tol) {
  const std::vector<Cmat> values = gather(subseq, value_at);
  std::vector<Index> kept = tail_cluster(subseq, values, tol.cluster);
  LimitEstimate est;
  if (kept.size() < 3) {
    est.converged = false;
    est.uncertainty = std::numeric_limits<double>::infinity();
    subseq = kept;
    return est;
  }
  est = estimate_limit(kept, gather(kept, value_at), tol.cauchy);
  subseq = kept;
  return est;
}

// Non-nesting variant for a value list already aligned with the window.
LimitEstimate cluster_and_estimate(const std::vector<Index>& window,
                                   const std::vector<Cmat>& values,
                                   const Tolerances& tol) {
  const std::vector<Index> kept = tail_cluster(window, values, tol.cluster);
  std::vector<Cmat> kept_values;
  kept_values.reserve(kept.size());
  for (Index n : kept) {
    const auto it = std::lower_bound(window.begin(), window.end(), n);
    kept_values.push_back(values[static_cast<size_t>(it - window.begin())]);
  }
  return estimate_limit(kept, kept_values, tol.cauchy);
}

}  // namespace

TailMassProfile tail_mass_profile(const ChannelSequence& seq, const State& sigma,
                                  const TruncationLadder& ladder,
                                  const std::vector<Index>& window,
                                  const Tolerances& tol) {
  (void)tol;
  const std::vector<Index> w = checked_window(window);
  if (sigma.dim() != seq.dim_in()) throw InvalidInput("sigma dimension mismatch");
  if (ladder.dim() != seq.dim_out()) throw InvalidInput("ladder lives on the output space");
  TailMassProfile out;
  std::vector<Cmat> outputs;
  outputs.reserve(w.size());
  for (Index n : w) outputs.push_back(seq.at(n).apply_matrix(sigma.matrix()));
  const Cmat id = Cmat::Identity(seq.dim_out(), seq.dim_out());
  for (Index m = 0; m < ladder.size(); ++m) {
    const Cmat tail_proj = id - ladder.rung(m).matrix();
    double best = -1.0;
    Index witness = w.front();
    for (size_t k = 0; k < w.size(); ++k) {
      const double v = std::max(0.0, (tail_proj * outputs[k]).trace().real());
      if (v > best) {
        best = v;
        witness = w[k];
      }
    }
    out.ranks.push_back(ladder.rung(m).rank());
    out.values.push_back(best);
    out.witness_index.push_back(witness);
  }
  return out;
}

DualLadder dual_ladder(const ChannelSequence& seq, const TruncationLadder& ladder,
                       const std::vector<Index>& window, const Tolerances& tol) {
  const std::vector<Index> w = checked_window(window);
  if (ladder.dim() != seq.dim_out()) throw InvalidInput("ladder lives on the output space");
  const WindowCache cache(seq, w);
  DualLadder out;
  out.conclusive = true;
  std::vector<Index> subseq = w;
  for (Index m = 0; m < ladder.size(); ++m) {
    const Cmat pm = ladder.rung(m).matrix();
    const LimitEstimate est = nested_estimate(
        subseq, [&](Index n) { return cache.at(n).dual_apply(pm); }, tol);
    DualLadderRung rung;
    rung.rank = ladder.rung(m).rank();
    rung.converged = est.converged;
    rung.uncertainty = est.uncertainty;
    rung.limit = est.converged ? est.limit : Cmat::Zero(seq.dim_in(), seq.dim_in());
    if (!est.converged) out.conclusive = false;
    out.rungs.push_back(std::move(rung));
  }
  const Cmat id = Cmat::Identity(seq.dim_out(), seq.dim_out());
  const LimitEstimate top = nested_estimate(
      subseq, [&](Index n) { return cache.at(n).dual_apply(id); }, tol);
  out.top_converged = top.converged;
  out.top_uncertainty = top.uncertainty;
  out.top = top.converged ? top.limit : Cmat::Zero(seq.dim_in(), seq.dim_in());
  if (!top.converged) out.conclusive = false;
  out.subsequence = subseq;

  if (out.conclusive) {
    // Re-fit every rung on the final nested subsequence so all limits refer
    // to the same index set.
    for (Index m = 0; m < ladder.size(); ++m) {
      const Cmat pm = ladder.rung(m).matrix();
      std::vector<Index> s = subseq;
      const LimitEstimate est = nested_estimate(
          s, [&](Index n) { return cache.at(n).dual_apply(pm); }, tol);
      if (est.converged) {
        out.rungs[static_cast<size_t>(m)].limit = est.limit;
        out.rungs[static_cast<size_t>(m)].uncertainty = est.uncertainty;
      } else {
        out.conclusive = false;
      }
    }
  }

  double defect = 0.0;
  defect = std::max(defect, -lambda_min(out.rungs.front().limit));
  for (size_t m = 0; m + 1 < out.rungs.size(); ++m)
    defect = std::max(defect,
                      -lambda_min(out.rungs[m + 1].limit - out.rungs[m].limit));
  defect = std::max(defect, -lambda_min(out.top - out.rungs.back().limit));
  out.monotonicity_defect = defect;
  out.gap = out.conclusive ? lambda_max(out.top - out.rungs.back().limit) : 0.0;
  return out;
}

ExtractionResult extract_limit_point(const ChannelSequence& seq,
                                     const std::vector<Index>& window,
                                     const Cmat& input_basis,
                                     const Tolerances& tol) {
  const std::vector<Index> w = checked_window(window);
  const Index d_in = seq.dim_in();
  const Index d_out = seq.dim_out();
  Cmat basis = input_basis.size() == 0 ? Cmat(Cmat::Identity(d_in, d_in)) : input_basis;
  if (basis.rows() != d_in || basis.cols() != d_in)
    throw InvalidInput("input basis must be a square matrix on the input space");
  const WindowCache cache(seq, w);

  ExtractionResult out;
  std::vector<Index> subseq = w;
  const auto unit = [&](Index i, Index j) {
    return Cmat(basis.col(i) * basis.col(j).adjoint());
  };
  const auto image = [&](Index i, Index j) {
    return [&, i, j](Index n) { return cache.at(n).apply_matrix(unit(i, j)); };
  };

  // Nested tail filtering over the matrix units, lexicographic in (i, j).
  for (Index i = 0; i < d_in && out.status.empty(); ++i)
    for (Index j = i; j < d_in; ++j) {
      const LimitEstimate est = nested_estimate(subseq, image(i, j), tol);
      if (!est.converged) {
        out.offending_i = i;
        out.offending_j = j;
        out.status = "no-limit-detected";
        break;
      }
    }
  if (!out.status.empty()) {
    out.subsequence = subseq;
    return out;
  }

  // Re-estimate every unit on the final subsequence and assemble the map.
  std::map<std::pair<Index, Index>, Cmat> limits;
  for (Index i = 0; i < d_in; ++i)
    for (Index j = i; j < d_in; ++j) {
      std::vector<Index> s = subseq;
      const LimitEstimate est = nested_estimate(s, image(i, j), tol);
      if (!est.converged) {
        out.offending_i = i;
        out.offending_j = j;
        out.status = "no-limit-detected";
        out.subsequence = subseq;
        return out;
      }
      out.max_uncertainty = std::max(out.max_uncertainty, est.uncertainty);
      limits[{i, j}] = est.limit;
    }

  // Choi assembly: C = sum_{kl} omega_kl (x) conj(b_k) conj(b_l)^T.
  Cmat choi = Cmat::Zero(d_out * d_in, d_out * d_in);
  for (Index i = 0; i < d_in; ++i)
    for (Index j = i; j < d_in; ++j) {
      const Cmat& om = limits[{i, j}];
      const Cvec bi = basis.col(i).conjugate();
      const Cvec bj = basis.col(j).conjugate();
      choi += kron(om, Cmat(bi * bj.adjoint()));
      if (j > i) choi += kron(Cmat(om.adjoint()), Cmat(bj * bi.adjoint()));
    }
  choi = hermitize(choi);
  Eigen::SelfAdjointEigenSolver<Cmat> neg_probe(choi, Eigen::EigenvaluesOnly);
  const double neg = std::max(0.0, -neg_probe.eigenvalues().minCoeff());
  std::vector<Cmat> kraus = kraus_from_canonical_choi(choi, d_out, d_in, tol.rank);
  Cmat gram = Cmat::Zero(d_in, d_in);
  for (const Cmat& k : kraus) gram += k.adjoint() * k;
  const double excess = lambda_max(gram - Cmat::Identity(d_in, d_in));
  out.assembly_defect = std::max(neg, std::max(0.0, excess));
  if (out.assembly_defect > 1e-6) {
    out.status = "assembled map is not an operation";
    out.subsequence = subseq;
    return out;
  }
  // Renormalize marginally if extrapolation noise pushed past the bound.
  if (excess > 0.0) {
    const double scale = 1.0 / std::sqrt(1.0 + excess + 1e-15);
    for (Cmat& k : kraus) k *= scale;
  }
  const double trace_dev = (gram - Cmat::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
  const OpKind kind = trace_dev <= 1e-7 ? OpKind::channel : OpKind::operation;
  Tolerances loose = tol;
  loose.trace = std::max(tol.trace, 1e-7);
  loose.psd = std::max(tol.psd, 1e-7);
  if (kind == OpKind::channel) {
    // Polish the Kraus list to exact trace preservation.
    const Cmat fix = pinv_sqrt(PositiveOperator(gram, loose), tol.supp);
    for (Cmat& k : kraus) k = k * fix;
  }
  out.limit = QuantumOperation(std::move(kraus), kind, loose);
  out.subsequence = subseq;
  out.success = true;
  out.status = "ok";
  return out;
}

DominatedLimitReport dominated_limit_check(
    const ChannelSequence& seq, const std::function<State(Index)>& rho_n,
    const State& rho0, const PositiveOperator& sigma0,
    const std::vector<Index>& window, const Tolerances& tol) {
  const std::vector<Index> w = checked_window(window);
  if (!rho0.faithful(tol.supp))
    throw PreconditionViolated("rho0 must be faithful");
  DominatedLimitReport out;

  std::vector<Cmat> inputs, outputs;
  inputs.reserve(w.size());
  outputs.reserve(w.size());
  for (Index n : w) {
    const State rn = rho_n(n);
    inputs.push_back(rn.matrix());
    outputs.push_back(seq.at(n).apply_matrix(rn.matrix()));
  }
  out.input_terminal = trace_norm(inputs.back() - rho0.matrix());
  out.output_terminal = trace_norm(outputs.back() - sigma0.matrix());

  const LimitEstimate in_est = cluster_and_estimate(w, inputs, tol);
  const LimitEstimate out_est = cluster_and_estimate(w, outputs, tol);
  const bool inputs_ok =
      in_est.converged && trace_norm(in_est.limit - rho0.matrix()) <= tol.conv;
  const bool outputs_ok =
      out_est.converged && trace_norm(out_est.limit - sigma0.matrix()) <= tol.conv;
  out.hypotheses_ok = inputs_ok && outputs_ok;
  if (!out.hypotheses_ok) {
    out.status = "precondition-violated: hypotheses fail on this window";
    return out;
  }

  out.extraction = extract_limit_point(seq, w, Cmat(), tol);
  if (!out.extraction.success) {
    out.status = "contradiction: hypotheses hold but extraction failed";
    return out;
  }
  out.limit_residual =
      trace_norm(out.extraction.limit->apply_matrix(rho0.matrix()) - sigma0.matrix());
  Index worst_count = 0;
  for (Index n : w) worst_count = std::max(worst_count, seq.at(n).kraus_count());
  const bool rank_ok = out.extraction.limit->kraus_count() <= worst_count;
  out.passed = out.limit_residual <= tol.conv && rank_ok;
  out.status = out.passed ? "ok" : "limit does not reproduce the target output";
  return out;
}

DominationReport domination_limit_check(const ChannelSequence& psi_seq,
                                        const ChannelSequence& phi_seq,
                                        const State& sigma, double c,
                                        const std::vector<Index>& window,
                                        const Tolerances& tol) {
  if (c <= 0.0) throw InvalidInput("domination constant must be positive");
  const std::vector<Index> w = checked_window(window);
  DominationReport out;
  double worst = 0.0;
  for (Index n : w) {
    const Cmat diff = phi_seq.at(n).apply_matrix(sigma.matrix()) -
                      c * psi_seq.at(n).apply_matrix(sigma.matrix());
    worst = std::min(worst, lambda_min(diff));
  }
  out.worst_violation = -worst;
  out.domination_ok = out.worst_violation <= tol.psd + 1e-12;
  if (!out.domination_ok) {
    out.status = "precondition-violated: domination fails on this window";
    return out;
  }
  out.phi_extraction = extract_limit_point(phi_seq, w, Cmat(), tol);
  if (!out.phi_extraction.success) {
    out.status = "precondition-violated: dominating sequence has no limit here";
    return out;
  }
  out.psi_extraction = extract_limit_point(psi_seq, w, Cmat(), tol);
  if (!out.psi_extraction.success) {
    out.status = "contradiction: domination holds but extraction failed";
    return out;
  }
  const Cmat diff0 =
      out.phi_extraction.limit->apply_matrix(sigma.matrix()) -
      c * out.psi_extraction.limit->apply_matrix(sigma.matrix());
  out.limit_violation = std::max(0.0, -lambda_min(diff0));
  out.passed = out.limit_violation <= 1e-8;
  out.status = out.passed ? "ok" : "limit violates the domination bound";
  return out;
}

KrausExtractionResult extract_kraus_subsequence(const ChannelSequence& seq,
                                                const std::vector<Index>& window,
                                                Index max_kraus,
                                                const Tolerances& tol) {
  const std::vector<Index> w = checked_window(window);
  const WindowCache cache(seq, w);
  for (Index n : w)
    if (cache.at(n).kraus_count() > max_kraus)
      throw Unsupported("Kraus count exceeds the declared bound at index " +
                        std::to_string(n));
  const Index d_in = seq.dim_in();
  const Index d_out = seq.dim_out();
  const Cmat sigma = default_faithful_state(d_in).matrix();

  KrausExtractionResult out;
  // Phase gauge: align every slot against its value at the window end.
  std::map<std::pair<Index, Index>, Cmat> aligned;  // (slot, n) -> operator
  for (Index slot = 0; slot < max_kraus; ++slot) {
    const auto at = [&](Index n) -> Cmat {
      const auto& ks = cache.at(n).kraus();
      if (slot < static_cast<Index>(ks.size())) return ks[static_cast<size_t>(slot)];
      return Cmat::Zero(d_out, d_in);
    };
    const Cmat anchor = at(w.back());
    for (Index n : w) {
      const Cmat v = at(n);
      const cplx ov = (anchor.adjoint() * v * sigma).trace();
      const cplx phase = std::abs(ov) > 1e-12 ? cplx(std::conj(ov) / std::abs(ov)) : cplx(1.0);
      aligned[{slot, n}] = phase * v;
    }
  }

  std::vector<Index> subseq = w;
  for (Index slot = 0; slot < max_kraus; ++slot) {
    const LimitEstimate est = nested_estimate(
        subseq, [&](Index n) { return aligned[{slot, n}]; }, tol);
    if (!est.converged) {
      out.offending_kraus = slot;
      out.status = "no-limit-detected";
      out.subsequence = subseq;
      return out;
    }
  }
  out.kraus_limits.clear();
  for (Index slot = 0; slot < max_kraus; ++slot) {
    std::vector<Index> s = subseq;
    const LimitEstimate est = nested_estimate(
        s, [&](Index n) { return aligned[{slot, n}]; }, tol);
    if (!est.converged) {
      out.offending_kraus = slot;
      out.status = "no-limit-detected";
      out.subsequence = subseq;
      return out;
    }
    out.max_uncertainty = std::max(out.max_uncertainty, est.uncertainty);
    if (est.limit.norm() > 1e-9) out.kraus_limits.push_back(est.limit);
  }
  if (out.kraus_limits.empty()) out.kraus_limits.push_back(Cmat::Zero(d_out, d_in));

  Tolerances loose = tol;
  loose.psd = std::max(tol.psd, 1e-7);
  loose.trace = std::max(tol.trace, 1e-7);
  std::vector<Cmat> ks = out.kraus_limits;
  Cmat gram = Cmat::Zero(d_in, d_in);
  for (const Cmat& k : ks) gram += k.adjoint() * k;
  const double trace_dev = (gram - Cmat::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
  const OpKind kind = trace_dev <= 1e-7 ? OpKind::channel : OpKind::operation;
  out.assembled = QuantumOperation(ks, kind, loose);

  const ExtractionResult map_limit = extract_limit_point(seq, w, Cmat(), tol);
  if (!map_limit.success) {
    out.status = "map-level extraction failed";
    out.subsequence = subseq;
    return out;
  }
  out.reconstruction_residual = strong_distance(*out.assembled, *map_limit.limit);
  out.subsequence = subseq;
  out.success = out.reconstruction_residual <= std::max(tol.roundtrip, 10 * out.max_uncertainty);
  out.status = out.success ? "ok" : "reassembled map drifts from the extracted limit";
  return out;
}

RankOneAlignment align_rank_one(const ChannelSequence& seq,
                                const QuantumOperation& limit,
                                const std::vector<Index>& window,
                                const Tolerances& tol) {
  const std::vector<Index> w = checked_window(window);
  QuantumOperation lim = limit;
  if (lim.kraus_count() > 1) {
    lim = canonical_form(lim, tol);
    if (lim.kraus_count() > 1)
      throw PreconditionViolated("limit must have a single Kraus operator");
  }
  const Cmat u = lim.kraus().front();
  const Cmat sigma = default_faithful_state(seq.dim_in()).matrix();

  RankOneAlignment out;
  std::vector<Index> alignable;
  std::map<Index, Cmat> aligned;
  for (Index n : w) {
    QuantumOperation el = seq.at(n);
    if (el.kraus_count() > 1) {
      el = canonical_form(el, tol);
      if (el.kraus_count() > 1)
        throw PreconditionViolated("element at index " + std::to_string(n) +
                                   " has rank above one");
    }
    const Cmat v = el.kraus().front();
    const cplx ov = (u.adjoint() * v * sigma).trace();
    if (std::abs(ov) <= 1e-12) continue;  // no overlap, phase undefined
    aligned[n] = cplx(std::conj(ov) / std::abs(ov)) * v;
    alignable.push_back(n);
  }
  if (alignable.size() < 3) {
    out.status = "no-limit-detected: too few alignable indices";
    return out;
  }
  std::vector<Index> subseq = alignable;
  const LimitEstimate est = nested_estimate(
      subseq, [&](Index n) { return aligned.at(n); }, tol);
  out.subsequence = subseq;
  if (!est.converged) {
    out.status = "no-limit-detected";
    out.max_uncertainty = est.uncertainty;
    return out;
  }
  out.aligned_limit = est.limit;
  out.max_uncertainty = est.uncertainty;
  Tolerances loose = tol;
  loose.psd = std::max(tol.psd, 1e-7);
  const QuantumOperation rebuilt({est.limit}, OpKind::operation, loose);
  out.residual = strong_distance(rebuilt, lim);
  out.success = true;
  out.status = "ok";
  return out;
}

OperatorTailProfile operator_family_tail_test(const std::vector<Cmat>& ops,
                                              const Cmat& basis,
                                              const std::vector<double>& weights,
                                              const TruncationLadder& ladder,
                                              const Tolerances& tol) {
  if (ops.empty()) throw InvalidInput("empty operator family");
  const Index d = ops.front().rows();
  for (const Cmat& a : ops)
    if (a.rows() != d || a.cols() != basis.rows())
      throw InvalidInput("family members have mixed shapes");
  if (static_cast<Index>(weights.size()) != basis.cols())
    throw InvalidInput("one weight per basis vector required");
  OperatorTailProfile out;
  out.worst_norm = 0.0;
  for (const Cmat& a : ops)
    out.worst_norm = std::max(out.worst_norm, a.jacobiSvd().singularValues().maxCoeff());
  out.in_unit_ball = out.worst_norm <= 1.0 + tol.psd;
  if (!out.in_unit_ball)
    throw PreconditionViolated("family member has operator norm " +
                               std::to_string(out.worst_norm));
  const Cmat id = Cmat::Identity(ladder.dim(), ladder.dim());
  for (Index m = 0; m < ladder.size(); ++m) {
    const Cmat tail_proj = id - ladder.rung(m).matrix();
    double s = 0.0;
    for (const Cmat& a : ops) {
      double acc = 0.0;
      for (Index i = 0; i < basis.cols(); ++i)
        acc += weights[static_cast<size_t>(i)] *
               (tail_proj * a * basis.col(i)).squaredNorm();
      s = std::max(s, acc);
    }
    double eps = 0.0;
    for (Index i = 0; i < basis.cols(); ++i)
      eps += weights[static_cast<size_t>(i)] *
             (tail_proj * basis.col(i)).squaredNorm();
    out.ranks.push_back(ladder.rung(m).rank());
    out.s.push_back(s);
    out.basis_tail.push_back(eps);
  }
  return out;
}

TwoStepReport two_step_limit_proof(const ChannelSequence& seq,
                                   const QuantumOperation& candidate,
                                   const State& sigma,
                                   const std::vector<Index>& window,
                                   const Tolerances& tol) {
  const std::vector<Index> w = checked_window(window);
  if (candidate.dim_in() != seq.dim_in() || candidate.dim_out() != seq.dim_out())
    throw InvalidInput("candidate dimensions do not match the sequence");
  TwoStepReport out;
  const Cmat target = candidate.apply_matrix(sigma.matrix());
  std::vector<Cmat> outputs;
  for (Index n : w) {
    outputs.push_back(seq.at(n).apply_matrix(sigma.matrix()));
    out.step1_profile.push_back(trace_norm(outputs.back() - target));
  }
  out.step1_terminal = out.step1_profile.back();
  const LimitEstimate est = cluster_and_estimate(w, outputs, tol);
  const bool step1_ok =
      est.converged && trace_norm(est.limit - target) <= tol.conv;
  if (!step1_ok) {
    out.status = "outputs on the reference input do not converge to the candidate's";
    return out;
  }

  // Step two: every limit point reachable on this window must be the
  // candidate. Extract repeatedly on whatever the previous rounds left over.
  std::set<Index> remaining(w.begin(), w.end());
  bool any_success = false;
  bool all_match = true;
  for (int round = 0; round < 4 && remaining.size() >= 6; ++round) {
    const std::vector<Index> idx(remaining.begin(), remaining.end());
    ExtractionResult ex = extract_limit_point(seq, idx, Cmat(), tol);
    if (!ex.success) {
      out.extractions.push_back(std::move(ex));
      break;
    }
    for (Index n : ex.subsequence) remaining.erase(n);
    const double dist = strong_distance(*ex.limit, candidate);
    out.limit_distances.push_back(dist);
    any_success = true;
    if (dist > std::max(tol.conv, 1e-6)) all_match = false;
    out.extractions.push_back(std::move(ex));
  }
  if (!any_success) {
    out.status = "no limit point extracted on this window";
    return out;
  }
  out.passed = all_match;
  out.status = all_match ? "ok" : "a limit point differs from the candidate";
  return out;
}

DiagnosticsReport run_diagnostics(const ChannelSequence& seq,
                                  const std::vector<Index>& window,
                                  std::optional<TruncationLadder> ladder,
                                  std::optional<State> sigma,
                                  const Tolerances& tol) {
  const std::vector<Index> w = checked_window(window);
  const State sig = sigma ? *sigma : default_faithful_state(seq.dim_in());
  TruncationLadder lad = ladder ? *ladder
                                : TruncationLadder::prefixes(
                                      seq.dim_out(), seq.preferred_ladder_ranks());
  DiagnosticsReport rep;
  rep.window = w;
  rep.tol = tol;
  for (Index m = 0; m < lad.size(); ++m) rep.ladder_ranks.push_back(lad.rung(m).rank());
  rep.tail = tail_mass_profile(seq, sig, lad, w, tol);
  rep.ladder = dual_ladder(seq, lad, w, tol);
  rep.extraction = extract_limit_point(seq, w, Cmat(), tol);

  // Direct output-limit evidence on the reference input.
  std::vector<Cmat> outputs;
  for (Index n : w) outputs.push_back(seq.at(n).apply_matrix(sig.matrix()));
  const LimitEstimate direct = cluster_and_estimate(w, outputs, tol);

  ConvergenceVerdict& v = rep.verdict;
  CriterionVerdict gap_c{"dual-ladder-gap", rep.ladder.conclusive,
                         rep.ladder.conclusive && rep.ladder.gap <= tol.gap,
                         rep.ladder.gap, tol.gap};
  double trace_gap = 0.0;
  if (rep.ladder.conclusive) {
    double best = -1e300;
    for (const auto& rung : rep.ladder.rungs)
      best = std::max(best, (rung.limit * sig.matrix()).trace().real());
    trace_gap = (rep.ladder.top * sig.matrix()).trace().real() - best;
  }
  CriterionVerdict trace_c{"dual-ladder-trace", rep.ladder.conclusive,
                           rep.ladder.conclusive && trace_gap <= tol.gap, trace_gap,
                           tol.gap};
  CriterionVerdict tail_c{"tail-mass", true, rep.tail.values.back() <= tol.gap,
                          rep.tail.values.back(), tol.gap};
  CriterionVerdict direct_c{"output-limit", true, direct.converged,
                            direct.uncertainty, tol.cauchy};
  v.criteria = {gap_c, trace_c, tail_c, direct_c};
  v.has_limit_point = rep.extraction.success;
  v.subsequence = rep.extraction.subsequence;
  v.criterion = "none";
  for (const auto& c : v.criteria)
    if (c.evaluated && c.passed) {
      v.criterion = c.name;
      break;
    }
  const bool any_passed = v.criterion != "none";
  if (rep.extraction.success == any_passed)
    v.status = "ok";
  else if (rep.extraction.success)
    v.status = "note: extraction succeeded with no supporting criterion";
  else
    v.status = "note: criteria fired but extraction failed";
  return rep;
}

}  // namespace strongconv
