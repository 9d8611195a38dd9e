#include "strongconv/choi_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "strongconv/random.hpp"

namespace strongconv {

namespace {

Cmat apply_choi(const Cmat& c, const Cmat& x, Index dout, Index din) {
  Cmat out(dout, dout);
  for (Index b = 0; b < dout; ++b)
    for (Index bp = 0; bp < dout; ++bp)
      out(b, bp) = c.block(b * din, bp * din, din, din).cwiseProduct(x).sum();
  return out;
}

double objective(const Cmat& c, const ChoiFitProblem& p) {
  double f = 0.0;
  for (size_t s = 0; s < p.inputs.size(); ++s)
    f += (apply_choi(c, p.inputs[s], p.dim_out, p.dim_in) - p.targets[s])
             .squaredNorm();
  return f;
}

Cmat gradient(const Cmat& c, const ChoiFitProblem& p) {
  Cmat g = Cmat::Zero(c.rows(), c.cols());
  for (size_t s = 0; s < p.inputs.size(); ++s) {
    const Cmat e = apply_choi(c, p.inputs[s], p.dim_out, p.dim_in) - p.targets[s];
    g += 2.0 * kron(e, Cmat(p.inputs[s].conjugate()));
  }
  return hermitize(g);
}

Cmat proj_psd(const Cmat& m) {
  const EigenSystem es = eig_desc(hermitize(m));
  Cmat out = Cmat::Zero(m.rows(), m.cols());
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > 0.0)
      out += es.values(i) * es.vectors.col(i) * es.vectors.col(i).adjoint();
  return out;
}

Cmat proj_tp(const Cmat& m, Index dout, Index din) {
  const Cmat marg = partial_trace(m, dout, din, false);
  const Cmat id_out = Cmat::Identity(dout, dout);
  const Cmat id_in = Cmat::Identity(din, din);
  return m + kron(id_out, Cmat(id_in - marg)) / static_cast<double>(dout);
}

// Dykstra alternation onto {PSD} intersect {input marginal = identity}.
Cmat proj_feasible(const Cmat& m, Index dout, Index din) {
  Cmat x = hermitize(m);
  Cmat p = Cmat::Zero(x.rows(), x.cols());
  Cmat q = Cmat::Zero(x.rows(), x.cols());
  for (int iter = 0; iter < 60; ++iter) {
    const Cmat y = proj_psd(x + p);
    p = x + p - y;
    const Cmat xn = proj_tp(y + q, dout, din);
    q = y + q - xn;
    const double change = (xn - x).norm();
    x = xn;
    if (change < 1e-13) break;
  }
  return x;
}

double real_inner(const Cmat& a, const Cmat& b) {
  return a.conjugate().cwiseProduct(b).sum().real();
}

struct RunResult {
  Cmat c;
  double f = 0.0;
  int iters = 0;
  bool stalled = false;  // stopped by patience or floor, not the cap
};

RunResult run_fista(const Cmat& c0, const ChoiFitProblem& p,
                    const FitOptions& opts) {
  const Index dout = p.dim_out, din = p.dim_in;
  double lipschitz = 1e-12;
  for (const Cmat& x : p.inputs) lipschitz += 2.0 * x.squaredNorm();
  double step = 1.0 / lipschitz;

  Cmat c = proj_feasible(c0, dout, din);
  Cmat y = c;
  double t = 1.0;
  RunResult best{c, objective(c, p), 0, false};
  int since_best = 0;
  for (int k = 0; k < opts.max_iters; ++k) {
    best.iters = k + 1;
    const Cmat g = gradient(y, p);
    const double fy = objective(y, p);
    Cmat cand;
    double fc = 0.0;
    for (;;) {
      cand = proj_feasible(y - step * g, dout, din);
      fc = objective(cand, p);
      const Cmat d = cand - y;
      if (fc <= fy + real_inner(g, d) + d.squaredNorm() / (2.0 * step) + 1e-18)
        break;
      step *= 0.5;
      if (step < 1e-18) break;
    }
    if (fc > objective(c, p)) {
      // Momentum overshoot: restart the acceleration from the last iterate.
      y = c;
      t = 1.0;
      ++since_best;
      if (since_best >= opts.patience) {
        best.stalled = true;
        break;
      }
      continue;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = cand + ((t - 1.0) / tn) * (cand - c);
    t = tn;
    c = cand;
    step *= 1.1;
    if (fc < best.f - std::max(1e-18, 1e-12 * best.f)) {
      best.f = fc;
      best.c = c;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (best.f <= opts.objective_floor || since_best >= opts.patience) {
      best.stalled = true;
      break;
    }
  }
  return best;
}

// Dykstra over {PSD}, {TP}, and the data-consistency affine set; only called
// when the objective is already near zero, to tighten an (almost) feasible
// instance toward an exact solution.
Cmat polish(const Cmat& c0, const ChoiFitProblem& p) {
  const Index dout = p.dim_out, din = p.dim_in;
  const Index dim = dout * din;
  const Index rows = static_cast<Index>(p.inputs.size()) * dout * dout;
  Cmat a(rows, dim * dim);
  Cvec rhs(rows);
  Index r = 0;
  for (size_t s = 0; s < p.inputs.size(); ++s) {
    for (Index b = 0; b < dout; ++b)
      for (Index bp = 0; bp < dout; ++bp) {
        a.row(r).setZero();
        for (Index i = 0; i < din; ++i)
          for (Index j = 0; j < din; ++j)
            a(r, (b * din + i) * dim + (bp * din + j)) = p.inputs[s](i, j);
        rhs(r) = p.targets[s](b, bp);
        ++r;
      }
  }
  Eigen::CompleteOrthogonalDecomposition<Cmat> cod(a);
  const auto proj_data = [&](const Cmat& m) {
    Cvec v(dim * dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) v(i * dim + j) = m(i, j);
    const Cvec corr = cod.solve(a * v - rhs);
    Cmat out(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) out(i, j) = v(i * dim + j) - corr(i * dim + j);
    return hermitize(out);
  };

  Cmat x = hermitize(c0);
  Cmat p1 = Cmat::Zero(dim, dim), p2 = p1, p3 = p1;
  for (int iter = 0; iter < 300; ++iter) {
    const Cmat y1 = proj_psd(x + p1);
    p1 = x + p1 - y1;
    const Cmat y2 = proj_tp(y1 + p2, dout, din);
    p2 = y1 + p2 - y2;
    const Cmat y3 = proj_data(y2 + p3);
    p3 = y2 + p3 - y3;
    const double change = (y3 - x).norm();
    x = y3;
    if (change < 1e-14) break;
  }
  return proj_feasible(x, dout, din);
}

}  // namespace

FitResult fit_channel_choi(const ChoiFitProblem& problem, const FitOptions& opts,
                           const Tolerances& tol) {
  if (problem.dim_in < 1 || problem.dim_out < 1)
    throw InvalidInput("fit needs positive dimensions");
  if (problem.inputs.empty() || problem.inputs.size() != problem.targets.size())
    throw InvalidInput("fit needs matching input/target lists");
  for (const Cmat& x : problem.inputs)
    if (x.rows() != problem.dim_in || x.cols() != problem.dim_in)
      throw InvalidInput("fit input has wrong shape");
  for (const Cmat& y : problem.targets)
    if (y.rows() != problem.dim_out || y.cols() != problem.dim_out)
      throw InvalidInput("fit target has wrong shape");

  const Index din = problem.dim_in, dout = problem.dim_out;
  Rng rng(opts.seed);
  RunResult best;
  best.f = std::numeric_limits<double>::infinity();
  int best_restart = -1;
  const Index kc_min = (din + dout - 1) / dout;  // smallest Kraus count with an isometry
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    Cmat c0;
    if (r == 0 && opts.warm_start) {
      c0 = *opts.warm_start;
    } else if (r == 0) {
      c0 = kron(Cmat(Cmat::Identity(dout, dout) / static_cast<double>(dout)),
                Cmat(Cmat::Identity(din, din)));
    } else {
      const Index spread = din * dout - kc_min + 1;
      const Index kc = kc_min + static_cast<Index>((r - 1) % spread);
      c0 = canonical_choi(random_channel(rng, din, dout, kc));
    }
    const RunResult run = run_fista(c0, problem, opts);
    if (run.f < best.f) {
      best = run;
      best_restart = r;
    }
    if (best.f <= opts.objective_floor) break;
  }

  if (opts.feasibility_polish && best.f <= 1e-10) {
    const Cmat polished = polish(best.c, problem);
    const double fp = objective(polished, problem);
    if (fp < best.f) {
      best.c = polished;
      best.f = fp;
    }
  }

  // Assemble the fitted channel and re-measure everything on it.
  std::vector<Cmat> kraus = kraus_from_canonical_choi(best.c, dout, din, 1e-12);
  Cmat gram = Cmat::Zero(din, din);
  for (const Cmat& k : kraus) gram += k.adjoint() * k;
  Tolerances loose = tol;
  loose.psd = std::max(tol.psd, 1e-7);
  loose.trace = std::max(tol.trace, 1e-7);
  const Cmat fix = pinv_sqrt(PositiveOperator(gram, loose), tol.supp);
  for (Cmat& k : kraus) k = k * fix;
  Cmat gram2 = Cmat::Zero(din, din);
  for (const Cmat& k : kraus) gram2 += k.adjoint() * k;
  const double tp_dev = (gram2 - Cmat::Identity(din, din)).cwiseAbs().maxCoeff();
  const OpKind kind = tp_dev <= 1e-7 ? OpKind::channel : OpKind::operation;
  QuantumOperation fitted(std::move(kraus), kind, loose);
  const Cmat choi = canonical_choi(fitted);
  const double f_final = objective(choi, problem);

  FitResult out{std::move(fitted), choi,          f_final,
                std::sqrt(f_final), best.iters,   best.stalled,
                best_restart};
  return out;
}

}  // namespace strongconv
