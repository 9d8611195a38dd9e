#include "strongconv/operator_core.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace strongconv {

EigenSystem eig_desc(const Cmat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Cmat> es(hermitize(hermitian));
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const Index d = hermitian.rows();
  EigenSystem out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Index i = 0; i < d; ++i) {
    out.values(i) = es.eigenvalues()(d - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  return out;
}

PositiveOperator::PositiveOperator(const Cmat& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw InvalidInput("operator must be square and non-empty");
  const double defect = herm_defect(m);
  if (defect > tol.herm)
    throw InvalidInput("Hermiticity defect " + std::to_string(defect) +
                       " exceeds tolerance");
  mat_ = hermitize(m);
  Eigen::SelfAdjointEigenSolver<Cmat> es(mat_, Eigen::EigenvaluesOnly);
  min_eig_ = es.eigenvalues().minCoeff();
  if (min_eig_ < -tol.psd)
    throw InvalidInput("negative eigenvalue " + std::to_string(min_eig_));
  trace_ = mat_.trace().real();
}

Index PositiveOperator::rank(double eps_supp) const {
  Eigen::SelfAdjointEigenSolver<Cmat> es(mat_, Eigen::EigenvaluesOnly);
  return (es.eigenvalues().array() > eps_supp).count();
}

State::State(const Cmat& m, const Tolerances& tol) : op_(m, tol) {
  if (std::abs(op_.trace() - 1.0) > tol.trace)
    throw InvalidInput("state trace deviates from 1 by " +
                       std::to_string(op_.trace() - 1.0));
}

State::State(const PositiveOperator& p, const Tolerances& tol) : op_(p) {
  if (std::abs(op_.trace() - 1.0) > tol.trace)
    throw InvalidInput("state trace deviates from 1 by " +
                       std::to_string(op_.trace() - 1.0));
}

bool State::faithful(double eps_supp) const {
  return op_.min_eigenvalue() > eps_supp;
}

Projector::Projector(const Cmat& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw InvalidInput("projector must be square and non-empty");
  if (herm_defect(m) > tol.herm) throw InvalidInput("projector not Hermitian");
  mat_ = hermitize(m);
  const double idem = (mat_ * mat_ - mat_).cwiseAbs().maxCoeff();
  if (idem > 1e-8)
    throw InvalidInput("projector not idempotent, defect " + std::to_string(idem));
  rank_ = static_cast<Index>(std::llround(mat_.trace().real()));
}

Projector Projector::from_basis(const Cmat& columns, const Tolerances& tol) {
  if (columns.cols() == 0 || columns.rows() < columns.cols())
    throw InvalidInput("basis must have at most dim orthonormal columns");
  const Cmat gram = columns.adjoint() * columns;
  if ((gram - Cmat::Identity(columns.cols(), columns.cols())).cwiseAbs().maxCoeff() > 1e-8)
    throw InvalidInput("basis columns not orthonormal");
  return Projector(columns * columns.adjoint(), tol);
}

Projector Projector::prefix(Index d, Index r) {
  if (r < 0 || r > d) throw InvalidInput("prefix rank out of range");
  Cmat p = Cmat::Zero(d, d);
  for (Index i = 0; i < r; ++i) p(i, i) = 1.0;
  Projector out;
  out.mat_ = std::move(p);
  out.rank_ = r;
  return out;
}

TruncationLadder::TruncationLadder(std::vector<Projector> rungs, const Tolerances& tol)
    : rungs_(std::move(rungs)) {
  if (rungs_.empty()) throw InvalidInput("ladder needs at least one rung");
  const Index d = rungs_.front().dim();
  for (size_t m = 0; m < rungs_.size(); ++m) {
    if (rungs_[m].dim() != d) throw InvalidInput("ladder rungs have mixed dimensions");
    if (m + 1 < rungs_.size()) {
      if (rungs_[m].rank() >= rungs_[m + 1].rank())
        throw InvalidInput("ladder ranks must be strictly increasing");
      const Cmat prod = rungs_[m + 1].matrix() * rungs_[m].matrix();
      if ((prod - rungs_[m].matrix()).cwiseAbs().maxCoeff() > 1e-8)
        throw InvalidInput("ladder rungs are not nested");
    }
  }
  (void)tol;
}

TruncationLadder TruncationLadder::prefixes(Index d, const std::vector<Index>& ranks) {
  std::vector<Projector> rungs;
  rungs.reserve(ranks.size());
  for (Index r : ranks) rungs.push_back(Projector::prefix(d, r));
  return TruncationLadder(std::move(rungs));
}

TruncationLadder TruncationLadder::from_basis(const Cmat& basis,
                                              const std::vector<Index>& ranks,
                                              const Tolerances& tol) {
  std::vector<Projector> rungs;
  rungs.reserve(ranks.size());
  for (Index r : ranks) {
    if (r <= 0 || r > basis.cols()) throw InvalidInput("ladder rank out of range");
    rungs.push_back(Projector::from_basis(basis.leftCols(r), tol));
  }
  return TruncationLadder(std::move(rungs), tol);
}

double trace_norm(const Cmat& m) {
  return m.jacobiSvd().singularValues().sum();
}

double fidelity(const PositiveOperator& rho, const PositiveOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw InvalidInput("fidelity needs equal dimensions");
  return trace_norm(sqrt_psd(rho) * sqrt_psd(sigma));
}

Cmat partial_trace(const Cmat& m, Index dim_x, Index dim_y, bool keep_first) {
  if (m.rows() != dim_x * dim_y || m.cols() != dim_x * dim_y)
    throw InvalidInput("operator size does not match factor dimensions");
  if (keep_first) {
    Cmat out = Cmat::Zero(dim_x, dim_x);
    for (Index x = 0; x < dim_x; ++x)
      for (Index xp = 0; xp < dim_x; ++xp)
        for (Index y = 0; y < dim_y; ++y)
          out(x, xp) += m(x * dim_y + y, xp * dim_y + y);
    return out;
  }
  Cmat out = Cmat::Zero(dim_y, dim_y);
  for (Index y = 0; y < dim_y; ++y)
    for (Index yp = 0; yp < dim_y; ++yp)
      for (Index x = 0; x < dim_x; ++x)
        out(y, yp) += m(x * dim_y + y, x * dim_y + yp);
  return out;
}

Cmat partial_trace_multi(const Cmat& m, const std::vector<Index>& dims,
                         const std::vector<bool>& keep) {
  if (dims.size() != keep.size()) throw InvalidInput("dims/keep size mismatch");
  Index total = 1;
  for (Index d : dims) total *= d;
  if (m.rows() != total || m.cols() != total)
    throw InvalidInput("operator size does not match factor dimensions");
  // Fold factors left to right, tracing out the ones not kept.
  Cmat cur = m;
  Index left_kept = 1;  // product of kept dims already to the left
  Index remaining = total;
  for (size_t i = 0; i < dims.size(); ++i) {
    const Index d = dims[i];
    remaining /= d;
    if (keep[i]) {
      left_kept *= d;
      continue;
    }
    // cur lives on (left_kept * d * remaining); trace out the middle factor.
    const Index rows = left_kept * remaining;
    Cmat out = Cmat::Zero(rows, rows);
    for (Index a = 0; a < left_kept; ++a)
      for (Index ap = 0; ap < left_kept; ++ap)
        for (Index b = 0; b < remaining; ++b)
          for (Index bp = 0; bp < remaining; ++bp) {
            cplx acc = 0.0;
            for (Index k = 0; k < d; ++k)
              acc += cur((a * d + k) * remaining + b, (ap * d + k) * remaining + bp);
            out(a * remaining + b, ap * remaining + bp) = acc;
          }
    cur = std::move(out);
  }
  return cur;
}

Purification purify(const State& sigma, Index dim_R, const Tolerances& tol) {
  const EigenSystem es = eig_desc(sigma.matrix());
  const Index d = sigma.dim();
  Index rank = 0;
  for (Index i = 0; i < d; ++i)
    if (es.values(i) > tol.supp) ++rank;
  if (dim_R < rank)
    throw InvalidInput("reference dimension " + std::to_string(dim_R) +
                       " below state rank " + std::to_string(rank));
  Cvec v = Cvec::Zero(d * dim_R);
  for (Index i = 0; i < std::min(rank, dim_R); ++i) {
    const double c = std::sqrt(std::max(es.values(i), 0.0));
    for (Index a = 0; a < d; ++a) v(a * dim_R + i) += c * es.vectors(a, i);
  }
  v.normalize();
  const Cmat dens = v * v.adjoint();
  Purification out{
      v,
      State(partial_trace(dens, d, dim_R, true), tol),
      PositiveOperator(partial_trace(dens, d, dim_R, false), tol),
      {},
      es.vectors,
      d,
      dim_R};
  out.spectrum.resize(static_cast<size_t>(d));
  for (Index i = 0; i < d; ++i) out.spectrum[static_cast<size_t>(i)] = es.values(i);
  return out;
}

Cmat sqrt_psd(const PositiveOperator& p, double eps_supp) {
  const EigenSystem es = eig_desc(p.matrix());
  Rvec vals = es.values;
  for (Index i = 0; i < vals.size(); ++i)
    vals(i) = vals(i) > eps_supp ? std::sqrt(vals(i)) : 0.0;
  return es.vectors * vals.asDiagonal() * es.vectors.adjoint();
}

Cmat pinv_sqrt(const PositiveOperator& p, double eps_supp) {
  const EigenSystem es = eig_desc(p.matrix());
  Rvec vals = es.values;
  for (Index i = 0; i < vals.size(); ++i)
    vals(i) = vals(i) > eps_supp ? 1.0 / std::sqrt(vals(i)) : 0.0;
  return es.vectors * vals.asDiagonal() * es.vectors.adjoint();
}

Projector support_projector(const PositiveOperator& p, double eps_supp) {
  const EigenSystem es = eig_desc(p.matrix());
  Index rank = 0;
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > eps_supp) ++rank;
  if (rank == 0) return Projector(Cmat::Zero(p.dim(), p.dim()));
  return Projector::from_basis(es.vectors.leftCols(rank));
}

State default_faithful_state(Index d) {
  if (d <= 0) throw InvalidInput("dimension must be positive");
  Cmat m = Cmat::Zero(d, d);
  const double norm = 1.0 - std::ldexp(1.0, -static_cast<int>(d));
  for (Index i = 0; i < d; ++i)
    m(i, i) = std::ldexp(1.0, -static_cast<int>(i) - 1) / norm;
  return State(m);
}

State normalized(const PositiveOperator& p) {
  if (p.trace() <= 0.0) throw InvalidInput("cannot normalize a trace-zero operator");
  return State(Cmat(p.matrix() / p.trace()));
}

}  // namespace strongconv
