#include "strongconv/limit_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace strongconv {

namespace {

constexpr int kMaxNodes = 7;

// Neville tableau evaluated at x = 0. Returns the top extrapolant.
cplx neville0(const std::vector<double>& xs, const std::vector<cplx>& ys) {
  std::vector<cplx> t = ys;
  const size_t p = xs.size();
  for (size_t m = 1; m < p; ++m)
    for (size_t i = 0; i + m < p; ++i)
      t[i] = (xs[i + m] * t[i] - xs[i] * t[i + 1]) / (xs[i + m] - xs[i]);
  return t[0];
}

double frob(const Cmat& m) { return m.norm(); }

}  // namespace

std::vector<Index> tail_cluster(const std::vector<Index>& indices,
                                const std::vector<Cmat>& values,
                                double radius_rel) {
  if (indices.size() != values.size()) throw InvalidInput("index/value size mismatch");
  if (indices.empty()) return {};
  double scale = 1.0;
  for (const Cmat& v : values) scale = std::max(scale, frob(v));
  const Cmat& anchor = values.back();
  std::vector<Index> kept;
  for (size_t i = 0; i < indices.size(); ++i)
    if (frob(values[i] - anchor) <= radius_rel * scale) kept.push_back(indices[i]);
  return kept;
}

LimitEstimate estimate_limit(const std::vector<Index>& indices,
                             const std::vector<Cmat>& values, double eps_cauchy) {
  if (indices.size() != values.size()) throw InvalidInput("index/value size mismatch");
  LimitEstimate out;
  if (indices.empty()) return out;

  // Constant-tail fast path: if everything agrees to within the tolerance the
  // last value is the limit and no extrapolation is needed. Fewer than three
  // supporting points never certify a limit; a one-point cluster is vacuous.
  double spread = 0.0;
  for (const Cmat& v : values)
    spread = std::max(spread, (v - values.back()).cwiseAbs().maxCoeff());
  if (indices.size() >= 3 && spread <= eps_cauchy) {
    out.converged = true;
    out.limit = values.back();
    out.uncertainty = spread;
    out.nodes = indices;
    return out;
  }
  if (indices.size() < 3) return out;  // drifting with too few points

  // Geometrically spaced nodes from the tail: n_max, n_max/2, ... mapped to
  // the nearest observed index. Falls back to the last few observations when
  // the cluster is too short for geometric spacing.
  std::set<Index> picked;
  const Index n_max = indices.back();
  for (int j = 0; j < kMaxNodes; ++j) {
    const double target = static_cast<double>(n_max) / std::pow(2.0, j);
    if (target < static_cast<double>(indices.front()) - 0.5) break;
    size_t best = 0;
    double best_dist = 1e300;
    for (size_t i = 0; i < indices.size(); ++i) {
      const double d = std::abs(static_cast<double>(indices[i]) - target);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    picked.insert(indices[best]);
  }
  if (picked.size() < 4) {
    picked.clear();
    for (auto it = indices.rbegin(); it != indices.rend() && picked.size() < kMaxNodes;
         ++it)
      picked.insert(*it);
  }

  // Order nodes by increasing 1/n (largest index first).
  std::vector<Index> nodes(picked.begin(), picked.end());
  std::sort(nodes.begin(), nodes.end(), std::greater<Index>());
  std::vector<double> xs;
  std::vector<std::vector<cplx>> series;  // per entry
  const Index rows = values.front().rows();
  const Index cols = values.front().cols();
  series.resize(static_cast<size_t>(rows * cols));
  for (Index n : nodes) {
    const size_t pos =
        std::lower_bound(indices.begin(), indices.end(), n) - indices.begin();
    xs.push_back(1.0 / static_cast<double>(n));
    const Cmat& v = values[pos];
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c)
        series[static_cast<size_t>(r * cols + c)].push_back(v(r, c));
  }

  Cmat limit(rows, cols);
  double err = 0.0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      const std::vector<cplx>& ys = series[static_cast<size_t>(r * cols + c)];
      const cplx full = neville0(xs, ys);
      // Stability check: drop the smallest-index node and compare.
      std::vector<double> xs1(xs.begin(), xs.end() - 1);
      std::vector<cplx> ys1(ys.begin(), ys.end() - 1);
      const cplx reduced = neville0(xs1, ys1);
      limit(r, c) = full;
      err = std::max(err, std::abs(full - reduced));
    }
  out.limit = std::move(limit);
  out.uncertainty = err;
  out.converged = std::isfinite(err) && err <= eps_cauchy;
  out.nodes = std::move(nodes);
  return out;
}

ScalarLimitEstimate estimate_scalar_limit(const std::vector<Index>& indices,
                                          const std::vector<cplx>& values,
                                          double eps_cauchy) {
  std::vector<Cmat> wrapped;
  wrapped.reserve(values.size());
  for (cplx v : values) {
    Cmat m(1, 1);
    m(0, 0) = v;
    wrapped.push_back(std::move(m));
  }
  const LimitEstimate est = estimate_limit(indices, wrapped, eps_cauchy);
  ScalarLimitEstimate out;
  out.converged = est.converged;
  out.uncertainty = est.uncertainty;
  if (est.limit.size() > 0) out.limit = est.limit(0, 0);
  return out;
}

std::vector<Index> dense_indices(Index lo, Index hi) {
  if (lo < 1 || hi < lo) throw InvalidInput("bad index window");
  std::vector<Index> out;
  out.reserve(static_cast<size_t>(hi - lo + 1));
  for (Index n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

std::vector<Index> geometric_indices(Index lo, Index hi, Index max_points) {
  if (lo < 1 || hi < lo || max_points < 2) throw InvalidInput("bad index window");
  if (hi - lo + 1 <= max_points) return dense_indices(lo, hi);
  std::set<Index> out{lo, hi};
  const double ratio = std::pow(static_cast<double>(hi) / static_cast<double>(lo),
                                1.0 / static_cast<double>(max_points - 1));
  double x = static_cast<double>(lo);
  while (out.size() < static_cast<size_t>(max_points) && x < static_cast<double>(hi)) {
    x *= ratio;
    const Index n = std::min<Index>(hi, std::max<Index>(lo, std::llround(x)));
    out.insert(n);
  }
  return std::vector<Index>(out.begin(), out.end());
}

}  // namespace strongconv
