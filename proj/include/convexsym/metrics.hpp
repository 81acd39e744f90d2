#pragma once

#include <variant>

#include "convexsym/body.hpp"

namespace convexsym {

namespace detail {

/// Wolfe's min-norm-point algorithm on conv(pts) - x: exact nearest point
/// of a V-polytope, finite termination, corral size <= d+1.
inline Vector nearest_point_in_hull(const std::vector<Vector>& pts, const Vector& x) {
  const int d = int(x.size());
  double scale = 1.0;
  for (const auto& p : pts) scale = std::max(scale, (p - x).norm());
  const double eps = 1e-13 * scale * scale;

  auto min_norm_affine = [&](const std::vector<int>& s) -> Vector {
    // coefficients of the min-norm point of aff{pts[s] - x}
    const int m = int(s.size());
    Matrix g(m + 1, m + 1);
    Vector rhs = Vector::Zero(m + 1);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g(i, j) = (pts[s[i]] - x).dot(pts[s[j]] - x);
    for (int i = 0; i < m; ++i) { g(m, i) = 1.0; g(i, m) = 1.0; }
    g(m, m) = 0.0;
    rhs[m] = 1.0;
    Vector sol = g.completeOrthogonalDecomposition().solve(rhs);
    return sol.head(m);
  };

  int init = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pts.size(); ++i) {
    double n = (pts[i] - x).squaredNorm();
    if (n < best) { best = n; init = int(i); }
  }
  std::vector<int> corral = {init};
  Vector lambda = Vector::Ones(1);
  Vector w = pts[init] - x;

  for (int iter = 0; iter < 200; ++iter) {
    // linear minimization step
    int q = 0;
    double qv = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i) {
      double v = w.dot(pts[i] - x);
      if (v < qv) { qv = v; q = int(i); }
    }
    if (w.squaredNorm() - qv <= eps) break; // optimal
    bool present = false;
    for (int s : corral) present |= (s == q);
    if (!present) {
      corral.push_back(q);
      Vector nl(lambda.size() + 1);
      nl.head(lambda.size()) = lambda;
      nl[lambda.size()] = 0.0;
      lambda = nl;
    }
    // inner loop: pull towards the affine minimizer, dropping blockers
    for (int inner = 0; inner < 64; ++inner) {
      Vector mu = min_norm_affine(corral);
      if (mu.minCoeff() >= -1e-12) { lambda = mu; break; }
      double theta = 1.0;
      for (int i = 0; i < mu.size(); ++i)
        if (mu[i] < lambda[i]) theta = std::min(theta, lambda[i] / (lambda[i] - mu[i]));
      lambda = lambda + theta * (mu - lambda);
      std::vector<int> keep;
      Vector kept(lambda.size());
      int kn = 0;
      for (int i = 0; i < lambda.size(); ++i) {
        if (lambda[i] > 1e-12) { keep.push_back(corral[i]); kept[kn++] = lambda[i]; }
      }
      corral = keep;
      lambda = kept.head(kn);
      if (corral.empty()) { corral = {q}; lambda = Vector::Ones(1); break; }
    }
    w.setZero();
    for (int i = 0; i < int(corral.size()); ++i) w += lambda[i] * (pts[corral[i]] - x);
  }
  return x + w;
}

} // namespace detail

/// Distance from a point to a convex oracle body: max over the unit ball of
/// <x,u> - h(u), a concave maximization (0 when x is inside).
inline double distance_to_oracle(const ConvexBody& k, const Vector& x, int coarse = 128) {
  auto gap = [&](const Vector& u) { return x.dot(u) - k.support(u).value; };
  double best = -std::numeric_limits<double>::infinity();
  Vector bu = unit_directions(k.dim(), 1)[0];
  for (const auto& u : unit_directions(k.dim(), coarse)) {
    double v = gap(u);
    if (v > best) { best = v; bu = u; }
  }
  auto [u_ref, neg] = minimize_on_sphere([&](const Vector& u) { return -gap(u); }, bu, 0.2);
  best = std::max(best, -neg);
  return std::max(0.0, best);
}

/// A nonempty closed subset of E^d with an evaluable distance function:
/// a convex body, a flat, or a finite point set.
class ClosedSetHandle {
 public:
  static ClosedSetHandle body(ConvexBody k) {
    int d = k.dim();
    return ClosedSetHandle(SetVariant(std::move(k)), d);
  }
  static ClosedSetHandle flat_set(Flat f) {
    int d = f.ambient_dim();
    return ClosedSetHandle(SetVariant(std::move(f)), d);
  }
  static ClosedSetHandle point_set(std::vector<Vector> pts) {
    if (pts.empty()) throw std::invalid_argument("point_set: empty");
    int d = int(pts[0].size());
    return ClosedSetHandle(SetVariant(std::move(pts)), d);
  }

  int dim() const { return dim_; }
  bool is_body() const { return std::holds_alternative<ConvexBody>(set_); }
  bool is_flat() const { return std::holds_alternative<Flat>(set_); }
  bool is_points() const { return std::holds_alternative<std::vector<Vector>>(set_); }
  const ConvexBody& as_body() const { return std::get<ConvexBody>(set_); }
  const Flat& as_flat() const { return std::get<Flat>(set_); }
  const std::vector<Vector>& as_points() const { return std::get<std::vector<Vector>>(set_); }

  bool bounded() const { return !is_flat() || as_flat().dim() == 0; }

  double distance_to(const Vector& x) const {
    if (is_flat()) return as_flat().distance(x);
    if (is_points()) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : as_points()) best = std::min(best, (p - x).norm());
      return best;
    }
    const ConvexBody& k = as_body();
    if (k.is_polytope()) return (detail::nearest_point_in_hull(k.vertices(), x) - x).norm();
    return distance_to_oracle(k, x);
  }

  /// Anchor points fed to metric grids so suprema on/near the sets are hit.
  std::vector<Vector> feature_points() const {
    if (is_points()) return as_points();
    if (is_flat()) return {as_flat().base()};
    const ConvexBody& k = as_body();
    if (k.is_polytope()) return k.vertices();
    std::vector<Vector> out;
    for (const auto& u : unit_directions(k.dim(), 16)) out.push_back(k.support(u).point);
    return out;
  }

 private:
  using SetVariant = std::variant<ConvexBody, Flat, std::vector<Vector>>;
  ClosedSetHandle(SetVariant v, int dim) : dim_(dim), set_(std::move(v)) {}
  int dim_ = 0;
  SetVariant set_;
};

struct MetricValue {
  double value = 0.0;
  double error_bar = 0.0;
  Vector argmax; // point attaining (or near) the supremum
};

/// Hausdorff distance between bounded sets, via the distance-function
/// identity d_H = sup_x |d(x,M) - d(x,N)|. The directed sup of the convex
/// function d(.,other) sits at an extreme point, so polytope and point-set
/// sides are exact (Wolfe nearest-point per vertex); oracle sides refine
/// over support points. Body/body pairs additionally use
/// d_H = sup_u |h1 - h2|. Errors out on unbounded inputs.
inline MetricValue hausdorff(const ClosedSetHandle& m, const ClosedSetHandle& n,
                             const Context& ctx = {}) {
  if (m.dim() != n.dim()) throw std::invalid_argument("hausdorff: dimension mismatch");
  if (!m.bounded() || !n.bounded())
    throw std::invalid_argument("hausdorff: unbounded input; use busemann_distance");
  const int d = m.dim();
  MetricValue out;
  out.argmax = Vector::Zero(d);

  auto track = [&](double v, const Vector& at) {
    if (v > out.value) { out.value = v; out.argmax = at; }
  };

  auto directed = [&](const ClosedSetHandle& a, const ClosedSetHandle& b) {
    if (a.is_points() || a.is_flat() || a.as_body().is_polytope()) {
      for (const auto& p : a.feature_points()) track(b.distance_to(p), p);
      return;
    }
    const ConvexBody& k = a.as_body();
    auto g = [&](const Vector& u) { return b.distance_to(k.support(u).point); };
    Vector bu = unit_directions(d, 1)[0];
    double best = -1.0;
    for (const auto& u : unit_directions(d, 256)) {
      double v = g(u);
      if (v > best) { best = v; bu = u; }
    }
    auto [u_ref, neg] = minimize_on_sphere([&](const Vector& u) { return -g(u); }, bu, 0.15);
    track(std::max(best, -neg), k.support(bu).point);
  };
  directed(m, n);
  directed(n, m);

  // support identity for body/body pairs
  if (m.is_body() && n.is_body()) {
    const auto& k1 = m.as_body();
    const auto& k2 = n.as_body();
    auto gap = [&](const Vector& u) {
      return std::abs(k1.support(u).value - k2.support(u).value);
    };
    Vector bu = unit_directions(d, 1)[0];
    double best = -1.0;
    for (const auto& u : unit_directions(d, ctx.direction_samples(d))) {
      double v = gap(u);
      if (v > best) { best = v; bu = u; }
    }
    auto [u_ref, neg] = minimize_on_sphere([&](const Vector& u) { return -gap(u); }, bu, 0.1);
    best = std::max(best, -neg);
    if (best > out.value) {
      out.value = best;
      out.argmax = k1.support(bu).point;
    }
  }
  out.error_bar = 0.0;
  return out;
}

/// Busemann's weighted distance on nonempty closed sets:
///   delta_p(M,N) = sup_x |d(x,M) - d(x,N)| e^{-|px|},
/// approximated over a radial-shell quasi-uniform grid in B(p,R) seeded
/// with both sets' feature points, refined by Nelder-Mead from the best
/// grid points; the returned bar adds the e^{-R} tail bound.
inline MetricValue busemann_distance(const Vector& p, const ClosedSetHandle& m,
                                     const ClosedSetHandle& n, double cutoff,
                                     const Context& ctx = {}) {
  if (cutoff <= 0) throw std::invalid_argument("busemann_distance: cutoff must be positive");
  const int d = int(p.size());
  auto f = [&](const Vector& x) {
    return std::abs(m.distance_to(x) - n.distance_to(x)) * std::exp(-(x - p).norm());
  };

  struct Best {
    double v;
    Vector x;
  };
  std::vector<Best> top;
  auto push = [&](double v, const Vector& x) {
    top.push_back({v, x});
    std::sort(top.begin(), top.end(), [](const Best& a, const Best& b) { return a.v > b.v; });
    if (top.size() > 8) top.pop_back();
  };

  push(f(p), p);
  for (const auto& q : m.feature_points()) push(f(q), q);
  for (const auto& q : n.feature_points()) push(f(q), q);

  // radial shells, points allocated by shell area
  const long total = std::max<long>(1000, ctx.busemann_grid);
  const int shells = 40;
  std::vector<long> alloc(shells);
  {
    double wsum = 0;
    std::vector<double> w(shells);
    for (int s = 0; s < shells; ++s) {
      double r = cutoff * (s + 0.5) / shells;
      w[s] = std::pow(r, d - 1);
      wsum += w[s];
    }
    for (int s = 0; s < shells; ++s) alloc[s] = std::max<long>(16, long(total * w[s] / wsum));
  }
  for (int s = 0; s < shells; ++s) {
    double r = cutoff * (s + 0.5) / shells;
    for (const auto& u : unit_directions(d, int(alloc[s]))) {
      Vector x = p + r * u;
      push(f(x), x);
    }
  }

  MetricValue out;
  out.value = top.empty() ? 0.0 : top[0].v;
  out.argmax = top.empty() ? p : top[0].x;
  double grid_best = out.value;
  NelderMeadOptions opt;
  opt.max_iter = 500;
  opt.f_tol = 0.0; // run to simplex collapse; f has kinks
  opt.x_tol = 1e-14;
  for (const auto& b : top) {
    auto [x, neg] = nelder_mead([&](const Vector& x) { return -f(x); }, b.x,
                                std::max(1e-3, 0.05 * (b.x - p).norm()), opt);
    if (-neg > out.value) { out.value = -neg; out.argmax = x; }
  }

  // Bar: rigorous e^{-R} tail (|d(x,M)-d(x,N)| <= 2|px| + C beyond the
  // cutoff) plus a local-resolution estimate around the maximizer. The
  // spatial part is an estimate, not a certificate.
  double c0 = std::max(m.distance_to(p), n.distance_to(p));
  double tail = (2.0 * cutoff + c0) * std::exp(-cutoff);
  double rstar = (out.argmax - p).norm();
  int sstar = std::min(shells - 1, int(rstar / cutoff * shells));
  double angular = (d == 2) ? 2.0 * kPi * rstar / double(alloc[sstar])
                            : rstar * std::pow(12.0 / double(alloc[sstar]), 1.0 / (d - 1));
  double spacing = std::max(cutoff / shells, angular);
  double lip = 2.0 + std::max(2.0, c0);
  out.error_bar = tail + std::max(0.0, out.value - grid_best) +
                  0.5 * lip * spacing * std::exp(-std::max(0.0, rstar - spacing));
  return out;
}

struct FlatLimit {
  Flat flat;
  bool converged = false;
};

/// Cauchy detection for a flat sequence under the weighted set metric, and
/// a chordal-mean representative of the tail (principal-angle averaging of
/// the direction projectors, mean anchored base point).
inline FlatLimit flat_sequence_limit(const std::vector<Flat>& seq, double tol,
                                     const Context& ctx = {}) {
  if (seq.empty()) throw std::invalid_argument("flat_sequence_limit: empty");
  const int d = seq[0].ambient_dim();
  const int k = seq[0].dim();
  for (const auto& f : seq)
    if (f.ambient_dim() != d || f.dim() != k)
      throw std::invalid_argument("flat_sequence_limit: mixed dimensions");

  // shared base region: anchor everything at the mean of projections of a
  // common reference point
  Vector ref = Vector::Zero(d);
  for (const auto& f : seq) ref += f.base();
  ref /= double(seq.size());

  const size_t tail = std::max<size_t>(3, seq.size() / 3);
  const size_t start = seq.size() - std::min(seq.size(), tail);

  auto anchor = [&](const Flat& f) { return f.project(ref); };

  bool cauchy = true;
  {
    Context reduced = ctx;
    reduced.busemann_grid = 4096;
    for (size_t i = start; cauchy && i + 1 < seq.size(); ++i)
      for (size_t j = i + 1; cauchy && j < seq.size(); ++j) {
        double dv = busemann_distance(ref, ClosedSetHandle::flat_set(seq[i]),
                                      ClosedSetHandle::flat_set(seq[j]),
                                      ctx.busemann_cutoff, reduced).value;
        if (dv > tol) cauchy = false;
      }
  }

  Matrix pbar = Matrix::Zero(d, d);
  Vector base = Vector::Zero(d);
  size_t cnt = 0;
  for (size_t i = start; i < seq.size(); ++i) {
    pbar += seq[i].basis() * seq[i].basis().transpose();
    base += anchor(seq[i]);
    ++cnt;
  }
  pbar /= double(cnt);
  base /= double(cnt);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(pbar);
  Matrix basis(d, k); // top-k eigenvectors
  for (int j = 0; j < k; ++j) basis.col(j) = eig.eigenvectors().col(d - 1 - j);
  return {Flat(base, basis), cauchy};
}

} // namespace convexsym
