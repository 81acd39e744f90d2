#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "convexsym/isometry.hpp"
#include "convexsym/lp.hpp"

namespace convexsym {

struct SupportEval {
  double value;
  Vector point; // a point of K attaining <x,u> = value
};

/// Convex body: either a polytope held by its extreme points, or a support
/// oracle h(u) -> (value, attaining point). Immutable after construction.
class ConvexBody {
 public:
  enum class Kind { Polytope, Oracle };
  using SupportFn = std::function<SupportEval(const Vector&)>;

  static ConvexBody polytope(std::vector<Vector> points, std::string label = "") {
    if (points.empty()) throw std::invalid_argument("polytope: no points");
    const int d = int(points[0].size());
    for (const auto& p : points)
      if (int(p.size()) != d) throw std::invalid_argument("polytope: mixed dimensions");

    std::vector<Vector> ext = extreme_points(points);
    // full-dimensionality: d+1 affinely independent extreme points
    Matrix diffs(d, int(ext.size()) - 1 > 0 ? int(ext.size()) - 1 : 0);
    for (size_t i = 1; i < ext.size(); ++i) diffs.col(int(i) - 1) = ext[i] - ext[0];
    if (int(orthonormalize(diffs).cols()) != d)
      throw std::invalid_argument("polytope: needs nonempty interior (d+1 affinely independent points)");

    ConvexBody k;
    k.dim_ = d;
    k.kind_ = Kind::Polytope;
    k.vertices_ = std::move(ext);
    k.label_ = std::move(label);
    return k;
  }

  /// Fast path for point sets already known to be extreme (isometric images
  /// of a validated polytope, generator outputs). Skips the LP filter.
  static ConvexBody from_extreme_points(std::vector<Vector> points, std::string label = "") {
    ConvexBody k;
    k.dim_ = int(points.at(0).size());
    k.kind_ = Kind::Polytope;
    k.vertices_ = std::move(points);
    k.label_ = std::move(label);
    return k;
  }

  static ConvexBody oracle(int dim, SupportFn support, bool smooth,
                           std::string label = "", bool validate = true) {
    ConvexBody k;
    k.dim_ = dim;
    k.kind_ = Kind::Oracle;
    k.support_ = std::move(support);
    k.smooth_ = smooth;
    k.label_ = std::move(label);
    if (validate) k.validate_oracle();
    return k;
  }

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  bool is_polytope() const { return kind_ == Kind::Polytope; }
  bool smooth() const { return kind_ == Kind::Oracle && smooth_; }
  const std::string& label() const { return label_; }
  const std::vector<Vector>& vertices() const {
    if (!is_polytope()) throw std::logic_error("vertices(): oracle body");
    return vertices_;
  }

  SupportEval support(const Vector& u) const {
    if (int(u.size()) != dim_) throw std::invalid_argument("support: dimension mismatch");
    if (u.norm() == 0.0) throw std::invalid_argument("support: zero direction");
    if (kind_ == Kind::Polytope) {
      int best = 0;
      double hv = vertices_[0].dot(u);
      for (size_t i = 1; i < vertices_.size(); ++i) {
        double v = vertices_[i].dot(u);
        if (v > hv) { hv = v; best = int(i); }
      }
      return {hv, vertices_[best]};
    }
    return support_(u);
  }

  double support_value(const Vector& u) const { return support(u).value; }

  /// Membership test; exact (LP) for polytopes, support-sampled for oracles.
  bool contains(const Vector& x, double tol, int oracle_dirs = 256) const {
    if (kind_ == Kind::Polytope) return in_convex_hull(vertices_, x, tol);
    for (const auto& u : unit_directions(dim_, oracle_dirs))
      if (x.dot(u) > support_(u).value + tol) return false;
    return true;
  }

 private:
  ConvexBody() = default;

  static std::vector<Vector> extreme_points(const std::vector<Vector>& pts) {
    double scale = 1.0;
    for (const auto& p : pts) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
    // dedup first
    std::vector<Vector> uniq;
    for (const auto& p : pts) {
      bool dup = false;
      for (const auto& q : uniq)
        if ((p - q).lpNorm<Eigen::Infinity>() <= 1e-12 * scale) { dup = true; break; }
      if (!dup) uniq.push_back(p);
    }
    if (uniq.size() <= 2) return uniq;
    std::vector<Vector> ext;
    for (size_t i = 0; i < uniq.size(); ++i) {
      std::vector<Vector> others;
      others.reserve(uniq.size() - 1);
      for (size_t j = 0; j < uniq.size(); ++j)
        if (j != i) others.push_back(uniq[j]);
      if (!in_convex_hull(others, uniq[i], 1e-10)) ext.push_back(uniq[i]);
    }
    return ext;
  }

  void validate_oracle() const {
    auto rng = make_rng(0x0bac1eu, std::uint64_t(dim_));
    double scale = 1.0;
    for (int i = 0; i < 8; ++i) scale = std::max(scale, std::abs(support_(random_unit(rng, dim_)).value));
    for (int i = 0; i < 16; ++i) {
      Vector u = random_unit(rng, dim_);
      Vector v = random_unit(rng, dim_);
      auto eu = support_(u);
      auto ev = support_(v);
      if (std::abs(support_(2.0 * u).value - 2.0 * eu.value) > 1e-7 * scale)
        throw std::invalid_argument("oracle: support not homogeneous");
      if (support_(u + v).value > eu.value + ev.value + 1e-7 * scale)
        throw std::invalid_argument("oracle: support not sublinear");
      if (std::abs(eu.point.dot(u) - eu.value) > 1e-9 * scale)
        throw std::invalid_argument("oracle: attaining point does not attain support value");
    }
  }

  int dim_ = 0;
  Kind kind_ = Kind::Polytope;
  std::vector<Vector> vertices_;
  SupportFn support_;
  bool smooth_ = false;
  std::string label_;
};

/// Image T(K).
inline ConvexBody apply_isometry(const ConvexBody& k, const Isometry& t) {
  if (t.dim() != k.dim()) throw std::invalid_argument("apply_isometry: dimension mismatch");
  if (k.is_polytope()) {
    std::vector<Vector> mapped;
    mapped.reserve(k.vertices().size());
    for (const auto& v : k.vertices()) mapped.push_back(t(v));
    return ConvexBody::from_extreme_points(std::move(mapped), k.label());
  }
  Isometry ti = t; // captured by value; h'(u) = h(A'u) + <b,u>
  ConvexBody inner = k;
  auto fn = [ti, inner](const Vector& u) -> SupportEval {
    Vector w = ti.linear().transpose() * u;
    SupportEval e = inner.support(w);
    return {e.value + ti.shift().dot(u), ti(e.point)};
  };
  return ConvexBody::oracle(k.dim(), fn, k.smooth(), k.label(), /*validate=*/false);
}

struct Ball {
  Vector center;
  double radius = 0.0;
};

namespace detail {

// Smallest ball with all points of `boundary` on its sphere (|boundary| <= d+1).
inline Ball ball_through(const std::vector<Vector>& boundary, int d) {
  Ball b;
  if (boundary.empty()) {
    b.center = Vector::Zero(d);
    b.radius = -1.0; // empty ball: contains nothing
    return b;
  }
  const Vector& p0 = boundary[0];
  const int m = int(boundary.size()) - 1;
  if (m == 0) return {p0, 0.0};
  Matrix q(m, int(p0.size()));
  Vector rhs(m);
  for (int i = 0; i < m; ++i) {
    Vector di = boundary[i + 1] - p0;
    q.row(i) = di.transpose();
    rhs[i] = 0.5 * di.squaredNorm();
  }
  // minimum-norm center offset solving q (c - p0) = rhs; rank-safe
  Vector offset = q.completeOrthogonalDecomposition().solve(rhs);
  Vector center = p0 + offset;
  double radius = 0.0;
  for (const auto& p : boundary) radius = std::max(radius, (center - p).norm());
  return {center, radius};
}

inline bool in_ball(const Ball& b, const Vector& p, double slack) {
  return (p - b.center).norm() <= b.radius + slack;
}

// Welzl's move-to-front recursion over the point list.
inline Ball welzl(std::vector<Vector>& pts, size_t n, std::vector<Vector>& boundary,
                  int d, double slack) {
  if (n == 0 || int(boundary.size()) == d + 1) return ball_through(boundary, d);
  Ball b = welzl(pts, n - 1, boundary, d, slack);
  if (in_ball(b, pts[n - 1], slack)) return b;
  boundary.push_back(pts[n - 1]);
  b = welzl(pts, n - 1, boundary, d, slack);
  boundary.pop_back();
  // move to front
  Vector p = pts[n - 1];
  for (size_t i = n - 1; i > 0; --i) pts[i] = pts[i - 1];
  pts[0] = p;
  return b;
}

} // namespace detail

/// Smallest enclosing ball of a point set (Welzl, randomized order).
inline Ball min_ball_points(const std::vector<Vector>& points, std::uint64_t seed = 42) {
  if (points.empty()) throw std::invalid_argument("min_ball_points: empty");
  const int d = int(points[0].size());
  double scale = 1.0;
  for (const auto& p : points) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
  std::vector<Vector> pts = points;
  auto rng = make_rng(seed, 0x3e1271u);
  for (size_t i = pts.size(); i > 1; --i)
    std::swap(pts[i - 1], pts[rng() % i]);
  std::vector<Vector> boundary;
  return detail::welzl(pts, pts.size(), boundary, d, 1e-12 * scale);
}

/// Minimum enclosing ball. Exact (Welzl) over polytope vertices; support
/// sampling plus farthest-point refinement for oracles.
inline Ball minimum_enclosing_ball(const ConvexBody& k, const Context& ctx = {}) {
  if (k.is_polytope()) return min_ball_points(k.vertices(), ctx.seed);

  const int d = k.dim();
  std::vector<Vector> pts;
  for (const auto& u : unit_directions(d, 64 + 4 * d)) pts.push_back(k.support(u).point);
  Ball b = min_ball_points(pts, ctx.seed);
  for (int round = 0; round < 64; ++round) {
    // farthest point of K from the current center
    auto far_gap = [&](const Vector& u) {
      return -(k.support(u).point - b.center).norm();
    };
    Vector best_u = unit_directions(d, 1)[0];
    double best = -1.0;
    for (const auto& u : unit_directions(d, 256)) {
      double r = (k.support(u).point - b.center).norm();
      if (r > best) { best = r; best_u = u; }
    }
    auto [u_ref, neg] = minimize_on_sphere(far_gap, best_u, 0.15);
    double far = -neg;
    Vector x = k.support(u_ref).point;
    if (far <= b.radius * (1.0 + 1e-11) + 1e-13) break;
    pts.push_back(x);
    b = min_ball_points(pts, ctx.seed);
  }
  return b;
}

struct EqualityResult {
  bool equal = false;
  double residual = 0.0; // worst support / vertex mismatch, absolute
  double scale = 1.0;    // max(1, circumradius)
  Vector witness;        // direction (oracle path) or vertex (polytope path)
};

/// Decides K1 = K2 within tol*scale. Polytope pair: two-sided vertex
/// matching. Otherwise: sup over the context's quasi-uniform direction
/// sample of |h1 - h2|.
inline EqualityResult bodies_equal(const ConvexBody& k1, const ConvexBody& k2,
                                   double tol, const Context& ctx = {}) {
  if (k1.dim() != k2.dim()) throw std::invalid_argument("bodies_equal: dimension mismatch");
  const int d = k1.dim();
  EqualityResult res;

  if (k1.is_polytope() && k2.is_polytope()) {
    double r1 = min_ball_points(k1.vertices(), ctx.seed).radius;
    double r2 = min_ball_points(k2.vertices(), ctx.seed).radius;
    res.scale = std::max(1.0, std::max(r1, r2));
    auto one_sided = [&](const std::vector<Vector>& a, const std::vector<Vector>& b) {
      double worst = 0.0;
      Vector wit = a.empty() ? Vector() : a[0];
      for (const auto& p : a) {
        double nn = std::numeric_limits<double>::infinity();
        for (const auto& q : b) nn = std::min(nn, (p - q).norm());
        if (nn > worst) { worst = nn; wit = p; }
      }
      return std::make_pair(worst, wit);
    };
    auto [w1, wit1] = one_sided(k1.vertices(), k2.vertices());
    auto [w2, wit2] = one_sided(k2.vertices(), k1.vertices());
    res.residual = std::max(w1, w2);
    res.witness = (w1 >= w2) ? wit1 : wit2;
    res.equal = res.residual <= tol * res.scale;
    return res;
  }

  // support sweep; c0 = support-box center, used for the circumradius proxy
  Vector c0 = Vector::Zero(d);
  for (int i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e[i] = 1.0;
    c0[i] = 0.5 * (k1.support(e).value - k1.support(-e).value);
  }
  double rad = 0.0, worst = -1.0;
  Vector wdir = Vector::Zero(d);
  for (const auto& u : unit_directions(d, ctx.direction_samples(d))) {
    double h1 = k1.support(u).value;
    double h2 = k2.support(u).value;
    rad = std::max(rad, std::max(h1, h2) - c0.dot(u));
    double gap = std::abs(h1 - h2);
    if (gap > worst) { worst = gap; wdir = u; }
  }
  res.scale = std::max(1.0, rad);
  res.residual = worst;
  res.witness = wdir;
  res.equal = worst <= tol * res.scale;
  return res;
}

/// max(1, circumradius), the scale used in relative-tolerance verdicts.
inline double body_scale(const ConvexBody& k, const Context& ctx = {}) {
  if (k.is_polytope()) return std::max(1.0, min_ball_points(k.vertices(), ctx.seed).radius);
  const int d = k.dim();
  Vector c0 = Vector::Zero(d);
  for (int i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e[i] = 1.0;
    c0[i] = 0.5 * (k.support(e).value - k.support(-e).value);
  }
  double rad = 0.0;
  for (const auto& u : unit_directions(d, 512))
    rad = std::max(rad, k.support(u).value - c0.dot(u));
  return std::max(1.0, rad);
}

struct BoundaryPoint {
  Vector x;
  std::optional<Vector> normal; // unit outward, absent when not smooth
};

struct BoundarySample {
  std::vector<BoundaryPoint> points;
};

/// Boundary sample via the support map: s(u) with normal u for smooth
/// oracles; polytope support points come without normals when the vertex is
/// shared by several facets (always, for a polytope vertex).
inline BoundarySample sample_boundary(const ConvexBody& k, int count) {
  BoundarySample out;
  for (const auto& u : unit_directions(k.dim(), count)) {
    auto e = k.support(u);
    BoundaryPoint bp;
    bp.x = e.point;
    if (k.smooth()) bp.normal = u;
    out.points.push_back(std::move(bp));
  }
  return out;
}

} // namespace convexsym
