#pragma once

#include <cmath>

#include "convexsym/section.hpp"

namespace convexsym {

inline ConvexBody make_cube(int d, double half = 1.0, Vector center = Vector()) {
  if (center.size() == 0) center = Vector::Zero(d);
  std::vector<Vector> verts;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vector v = center;
    for (int i = 0; i < d; ++i) v[i] += (mask & (1 << i)) ? half : -half;
    verts.push_back(v);
  }
  return ConvexBody::from_extreme_points(std::move(verts), "cube");
}

/// Ellipsoid center + Q diag(a) B^d: support h(u) = <c,u> + |diag(a) Q'u|.
inline ConvexBody make_ellipsoid(Vector center, Vector semi_axes, Matrix rotation) {
  const int d = int(center.size());
  if (int(semi_axes.size()) != d) throw std::invalid_argument("make_ellipsoid: bad semi_axes");
  if (rotation.size() == 0) rotation = Matrix::Identity(d, d);
  for (int i = 0; i < d; ++i)
    if (semi_axes[i] <= 0) throw std::invalid_argument("make_ellipsoid: nonpositive semi-axis");
  auto fn = [center, semi_axes, rotation](const Vector& u) -> SupportEval {
    Vector w = semi_axes.asDiagonal() * (rotation.transpose() * u);
    double wn = w.norm();
    if (wn < 1e-300) return {center.dot(u), center};
    Vector point = center + rotation * (semi_axes.asDiagonal() * (w / wn));
    return {center.dot(u) + wn, point};
  };
  return ConvexBody::oracle(d, fn, true, "ellipsoid", false);
}

inline ConvexBody make_ball(int d, double radius = 1.0, Vector center = Vector()) {
  if (center.size() == 0) center = Vector::Zero(d);
  return make_ellipsoid(center, Vector::Constant(d, radius), Matrix::Identity(d, d));
}

// ---------------------------------------------------------------------------
// Bodies of revolution

/// Radius profile over a chart of the core flat E^{d-k}. The domain is a
/// ball (an interval when the core is a line) around domain_center.
struct RevolutionProfile {
  enum class Kind { Table, Radial, Analytic };
  Kind kind = Kind::Analytic;
  int core_dim = 1;
  std::function<double(const Vector&)> radius;
  Vector domain_center;
  double domain_radius = 1.0;
  bool smooth = false;
  // Rotationally invariant profiles carry the 1-d factor g with
  // r(y) = g(|y - domain_center|); support maximization then reduces to a
  // line search regardless of the core dimension.
  std::function<double(double)> radial_factor;
  bool is_radial = false;
  // serialization payload for Table (1-d: pairs (t, r)) and Radial
  // (pairs (s, r), s = distance from radial_center)
  std::vector<std::pair<double, double>> samples;
  Vector radial_center;
};

namespace detail {
inline double interp_table(const std::vector<std::pair<double, double>>& tab, double t) {
  if (tab.empty()) throw std::invalid_argument("profile table empty");
  if (t <= tab.front().first) return tab.front().second;
  if (t >= tab.back().first) return tab.back().second;
  size_t lo = 0, hi = tab.size() - 1;
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    if (tab[mid].first <= t) lo = mid;
    else hi = mid;
  }
  double w = (t - tab[lo].first) / (tab[hi].first - tab[lo].first);
  return (1 - w) * tab[lo].second + w * tab[hi].second;
}
} // namespace detail

/// 1-d profile from a sample table, linearly interpolated.
inline RevolutionProfile table_profile(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw std::invalid_argument("table_profile: need >= 2 samples");
  std::sort(samples.begin(), samples.end());
  RevolutionProfile p;
  p.kind = RevolutionProfile::Kind::Table;
  p.core_dim = 1;
  double lo = samples.front().first, hi = samples.back().first;
  p.domain_center = Vector::Constant(1, 0.5 * (lo + hi));
  p.domain_radius = 0.5 * (hi - lo);
  p.samples = samples;
  p.radius = [samples](const Vector& t) { return detail::interp_table(samples, t[0]); };
  p.smooth = false;
  for (auto& [t, r] : samples)
    if (r < 0) throw std::invalid_argument("table_profile: negative radius");
  return p;
}

/// Rotationally invariant profile r(y) = g(|y - center|) over a ball,
/// g from a sample table.
inline RevolutionProfile radial_profile(int core_dim, Vector center, double domain_radius,
                                        std::vector<std::pair<double, double>> g_samples) {
  if (int(center.size()) != core_dim) throw std::invalid_argument("radial_profile: bad center");
  std::sort(g_samples.begin(), g_samples.end());
  RevolutionProfile p;
  p.kind = RevolutionProfile::Kind::Radial;
  p.core_dim = core_dim;
  p.domain_center = center;
  p.domain_radius = domain_radius;
  p.samples = g_samples;
  p.radial_center = center;
  p.radial_factor = [g_samples](double s) { return detail::interp_table(g_samples, s); };
  p.is_radial = true;
  Vector c = center;
  p.radius = [g_samples, c](const Vector& y) {
    return detail::interp_table(g_samples, (y - c).norm());
  };
  p.smooth = false;
  return p;
}

inline RevolutionProfile analytic_profile(int core_dim, std::function<double(const Vector&)> r,
                                          Vector domain_center, double domain_radius,
                                          bool smooth) {
  RevolutionProfile p;
  p.kind = RevolutionProfile::Kind::Analytic;
  p.core_dim = core_dim;
  p.radius = std::move(r);
  p.domain_center = std::move(domain_center);
  p.domain_radius = domain_radius;
  p.smooth = smooth;
  return p;
}

/// Analytic rotationally invariant profile from the 1-d factor g.
inline RevolutionProfile analytic_radial_profile(int core_dim, std::function<double(double)> g,
                                                 Vector domain_center, double domain_radius,
                                                 bool smooth) {
  RevolutionProfile p;
  p.kind = RevolutionProfile::Kind::Analytic;
  p.core_dim = core_dim;
  p.domain_center = std::move(domain_center);
  p.domain_radius = domain_radius;
  p.smooth = smooth;
  p.radial_factor = g;
  p.is_radial = true;
  Vector c = p.domain_center;
  p.radius = [g, c](const Vector& y) { return g((y - c).norm()); };
  return p;
}

namespace detail {

/// max over the profile domain of f(y) = <y,uy> + r(y)*|uz|. Concave for
/// concave profiles; golden-section in 1-d, multi-start Nelder-Mead above.
inline std::pair<Vector, double> profile_max(const RevolutionProfile& prof,
                                             const Vector& uy, double uz_norm) {
  const int m = prof.core_dim;
  if (prof.is_radial && m >= 2) {
    // for fixed s = |y - c|, <y,uy> is maximal along uy: 1-d search in s
    double uyn = uy.norm();
    auto [s, val] = golden_max(
        [&](double sv) { return sv * uyn + prof.radial_factor(sv) * uz_norm; },
        0.0, prof.domain_radius);
    Vector y = prof.domain_center;
    if (uyn > 1e-300) y += (s / uyn) * uy;
    return {y, val + prof.domain_center.dot(uy)};
  }
  auto clamp_to_domain = [&](const Vector& y) -> Vector {
    Vector dy = y - prof.domain_center;
    double n = dy.norm();
    if (n <= prof.domain_radius) return y;
    return prof.domain_center + dy * (prof.domain_radius / n);
  };
  auto f = [&](const Vector& y_raw) {
    Vector y = clamp_to_domain(y_raw);
    return y.dot(uy) + prof.radius(y) * uz_norm;
  };
  if (m == 1) {
    double lo = prof.domain_center[0] - prof.domain_radius;
    double hi = prof.domain_center[0] + prof.domain_radius;
    auto [t, v] = golden_max([&](double x) {
      Vector y(1);
      y << x;
      return f(y);
    }, lo, hi);
    Vector y(1);
    y << t;
    return {y, v};
  }
  NelderMeadOptions opt;
  opt.max_iter = 200;
  opt.f_tol = 1e-13;
  opt.x_tol = 1e-12;
  Vector best_y = prof.domain_center;
  double best = -std::numeric_limits<double>::infinity();
  // a few deterministic starts: center plus offsets along uy
  std::vector<Vector> starts = {prof.domain_center};
  if (uy.norm() > 1e-14) {
    starts.push_back(clamp_to_domain(prof.domain_center + 0.7 * prof.domain_radius * uy.normalized()));
    starts.push_back(clamp_to_domain(prof.domain_center + 0.3 * prof.domain_radius * uy.normalized()));
  }
  for (const auto& s : starts) {
    auto [y, negv] = nelder_mead([&](const Vector& y_raw) { return -f(y_raw); }, s,
                                 0.3 * prof.domain_radius, opt);
    if (-negv > best) { best = -negv; best_y = clamp_to_domain(y); }
  }
  return {best_y, best};
}

} // namespace detail

/// k-body of revolution: fibers over the core flat E^{d-k} are k-balls of
/// radius profile(y) centered on the core. Support:
///   h(u_core, u_fiber) = max_y [ <y, u_core> + r(y) |u_fiber| ].
inline ConvexBody make_k_body_of_revolution(int d, int k, const Flat& core,
                                            const RevolutionProfile& profile) {
  if (k < 1 || k >= d) throw std::invalid_argument("make_k_body_of_revolution: k out of range");
  if (core.ambient_dim() != d || core.dim() != d - k)
    throw std::invalid_argument("make_k_body_of_revolution: core must be a (d-k)-flat");
  if (profile.core_dim != d - k)
    throw std::invalid_argument("make_k_body_of_revolution: profile dimension mismatch");

  // positivity probe over the domain (boundary may touch zero)
  {
    auto rng = make_rng(0x9f0f11eu, std::uint64_t(d * 16 + k));
    for (int i = 0; i < 256; ++i) {
      Vector y = profile.domain_center;
      if (profile.core_dim >= 1) {
        Vector dir = random_unit(rng, profile.core_dim);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        y += dir * (profile.domain_radius * std::sqrt(u01(rng)));
      }
      double r = profile.radius(y);
      if (r < 0 || !std::isfinite(r))
        throw std::invalid_argument("make_k_body_of_revolution: profile negative or non-finite");
    }
  }

  Matrix core_basis = core.basis();                       // d x (d-k)
  Matrix fiber = orthonormal_complement(core_basis, d);   // d x k
  Vector base = core.base();
  RevolutionProfile prof = profile;

  auto fn = [base, core_basis, fiber, prof](const Vector& u) -> SupportEval {
    Vector uy = core_basis.transpose() * u;
    Vector uz = fiber.transpose() * u;
    double uzn = uz.norm();
    auto [y, val] = detail::profile_max(prof, uy, uzn);
    Vector z = (uzn > 1e-300) ? Vector(prof.radius(y) * uz / uzn)
                              : Vector(Vector::Zero(uz.size()));
    Vector point = base + core_basis * y + fiber * z;
    return {val + base.dot(u), point};
  };
  return ConvexBody::oracle(d, fn, prof.smooth, "revolution", false);
}

// ---------------------------------------------------------------------------
// Group-orbit polytopes

/// Closure of a generating set under composition (matrices deduplicated at
/// tolerance); capped to keep runaway (infinite) groups finite.
inline std::vector<Isometry> group_closure(const std::vector<Isometry>& gens,
                                           size_t cap = 512) {
  if (gens.empty()) throw std::invalid_argument("group_closure: no generators");
  const int d = gens[0].dim();
  std::vector<Isometry> elems = {Isometry::identity(d)};
  auto find = [&](const Isometry& g) {
    for (const auto& e : elems)
      if ((e.linear() - g.linear()).cwiseAbs().maxCoeff() < 1e-9 &&
          (e.shift() - g.shift()).cwiseAbs().maxCoeff() < 1e-9)
        return true;
    return false;
  };
  size_t frontier = 0;
  while (frontier < elems.size() && elems.size() < cap) {
    Isometry e = elems[frontier++];
    for (const auto& g : gens) {
      Isometry h = g.compose(e);
      if (!find(h)) elems.push_back(h);
      if (elems.size() >= cap) break;
    }
  }
  return elems;
}

/// Convex hull of the group orbit of seed points. Generators must share a
/// fixed point (checked), so the result is invariant under the whole group.
inline ConvexBody make_symmetric_polytope(const std::vector<Vector>& seeds,
                                          const std::vector<Isometry>& gens,
                                          double tol = 1e-9) {
  if (seeds.empty()) throw std::invalid_argument("make_symmetric_polytope: no seeds");
  const int d = int(seeds[0].size());
  // common fixed point: least squares on (A_i - I) x = -b_i
  Matrix a(int(gens.size()) * d, d);
  Vector b(int(gens.size()) * d);
  for (size_t i = 0; i < gens.size(); ++i) {
    a.block(int(i) * d, 0, d, d) = gens[i].linear() - Matrix::Identity(d, d);
    b.segment(int(i) * d, d) = -gens[i].shift();
  }
  Vector fixed = a.completeOrthogonalDecomposition().solve(b);
  for (const auto& g : gens)
    if ((g(fixed) - fixed).norm() > tol * std::max(1.0, fixed.norm()))
      throw std::invalid_argument("make_symmetric_polytope: generators have no common fixed point");

  auto group = group_closure(gens);
  std::vector<Vector> orbit;
  for (const auto& s : seeds)
    for (const auto& g : group) orbit.push_back(g(s));
  return ConvexBody::polytope(std::move(orbit), "symmetric-polytope");
}

/// Random polytope: extreme points of n seeded points on a random-radius
/// sphere shell (most stay extreme).
inline ConvexBody make_random_polytope(std::uint64_t seed, int n, int d) {
  if (n < d + 1) throw std::invalid_argument("make_random_polytope: too few points");
  auto rng = make_rng(seed, 0x9017u);
  std::uniform_real_distribution<double> rad(0.6, 1.0);
  std::vector<Vector> pts;
  for (int i = 0; i < n; ++i) pts.push_back(rad(rng) * random_unit(rng, d));
  return ConvexBody::polytope(std::move(pts), "random-polytope");
}

/// Smooth strictly convex non-ellipsoid: h(u) = r|u| + eps * sum c_i u_i^4 / |u|^3.
/// Small eps keeps h a support function (curvature stays positive).
inline ConvexBody make_perturbed_ball(int d, double eps, std::uint64_t seed) {
  auto rng = make_rng(seed, 0xba11u);
  std::uniform_real_distribution<double> coef(0.5, 1.5);
  Vector c(d);
  for (int i = 0; i < d; ++i) c[i] = coef(rng);
  auto fn = [c, eps, d](const Vector& u) -> SupportEval {
    double n = u.norm();
    Vector v = u / n;
    double p = 0.0;
    Vector grad_p = Vector::Zero(d); // spherical gradient of the quartic
    for (int i = 0; i < d; ++i) {
      p += c[i] * v[i] * v[i] * v[i] * v[i];
      grad_p[i] = 4.0 * c[i] * v[i] * v[i] * v[i];
    }
    double h1 = 1.0 + eps * p; // support on the unit sphere
    Vector grad_s = eps * (grad_p - (grad_p.dot(v)) * v);
    // point = h(v) v + surface gradient (support parametrization of bd K)
    Vector point = h1 * v + grad_s;
    return {h1 * n, point};
  };
  return ConvexBody::oracle(d, fn, true, "perturbed-ball", false);
}

} // namespace convexsym
