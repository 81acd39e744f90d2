#pragma once

#include <map>

#include "convexsym/flats.hpp"

namespace convexsym {

enum class StarClass { NStar, Dense, Undecided };

/// Star of lines: the orbit of two concurrent coplanar lines under
/// iterated half-turns T_k = R_{T_{k-1}}(T_{k-2}). Line angles live mod pi;
/// an n-star is n distinct lines with consecutive spacing pi/n.
struct Star {
  Vector apex;
  Flat plane = Flat::point(Vector::Zero(2)); // 2-flat carrying the lines
  std::vector<Flat> lines; // in construction order (capped for dense orbits)
  std::vector<double> angles;
  StarClass classification = StarClass::Undecided;
  int n = 0;               // line count for NStar
  double generator_angle = 0.0;
  double max_gap = 0.0;    // largest angular gap seen by the orbit simulation
  long iterations_used = 0;
};

struct StarClassification {
  StarClass cls = StarClass::Undecided;
  int n = 0;
  double max_gap = kPi;
  long iterations_used = 0;
};

inline double normalize_angle_mod_pi(double a) {
  a = std::fmod(a, kPi);
  if (a < 0) a += kPi;
  if (a > kPi - 1e-15) a = 0.0;
  return a;
}

/// Largest angular gap of the orbit {j*theta mod pi : 0 <= j < iters}.
inline double star_orbit_max_gap(double theta, long iters) {
  std::vector<double> pts;
  pts.reserve(size_t(iters));
  double a = 0.0;
  for (long j = 0; j < iters; ++j) {
    pts.push_back(a);
    a = normalize_angle_mod_pi(a + theta);
  }
  std::sort(pts.begin(), pts.end());
  double gap = pts.front() + kPi - pts.back();
  for (size_t i = 1; i < pts.size(); ++i) gap = std::max(gap, pts[i] - pts[i - 1]);
  return gap;
}

/// Rational/dense dichotomy for the angle theta between two star
/// generators. A convergent p/q of theta/pi with q <= q_max and error
/// below the rationality tolerance gives an n-star with n = q; otherwise
/// the simulated orbit decides Dense when its largest gap falls below the
/// density threshold.
inline StarClassification classify_star(double theta, double rational_tol, int q_max,
                                        const Context& ctx = {}) {
  if (!(theta > 0.0 && theta < kPi))
    throw std::invalid_argument("classify_star: angle must lie in (0, pi)");
  StarClassification out;
  double x = theta / kPi;

  // continued fraction convergents of x
  double frac = x;
  long p_prev = 1, q_prev = 0, p_cur = 0, q_cur = 1; // p/q after first step
  for (int it = 0; it < 48; ++it) {
    if (frac < 1e-15) break;
    double inv = 1.0 / frac;
    long a = long(std::floor(inv));
    frac = inv - double(a);
    long p_next = a * p_cur + p_prev;
    long q_next = a * q_cur + q_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    if (q_cur > q_max) break;
    if (std::abs(x - double(p_cur) / double(q_cur)) < rational_tol) {
      // orbit of j*p/q mod 1 has exactly q distinct values (p/q reduced)
      out.cls = StarClass::NStar;
      out.n = int(q_cur);
      out.max_gap = kPi / double(q_cur);
      out.iterations_used = q_cur;
      return out;
    }
    if (frac < 1e-18) break;
  }

  // orbit simulation with incremental gap checks
  const long budget = ctx.star_max_iter;
  long n = 2048;
  while (true) {
    double gap = star_orbit_max_gap(theta, n);
    out.max_gap = gap;
    out.iterations_used = n;
    if (gap < ctx.star_dense_gap) {
      out.cls = StarClass::Dense;
      return out;
    }
    if (n >= budget) break;
    n = std::min(budget, n * 4);
  }
  out.cls = StarClass::Undecided;
  return out;
}

/// Construct the star Sigma(L1, L2). Within the spanning plane the
/// half-turn across the line at angle b maps angle a to 2b - a (mod pi),
/// so T_k sits at (k-1) * theta. Stops on the first angle revisit (finite
/// orbit) or at max_iter, in which case classify_star decides the label.
inline Star build_star(const Flat& l1, const Flat& l2, long max_iter, double tol,
                       const Context& ctx = {}) {
  if (l1.dim() != 1 || l2.dim() != 1)
    throw std::invalid_argument("build_star: inputs must be lines");
  if (l1.same_span(l2, tol))
    throw std::invalid_argument("build_star: lines coincide");

  // common point: intersect the two lines
  const Vector d1 = l1.direction();
  const Vector d2 = l2.direction();
  Matrix a(l1.ambient_dim(), 2);
  a.col(0) = d1;
  a.col(1) = -d2;
  Vector rhs = l2.base() - l1.base();
  Vector ts = a.completeOrthogonalDecomposition().solve(rhs);
  Vector x1 = l1.base() + ts[0] * d1;
  Vector x2 = l2.base() + ts[1] * d2;
  if ((x1 - x2).norm() > tol * std::max(1.0, rhs.norm()))
    throw std::invalid_argument("build_star: lines do not intersect");

  Star star;
  star.apex = 0.5 * (x1 + x2);
  star.plane = affine_hull({l1, l2});
  if (star.plane.dim() != 2)
    throw std::invalid_argument("build_star: lines do not span a plane");

  // angles in the plane chart, mod pi
  const Matrix& b = star.plane.basis();
  auto line_angle = [&](const Vector& dir) {
    double c = b.col(0).dot(dir);
    double s = b.col(1).dot(dir);
    return normalize_angle_mod_pi(std::atan2(s, c));
  };
  double a1 = line_angle(d1);
  double theta = normalize_angle_mod_pi(line_angle(d2) - a1);
  star.generator_angle = std::min(theta, kPi - theta);

  const long cap = 1024; // stored lines for non-closing orbits
  std::vector<double> angles = {0.0, theta};
  bool closed = false;
  double cur = theta, prev = 0.0;
  for (long k = 2; k < max_iter; ++k) {
    double next = normalize_angle_mod_pi(2.0 * cur - prev);
    prev = cur;
    cur = next;
    bool revisit = false;
    for (double e : angles) {
      double diff = std::abs(e - next);
      diff = std::min(diff, kPi - diff);
      if (diff <= tol) { revisit = true; break; }
    }
    if (revisit) { closed = true; break; }
    if (long(angles.size()) < cap) angles.push_back(next);
    star.iterations_used = k;
  }

  if (closed) {
    std::vector<double> sorted = angles;
    std::sort(sorted.begin(), sorted.end());
    bool equal_gaps = true;
    const int n = int(sorted.size());
    for (int i = 0; i < n; ++i) {
      double gap = (i + 1 < n) ? sorted[i + 1] - sorted[i] : sorted[0] + kPi - sorted[n - 1];
      if (std::abs(gap - kPi / n) > std::max(tol, 1e-9) * 8) equal_gaps = false;
    }
    star.classification = equal_gaps ? StarClass::NStar : StarClass::Undecided;
    star.n = n;
    star.max_gap = kPi / n;
  } else {
    auto cls = classify_star(theta > kPi / 2 ? kPi - theta : theta,
                             ctx.star_rational_tol, ctx.star_q_max, ctx);
    star.classification = cls.cls;
    star.n = cls.n;
    star.max_gap = cls.max_gap;
    star.iterations_used = std::max(star.iterations_used, cls.iterations_used);
  }

  star.angles = angles;
  for (double ang : angles) {
    Vector dir = std::cos(ang + a1) * b.col(0) + std::sin(ang + a1) * b.col(1);
    star.lines.push_back(Flat::line(star.apex, dir));
  }
  return star;
}

} // namespace convexsym
