#pragma once

#include <optional>

#include "convexsym/body.hpp"

namespace convexsym {

/// A section Lambda ∩ K expressed in an orthonormal chart of the carrier
/// flat. The chart body is always oracle-backed (sections may be lower
/// dimensional, so no interior requirement applies).
class SectionBody {
 public:
  SectionBody(Flat carrier, ConvexBody chart_body)
      : carrier_(std::move(carrier)), body_(std::move(chart_body)) {}

  const Flat& carrier() const { return carrier_; }
  const ConvexBody& body() const { return body_; }
  int dim() const { return carrier_.dim(); }

  Vector to_ambient(const Vector& chart) const {
    return carrier_.base() + carrier_.basis() * chart;
  }
  Vector to_chart(const Vector& ambient) const {
    return carrier_.basis().transpose() * (ambient - carrier_.base());
  }

 private:
  Flat carrier_;
  ConvexBody body_;
};

struct SectionSupport {
  double value = 0.0;      // support of the section in chart coordinates
  Vector chart_point;      // attaining point, chart coordinates
  Vector ambient_point;    // same point in ambient coordinates
  Vector ambient_normal;   // outward normal of K at the point (unit), when defined
  bool has_normal = false;
};

namespace detail {

struct SectionFrame {
  Flat flat;
  Matrix normals; // d x (d-k), orthonormal basis of the flat's normal space
};

inline SectionFrame make_frame(const Flat& lambda) {
  return {lambda, orthonormal_complement(lambda.basis(), lambda.ambient_dim())};
}

/// Polytope section support via LP over convex-combination weights:
/// max <u_amb, sum lambda_i v_i>, sum lambda = 1, lambda >= 0, point in flat.
inline std::optional<SectionSupport> polytope_section_support(
    const std::vector<Vector>& verts, const SectionFrame& fr, const Vector& u_chart) {
  const int d = int(verts[0].size());
  const int n = int(verts.size());
  const int codim = int(fr.normals.cols());
  Vector u_amb = fr.flat.basis() * u_chart;

  Matrix a(codim + 1, n);
  Vector b(codim + 1);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < codim; ++i) a(i, j) = fr.normals.col(i).dot(verts[j]);
    a(codim, j) = 1.0;
  }
  for (int i = 0; i < codim; ++i) b[i] = fr.normals.col(i).dot(fr.flat.base());
  b[codim] = 1.0;

  Vector c(n);
  for (int j = 0; j < n; ++j) c[j] = u_amb.dot(verts[j]);

  SimplexSolver lp;
  auto res = lp.maximize(a, b, c);
  if (res.status != LpStatus::Optimal) return std::nullopt;

  Vector x = Vector::Zero(d);
  for (int j = 0; j < n; ++j)
    if (res.x[j] != 0.0) x += res.x[j] * verts[j];
  SectionSupport s;
  s.ambient_point = x;
  s.chart_point = fr.flat.basis().transpose() * (x - fr.flat.base());
  s.value = res.objective - u_amb.dot(fr.flat.base());
  return s;
}

/// Oracle section support by the dual (infimal-convolution) form:
///   h_{K∩Λ}(u) = inf_mu [ h_K(u_amb - N mu) + <p, N mu> ].
/// Convex in mu; minimized with Nelder-Mead, warm-startable across a sweep.
/// The optimal direction u_amb - N mu is the ambient normal of K at the
/// attaining point.
inline std::optional<SectionSupport> oracle_section_support(
    const ConvexBody& k, const SectionFrame& fr, const Vector& u_chart,
    Vector* mu_hint = nullptr) {
  const int codim = int(fr.normals.cols());
  const Vector u_amb = fr.flat.basis() * u_chart;
  const Vector& p = fr.flat.base();

  auto g = [&](const Vector& mu) {
    Vector w = u_amb - fr.normals * mu;
    double wn = w.norm();
    if (wn < 1e-14) return p.dot(fr.normals * mu) + 0.0;
    return k.support(w).value + p.dot(fr.normals * mu);
  };

  Vector mu0 = (mu_hint && mu_hint->size() == codim) ? *mu_hint : Vector::Zero(codim);
  NelderMeadOptions opt;
  opt.max_iter = (mu_hint && mu_hint->size() == codim) ? 120 : 300;
  opt.f_tol = 1e-12;
  opt.x_tol = 1e-11;
  auto [mu, val] = nelder_mead(g, mu0, 0.25, opt);

  // gradient polish: grad g = N'(p - s(u - N mu)), free from the support
  // point; spectral-step descent drives smooth duals to machine precision
  {
    auto grad = [&](const Vector& m2) -> Vector {
      Vector w = u_amb - fr.normals * m2;
      if (w.norm() < 1e-14) return Vector::Zero(codim);
      return fr.normals.transpose() * (p - k.support(w).point);
    };
    Vector cur = mu, gprev = grad(mu);
    double step = 0.1;
    double fcur = g(cur);
    for (int it = 0; it < 30; ++it) {
      Vector next = cur - step * gprev;
      double fnext = g(next);
      if (fnext < fcur - 1e-16 * (1 + std::abs(fcur))) {
        Vector gnext = grad(next);
        Vector dx = next - cur, dg = gnext - gprev;
        double denom = dg.squaredNorm();
        step = (denom > 1e-300) ? std::abs(dx.dot(dg)) / denom : step * 0.5;
        cur = next;
        fcur = fnext;
        gprev = gnext;
        if (gprev.norm() < 1e-13) break;
      } else {
        step *= 0.5;
        if (step < 1e-14) break;
      }
    }
    if (fcur < val) { mu = cur; val = fcur; }
  }
  if (mu_hint) *mu_hint = mu;

  Vector w = u_amb - fr.normals * mu;
  if (w.norm() < 1e-12) return std::nullopt; // direction swallowed: degenerate
  auto e = k.support(w);
  SectionSupport s;
  s.value = val - u_amb.dot(p);
  s.ambient_point = e.point;
  s.chart_point = fr.flat.basis().transpose() * (e.point - p);
  s.ambient_normal = w.normalized();
  s.has_normal = k.smooth();
  return s;
}

/// Does the flat meet the oracle body? Separation probe over unit normals
/// w of the flat: min_w h_{K-p}(w) < 0 certifies a separating hyperplane
/// containing the flat.
inline bool oracle_flat_meets(const ConvexBody& k, const SectionFrame& fr, double tol) {
  const int codim = int(fr.normals.cols());
  const Vector& p = fr.flat.base();
  auto gap = [&](const Vector& c) {
    Vector w = fr.normals * c;
    return k.support(w).value - p.dot(w);
  };
  if (codim == 1) {
    Vector e(1);
    e << 1.0;
    return std::min(gap(e), gap(-e)) > -tol;
  }
  double best = std::numeric_limits<double>::infinity();
  Vector best_c = unit_directions(codim, 1)[0];
  for (const auto& c : unit_directions(codim, 48)) {
    double v = gap(c);
    if (v < best) { best = v; best_c = c; }
  }
  auto [c_ref, v_ref] = minimize_on_sphere(gap, best_c, 0.3);
  best = std::min(best, v_ref);
  return best > -tol;
}

} // namespace detail

/// Support of the section Lambda ∩ K along a chart direction. For sweeps
/// over many directions prefer section_sweep below, which warm-starts the
/// oracle dual.
inline std::optional<SectionSupport> section_support(const ConvexBody& k,
                                                     const Flat& lambda,
                                                     const Vector& u_chart) {
  auto fr = detail::make_frame(lambda);
  if (k.is_polytope()) return detail::polytope_section_support(k.vertices(), fr, u_chart);
  return detail::oracle_section_support(k, fr, u_chart);
}

/// Section supports for a batch of chart directions; empty result when the
/// flat misses the body.
inline std::optional<std::vector<SectionSupport>> section_sweep(
    const ConvexBody& k, const Flat& lambda, const std::vector<Vector>& chart_dirs,
    double feas_tol = 1e-9) {
  auto fr = detail::make_frame(lambda);
  std::vector<SectionSupport> out;
  out.reserve(chart_dirs.size());
  if (k.is_polytope()) {
    for (const auto& u : chart_dirs) {
      auto s = detail::polytope_section_support(k.vertices(), fr, u);
      if (!s) return std::nullopt;
      out.push_back(std::move(*s));
    }
    return out;
  }
  if (!detail::oracle_flat_meets(k, fr, feas_tol)) return std::nullopt;
  Vector hint = Vector::Zero(fr.normals.cols());
  for (const auto& u : chart_dirs) {
    auto s = detail::oracle_section_support(k, fr, u, &hint);
    if (!s) return std::nullopt;
    out.push_back(std::move(*s));
  }
  return out;
}

/// The section as a first-class body in its carrier chart, or nullopt when
/// Lambda misses K.
inline std::optional<SectionBody> section(const ConvexBody& k, const Flat& lambda,
                                          const Context& ctx = {}) {
  if (lambda.ambient_dim() != k.dim())
    throw std::invalid_argument("section: dimension mismatch");
  if (lambda.dim() < 1 || lambda.dim() > k.dim() - 1)
    throw std::invalid_argument("section: flat dimension out of range");

  auto fr = detail::make_frame(lambda);
  const double feas_scale = std::max(1.0, lambda.base().norm());
  if (k.is_polytope()) {
    Vector probe = Vector::Zero(lambda.dim());
    probe[0] = 1.0;
    if (!detail::polytope_section_support(k.vertices(), fr, probe)) return std::nullopt;
    auto verts = k.vertices(); // captured copy
    auto fn = [verts, fr](const Vector& u) -> SupportEval {
      auto s = detail::polytope_section_support(verts, fr, u);
      if (!s) throw std::runtime_error("section support: infeasible");
      return {s->value, s->chart_point};
    };
    return SectionBody(lambda, ConvexBody::oracle(lambda.dim(), fn, false, "", false));
  }

  if (!detail::oracle_flat_meets(k, fr, ctx.tol * feas_scale)) return std::nullopt;
  ConvexBody inner = k;
  bool smooth = k.smooth();
  auto fn = [inner, fr](const Vector& u) -> SupportEval {
    auto s = detail::oracle_section_support(inner, fr, u);
    if (!s) throw std::runtime_error("section support: degenerate direction");
    return {s->value, s->chart_point};
  };
  return SectionBody(lambda, ConvexBody::oracle(lambda.dim(), fn, smooth, "", false));
}

struct SectionBoundaryPoint {
  Vector ambient_point;
  Vector ambient_normal; // unit; meaningful for smooth bodies
  bool has_normal = false;
};

/// Boundary points of bd(Lambda ∩ K) with ambient normals of K, via the
/// dual section sweep. Used by shadow-boundary membership arguments.
inline std::optional<std::vector<SectionBoundaryPoint>> section_boundary_sample(
    const ConvexBody& k, const Flat& lambda, int count) {
  auto dirs = unit_directions(lambda.dim(), count);
  auto sweep = section_sweep(k, lambda, dirs);
  if (!sweep) return std::nullopt;
  std::vector<SectionBoundaryPoint> out;
  out.reserve(sweep->size());
  for (auto& s : *sweep) {
    SectionBoundaryPoint bp;
    bp.ambient_point = s.ambient_point;
    bp.ambient_normal = s.ambient_normal;
    bp.has_normal = s.has_normal;
    out.push_back(std::move(bp));
  }
  return out;
}

} // namespace convexsym
