#pragma once

#include "convexsym/metrics.hpp"
#include "convexsym/shadow.hpp"
#include "convexsym/symmetry.hpp"

namespace convexsym {

// ---------------------------------------------------------------------------
// Fits

struct SphereFit {
  Vector center;
  double radius = 0.0;
  double residual = 0.0;
};

namespace detail {
inline SphereFit sphere_fit_from_sweep(const std::vector<Vector>& dirs,
                                       const std::vector<double>& values,
                                       const Vector* fixed_center = nullptr) {
  const int d = int(dirs[0].size());
  const int n = int(dirs.size());
  SphereFit out;
  if (fixed_center) {
    double r = 0.0;
    for (int i = 0; i < n; ++i) r += values[i] - fixed_center->dot(dirs[i]);
    r /= n;
    out.center = *fixed_center;
    out.radius = r;
  } else {
    Matrix a(n, d + 1);
    Vector b(n);
    for (int i = 0; i < n; ++i) {
      a.block(i, 0, 1, d) = dirs[i].transpose();
      a(i, d) = 1.0;
      b[i] = values[i];
    }
    Vector sol = a.colPivHouseholderQr().solve(b);
    out.center = sol.head(d);
    out.radius = sol[d];
  }
  for (int i = 0; i < n; ++i)
    out.residual = std::max(out.residual,
                            std::abs(values[i] - out.center.dot(dirs[i]) - out.radius));
  return out;
}
} // namespace detail

/// Least squares of h(u) = <c,u> + r over the direction sample; residual is
/// the sup deviation.
inline SphereFit sphere_fit(const ConvexBody& k, const Context& ctx = {},
                            const Vector* fixed_center = nullptr) {
  auto dirs = unit_directions(k.dim(), ctx.direction_samples(k.dim()));
  std::vector<double> vals;
  vals.reserve(dirs.size());
  for (const auto& u : dirs) vals.push_back(k.support(u).value);
  return detail::sphere_fit_from_sweep(dirs, vals, fixed_center);
}

inline SphereFit sphere_fit(const SectionBody& s, const Context& ctx = {}) {
  auto dirs = unit_directions(s.dim(), std::max(8, ctx.section_samples));
  std::vector<double> vals;
  vals.reserve(dirs.size());
  for (const auto& u : dirs) vals.push_back(s.body().support(u).value);
  return detail::sphere_fit_from_sweep(dirs, vals);
}

struct EllipsoidFit {
  Vector center;
  Matrix shape; // M, positive definite for a valid fit; h = <c,u> + sqrt(u'Mu)
  double residual = std::numeric_limits<double>::infinity();
  bool positive_definite = false;
};

/// Fit h(u) = <c,u> + sqrt(u'Mu). Sampling in +-u pairs splits the model
/// exactly: the odd part gives c linearly, the squared even part gives M
/// linearly; both least squares. Exact (to solver precision) on true
/// ellipsoids.
inline EllipsoidFit ellipsoid_fit(const ConvexBody& k, const Context& ctx = {}) {
  const int d = k.dim();
  auto half = unit_directions(d, ctx.direction_samples(d) / 2);
  const int n = int(half.size());
  std::vector<double> hp(n), hm(n);
  for (int i = 0; i < n; ++i) {
    hp[i] = k.support(half[i]).value;
    hm[i] = k.support(-half[i]).value;
  }
  EllipsoidFit out;
  {
    Matrix a(n, d);
    Vector b(n);
    for (int i = 0; i < n; ++i) {
      a.row(i) = half[i].transpose();
      b[i] = 0.5 * (hp[i] - hm[i]);
    }
    out.center = a.colPivHouseholderQr().solve(b);
  }
  const int mcoef = d * (d + 1) / 2;
  {
    Matrix a(n, mcoef);
    Vector b(n);
    for (int i = 0; i < n; ++i) {
      double even = 0.5 * (hp[i] + hm[i]);
      b[i] = even * even;
      int c = 0;
      for (int r = 0; r < d; ++r)
        for (int s = r; s < d; ++s)
          a(i, c++) = (r == s) ? half[i][r] * half[i][r] : 2.0 * half[i][r] * half[i][s];
    }
    Vector sol = a.colPivHouseholderQr().solve(b);
    out.shape = Matrix::Zero(d, d);
    int c = 0;
    for (int r = 0; r < d; ++r)
      for (int s = r; s < d; ++s) {
        out.shape(r, s) = sol[c];
        out.shape(s, r) = sol[c];
        ++c;
      }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(out.shape);
  out.positive_definite = eig.eigenvalues().minCoeff() > 0;
  if (!out.positive_definite) return out; // residual stays infinite
  out.residual = 0.0;
  for (int i = 0; i < n; ++i) {
    double q = std::sqrt(half[i].dot(out.shape * half[i]));
    out.residual = std::max(out.residual, std::abs(hp[i] - out.center.dot(half[i]) - q));
    out.residual = std::max(out.residual, std::abs(hm[i] + out.center.dot(half[i]) - q));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Revolution structure

struct RevolutionStructure {
  int k = 0;         // fiber dimension
  Flat core = Flat::point(Vector::Zero(2)); // the E^{d-k} carrying the centres
  Matrix fiber_dirs; // d x k orthonormal
  double residual = 0.0;
};

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  double residual = 0.0;
};

struct RevolutionResult {
  bool verified = false;
  RevolutionStructure structure;
  std::vector<HypothesisCheck> checks;
  int samples_used = 0;
};

namespace detail {

/// Invariance residual of K under fiber rotations about the candidate core:
/// zero iff K is a k-body of revolution with that splitting (plus fibre
/// centres on the core). Cheap objective for frame refinement.
inline double rotation_invariance_residual(const ConvexBody& k, const Flat& core,
                                           const std::vector<Vector>& probe_dirs) {
  const int d = k.dim();
  const int kf = d - core.dim();
  Matrix fiber = orthonormal_complement(core.basis(), d);
  double worst = 0.0;
  std::vector<Matrix> rots;
  if (kf == 1) {
    rots.push_back(-Matrix::Identity(1, 1));
  } else if (kf == 2) {
    for (double phi : {1.0, 2.0 * kPi / 5}) {
      Matrix r(2, 2);
      r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
      rots.push_back(r);
    }
  } else {
    Matrix r1 = Matrix::Identity(kf, kf), r2 = Matrix::Identity(kf, kf);
    double c1 = std::cos(1.0), s1 = std::sin(1.0);
    r1(0, 0) = c1; r1(0, 1) = -s1; r1(1, 0) = s1; r1(1, 1) = c1;
    double c2 = std::cos(0.7), s2 = std::sin(0.7);
    r2(1, 1) = c2; r2(1, 2) = -s2; r2(2, 1) = s2; r2(2, 2) = c2;
    rots.push_back(r1);
    rots.push_back(r2);
  }
  for (const auto& rf : rots) {
    Matrix a = core.basis() * core.basis().transpose() + fiber * rf * fiber.transpose();
    Vector b = core.base() - a * core.base();
    for (const auto& u : probe_dirs) {
      double h1 = k.support(u).value;
      double h2 = k.support(a.transpose() * u).value + b.dot(u);
      worst = std::max(worst, std::abs(h1 - h2));
    }
  }
  return worst;
}

/// Grassmannian chart around a core candidate: directions tilted by W t and
/// base shifted inside the fiber space.
inline Flat perturb_core(const Flat& core, const Vector& params) {
  const int d = core.ambient_dim();
  const int m = core.dim();
  const int kf = d - m;
  Matrix w = orthonormal_complement(core.basis(), d);
  Matrix tilted(d, m);
  for (int j = 0; j < m; ++j) {
    Vector t = params.segment(j * kf, kf);
    tilted.col(j) = core.basis().col(j) + w * t;
  }
  Vector base = core.base() + w * params.tail(kf);
  return Flat(base, tilted);
}

} // namespace detail

/// Verify (and optionally search for) the k-body-of-revolution structure:
/// every sampled k-flat parallel to the fiber space meets bd K in a
/// (k-1)-sphere centred on the core. With a hint the frame is taken as
/// given; otherwise candidates come from symmetry-flat detection and a
/// rotation-invariance refinement.
inline RevolutionResult is_k_body_of_revolution(const ConvexBody& k, int kf, double tol,
                                                const Context& ctx = {},
                                                const RevolutionStructure* hint = nullptr) {
  const int d = k.dim();
  if (kf < 1 || kf >= d) throw std::invalid_argument("is_k_body_of_revolution: k out of range");
  const int m = d - kf; // core dimension
  const double scale = body_scale(k, ctx);
  const Vector center = circumsphere_prune(k, ctx);
  RevolutionResult out;

  std::vector<Flat> candidates;
  if (hint) {
    if (hint->core.dim() != m)
      throw std::invalid_argument("is_k_body_of_revolution: hint core has wrong dimension");
    candidates.push_back(hint->core);
  } else {
    Context searched = ctx;
    searched.samples_dim3 = 1024;
    searched.samples_dim4 = 2048;
    auto planes = detect_hyperplanes(k, 24, tol, searched);
    auto axes = detect_axes(k, 24, tol, searched);
    auto consider = [&](const Flat& f) {
      if (f.dim() != m) return;
      for (const auto& c : candidates)
        if (c.same_span(f, 1e-6)) return;
      candidates.push_back(f);
    };
    if (m == d - 1)
      for (const auto& c : planes) consider(c.flat);
    if (m == 1) {
      for (const auto& c : axes) consider(c.flat);
      for (size_t i = 0; i < planes.size(); ++i)
        for (size_t j = i + 1; j < planes.size(); ++j) {
          Matrix nn(d, 2);
          nn.col(0) = planes[i].flat.normal();
          nn.col(1) = planes[j].flat.normal();
          if (orthonormalize(nn).cols() == 2)
            consider(Flat(center, orthonormal_complement(orthonormalize(nn), d)));
        }
    }
    if (m == 2) {
      for (size_t i = 0; i < planes.size(); ++i)
        for (size_t j = i + 1; j < planes.size(); ++j) {
          Matrix nn(d, 2);
          nn.col(0) = planes[i].flat.normal();
          nn.col(1) = planes[j].flat.normal();
          Matrix span = orthonormalize(nn);
          if (span.cols() == 2) consider(Flat(center, orthonormal_complement(span, d)));
        }
      for (const auto& c : axes) // orthogonal complements of detected axes
        consider(Flat(center, orthonormal_complement(c.flat.basis(), d).leftCols(m)));
    }
    if (candidates.empty()) {
      // last resort: coarse Grassmannian sweep
      auto rng = make_rng(ctx.seed, 0x97af11u);
      for (int i = 0; i < 64; ++i) {
        Matrix q = random_rotation(rng, d);
        candidates.push_back(Flat(center, q.leftCols(m)));
      }
    }
  }

  // rank candidates by the cheap invariance residual, refine the best
  auto probe = unit_directions(d, 96);
  Flat best_core = candidates[0];
  if (!hint) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
      double r = detail::rotation_invariance_residual(k, c, probe);
      if (r < best) { best = r; best_core = c; }
    }
    auto rich_probe = unit_directions(d, 192);
    auto objective = [&](const Vector& params) {
      return detail::rotation_invariance_residual(k, detail::perturb_core(best_core, params), rich_probe);
    };
    NelderMeadOptions opt;
    opt.max_iter = 420;
    opt.f_tol = 0.0;
    opt.x_tol = 1e-13;
    auto [params, res] = nelder_mead(objective, Vector::Zero(m * kf + kf), 0.05, opt);
    auto [params2, res2] = nelder_mead(objective, params, 0.004, opt);
    best_core = detail::perturb_core(best_core, res2 < res ? params2 : params);
  }

  // verification: sections on sampled parallel fiber flats
  Matrix fiber = orthonormal_complement(best_core.basis(), d);
  std::vector<std::pair<double, double>> extent;
  for (int j = 0; j < m; ++j) {
    Vector g = best_core.basis().col(j);
    double hi = k.support(g).value - g.dot(best_core.base());
    double lo = -(k.support(-g).value + g.dot(best_core.base()));
    extent.push_back({lo, hi});
  }
  const int n_flats = std::max(8, ctx.flat_samples / 2);
  const double g2 = 1.2207440846057596;
  double worst_sphere = 0.0, worst_center = 0.0;
  int used = 0;
  auto chart_dirs = unit_directions(kf, std::max(8, ctx.section_samples / 2));
  for (int i = 0; i < n_flats; ++i) {
    Vector q = best_core.base();
    for (int j = 0; j < m; ++j) {
      double t = std::fmod(0.5 + (i + 1) / std::pow(g2, j + 1), 1.0);
      auto [lo, hi] = extent[j];
      q += (lo + (0.1 + 0.8 * t) * (hi - lo)) * best_core.basis().col(j);
    }
    Flat fl(q, fiber);
    auto sweep = section_sweep(k, fl, chart_dirs);
    if (!sweep) continue;
    std::vector<double> vals;
    vals.reserve(sweep->size());
    for (const auto& s : *sweep) vals.push_back(s.value);
    auto fit = detail::sphere_fit_from_sweep(chart_dirs, vals);
    Vector c_amb = fl.base() + fl.basis() * fit.center;
    worst_sphere = std::max(worst_sphere, fit.residual);
    worst_center = std::max(worst_center, best_core.distance(c_amb));
    ++used;
  }

  out.structure.k = kf;
  out.structure.core = best_core;
  out.structure.fiber_dirs = fiber;
  out.structure.residual = std::max(worst_sphere, worst_center);
  out.samples_used = used;
  out.checks.push_back({"sections_spherical", worst_sphere <= tol * scale, worst_sphere});
  out.checks.push_back({"centres_on_core", worst_center <= tol * scale, worst_center});
  out.verified = used > 0 && worst_sphere <= tol * scale && worst_center <= tol * scale;
  return out;
}

// ---------------------------------------------------------------------------
// Reports and pipelines

enum class ConclusionType { Sphere, Revolution, Ellipsoid, Inconclusive };

struct Conclusion {
  ConclusionType type = ConclusionType::Inconclusive;
  double residual = std::numeric_limits<double>::infinity();
  // payloads
  Vector center;     // sphere / ellipsoid
  double radius = 0; // sphere
  Matrix shape;      // ellipsoid
  RevolutionStructure revolution;
};

struct ClassificationReport {
  std::string theorem_id;
  std::vector<HypothesisCheck> hypothesis_checks;
  Conclusion conclusion;
  int samples_used = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;

  bool hypotheses_pass() const {
    for (const auto& c : hypothesis_checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Largest flat contained in every hyperplane: direction space is the
/// intersection of theirs; the base point comes from least squares, with a
/// consistency residual gate. k = -1 when the planes share no point.
inline std::pair<Flat, int> common_flat(const std::vector<Flat>& hyperplanes, double tol) {
  if (hyperplanes.size() < 2) throw std::invalid_argument("common_flat: need >= 2 hyperplanes");
  const int d = hyperplanes[0].ambient_dim();
  Matrix normals(d, int(hyperplanes.size()));
  Matrix a(int(hyperplanes.size()), d);
  Vector b(int(hyperplanes.size()));
  double scale = 1.0;
  for (size_t i = 0; i < hyperplanes.size(); ++i) {
    if (hyperplanes[i].dim() != d - 1)
      throw std::invalid_argument("common_flat: input is not a hyperplane");
    Vector n = hyperplanes[i].normal();
    normals.col(int(i)) = n;
    a.row(int(i)) = n.transpose();
    b[int(i)] = n.dot(hyperplanes[i].base());
    scale = std::max(scale, hyperplanes[i].base().norm());
  }
  Vector x = a.completeOrthogonalDecomposition().solve(b);
  double resid = (a * x - b).cwiseAbs().maxCoeff();
  if (resid > tol * scale) return {Flat::point(x), -1};
  Matrix span = orthonormalize(normals, 1e-8);
  Matrix dir = orthonormal_complement(span, d);
  if (dir.cols() == 0) return {Flat::point(x), 0};
  return {Flat(x, dir), int(dir.cols())};
}

namespace detail {

inline void conclude_revolution(ClassificationReport& rep, const ConvexBody& k, int kf,
                                double tol, const Context& ctx,
                                const RevolutionStructure* hint) {
  auto rv = is_k_body_of_revolution(k, kf, tol, ctx, hint);
  for (const auto& c : rv.checks) rep.hypothesis_checks.push_back(
      {"conclusion_" + c.name, c.pass, c.residual});
  rep.samples_used += rv.samples_used;
  if (rv.verified) {
    rep.conclusion.type = ConclusionType::Revolution;
    rep.conclusion.revolution = rv.structure;
    rep.conclusion.residual = rv.structure.residual;
  } else {
    rep.conclusion.type = ConclusionType::Inconclusive;
    rep.conclusion.residual = rv.structure.residual;
  }
}

inline void conclude_sphere(ClassificationReport& rep, const ConvexBody& k, double tol,
                            const Context& ctx, const Vector* fixed_center) {
  auto fit = sphere_fit(k, ctx, fixed_center);
  double scale = body_scale(k, ctx);
  if (fit.residual <= tol * scale) {
    rep.conclusion.type = ConclusionType::Sphere;
    rep.conclusion.center = fit.center;
    rep.conclusion.radius = fit.radius;
    rep.conclusion.residual = fit.residual;
  } else {
    rep.conclusion.type = ConclusionType::Inconclusive;
    rep.conclusion.residual = fit.residual;
  }
}

} // namespace detail

/// Every line through p inside the k-flat Lambda is an axis of symmetry =>
/// K is a k-body of revolution with fibres parallel to Lambda. Hypothesis
/// sampled over n_lines lines; conclusion independently verified; the
/// shadow-boundary containment (L-perp boundary inside the shadow) is spot
/// checked on smooth oracles.
inline ClassificationReport theorem_grandota_pipeline(const ConvexBody& k, const Vector& p,
                                                      const Flat& lambda, double tol,
                                                      int n_lines, const Context& ctx = {}) {
  const int d = k.dim();
  const int kf = lambda.dim();
  if (kf < 2 || kf > d - 1)
    throw std::invalid_argument("theorem_grandota_pipeline: flat dimension out of range");
  if (!lambda.contains_point(p, std::max(tol, 1e-9) * std::max(1.0, p.norm())))
    throw std::invalid_argument("theorem_grandota_pipeline: p not on the flat");

  ClassificationReport rep;
  rep.theorem_id = "grandota";
  rep.seed = ctx.seed;
  rep.samples_used = n_lines;

  std::vector<Flat> lines;
  for (const auto& w : unit_directions(kf, n_lines))
    lines.push_back(Flat::line(p, lambda.basis() * w));
  bool all = true;
  for (size_t i = 0; i < lines.size(); ++i) {
    auto claim = is_axis_of_symmetry(k, lines[i], tol, ctx);
    rep.hypothesis_checks.push_back({"axis[" + std::to_string(i) + "]", claim.verdict, claim.residual});
    all = all && claim.verdict;
  }

  if (all && k.smooth()) {
    const double scale = body_scale(k, ctx);
    for (size_t i = 0; i < lines.size() && i < 3; ++i) {
      Flat perp = orth_complement(lines[i], p);
      auto sb = shadow_boundary(k, lines[i], std::max(tol, 1e-7), ctx);
      auto pts = section_boundary_sample(k, perp, 24);
      double worst = 0.0;
      if (pts)
        for (const auto& bp : *pts)
          if (bp.has_normal) worst = std::max(worst, sb.normal_violation(bp.ambient_normal));
      rep.hypothesis_checks.push_back(
          {"shadow_containment[" + std::to_string(i) + "]", worst <= 100 * tol * scale, worst});
    }
  }

  if (!rep.hypotheses_pass()) {
    rep.notes.push_back("hypothesis failed; no conclusion asserted");
    return rep;
  }
  RevolutionStructure hint;
  hint.k = kf;
  hint.core = orth_complement(lambda, p);
  detail::conclude_revolution(rep, k, kf, tol, ctx, &hint);
  return rep;
}

/// A sequence of pairwise non-perpendicular concurrent axes spanning a
/// k-dimensional hull => k-body of revolution (k < d) or sphere (k = d).
inline ClassificationReport theorem_dream_pipeline(const ConvexBody& k,
                                                   const std::vector<Flat>& axes, double tol,
                                                   const Context& ctx = {}) {
  if (axes.size() < 2) throw std::invalid_argument("theorem_dream_pipeline: need >= 2 axes");
  ClassificationReport rep;
  rep.theorem_id = "dream";
  rep.seed = ctx.seed;
  rep.samples_used = int(axes.size());
  const int d = k.dim();
  const double scale = body_scale(k, ctx);

  bool all = true;
  for (size_t i = 0; i < axes.size(); ++i) {
    auto claim = is_axis_of_symmetry(k, axes[i], tol, ctx);
    rep.hypothesis_checks.push_back({"axis[" + std::to_string(i) + "]", claim.verdict, claim.residual});
    all = all && claim.verdict;
  }

  Vector center = circumsphere_prune(k, ctx);
  double conc = 0.0;
  for (const auto& l : axes) conc = std::max(conc, l.distance(center));
  rep.hypothesis_checks.push_back({"concurrent_at_circumcentre", conc <= 1e-6 * scale + tol * scale, conc});
  all = all && rep.hypothesis_checks.back().pass;

  double min_dot = 1.0;
  for (size_t i = 0; i < axes.size(); ++i)
    for (size_t j = i + 1; j < axes.size(); ++j)
      min_dot = std::min(min_dot, std::abs(axes[i].direction().dot(axes[j].direction())));
  bool non_perp = min_dot > tol;
  rep.hypothesis_checks.push_back({"pairwise_non_perpendicular", non_perp, min_dot});
  all = all && non_perp;

  Flat hull = affine_hull(axes);
  int kk = hull.dim();
  rep.notes.push_back("hull_dim=" + std::to_string(kk));

  if (!all) {
    rep.notes.push_back("hypothesis failed; no conclusion asserted");
    return rep;
  }
  if (kk == d) {
    detail::conclude_sphere(rep, k, tol, ctx, nullptr);
  } else {
    RevolutionStructure hint;
    hint.k = kk;
    hint.core = orth_complement(Flat(center, hull.basis()), center);
    detail::conclude_revolution(rep, k, kk, tol, ctx, &hint);
  }
  return rep;
}

/// Hyperplanes of symmetry sharing a maximal k-flat => (d-k)-body of
/// revolution; no shared flat => sphere (the companion proposition's
/// branch). Finite input is flagged in the notes.
inline ClassificationReport theorem_fantasia_pipeline(const ConvexBody& k,
                                                      const std::vector<Flat>& hyperplanes,
                                                      double tol, const Context& ctx = {}) {
  if (hyperplanes.size() < 2)
    throw std::invalid_argument("theorem_fantasia_pipeline: need >= 2 hyperplanes");
  ClassificationReport rep;
  rep.theorem_id = "fantasia";
  rep.seed = ctx.seed;
  rep.samples_used = int(hyperplanes.size());
  rep.notes.push_back("containment read: common flat lies inside every hyperplane");
  rep.notes.push_back("finite hyperplane sample stands in for the sequence hypothesis");
  if (int(hyperplanes.size()) < k.dim())
    rep.notes.push_back("sampling adequacy: fewer hyperplanes than the ambient dimension");

  bool all = true;
  for (size_t i = 0; i < hyperplanes.size(); ++i) {
    auto claim = is_hyperplane_of_symmetry(k, hyperplanes[i], tol, ctx);
    rep.hypothesis_checks.push_back(
        {"hyperplane[" + std::to_string(i) + "]", claim.verdict, claim.residual});
    all = all && claim.verdict;
  }
  if (!all) {
    rep.notes.push_back("hypothesis failed; no conclusion asserted");
    return rep;
  }

  auto [gamma, kk] = common_flat(hyperplanes, std::max(tol, 1e-9));
  rep.notes.push_back("common_flat_dim=" + std::to_string(kk));
  if (kk <= 0) {
    rep.notes.push_back("no shared flat: sphere branch");
    detail::conclude_sphere(rep, k, tol, ctx, nullptr);
  } else if (kk > k.dim() - 2) {
    rep.notes.push_back("shared flat too large (degenerate input); no conclusion");
    rep.conclusion.type = ConclusionType::Inconclusive;
  } else {
    RevolutionStructure hint;
    hint.k = k.dim() - kk;
    hint.core = gamma;
    detail::conclude_revolution(rep, k, k.dim() - kk, tol, ctx, &hint);
  }
  return rep;
}

namespace detail {

/// Congruence spot-check for two hyperplane sections through p: support
/// profiles agree up to an orthogonal alignment of the charts.
inline double section_congruence_residual(const ConvexBody& k, const Flat& h1, const Flat& h2,
                                          const Context& ctx) {
  const int cd = h1.dim();
  auto dirs = unit_directions(cd, cd == 2 ? 96 : 64);
  auto s1 = section_sweep(k, h1, dirs);
  auto s2 = section_sweep(k, h2, dirs);
  if (!s1 || !s2) return std::numeric_limits<double>::infinity();
  std::vector<double> v1, v2;
  for (const auto& s : *s1) v1.push_back(s.value);
  for (const auto& s : *s2) v2.push_back(s.value);

  if (cd == 2) {
    // circular alignment (shift and flip) of the profiles
    const int n = int(dirs.size());
    double best = std::numeric_limits<double>::infinity();
    for (int flip = 0; flip < 2; ++flip)
      for (int s = 0; s < n; ++s) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
          int j = flip ? (s - i + 2 * n) % n : (i + s) % n;
          worst = std::max(worst, std::abs(v1[i] - v2[j]));
          if (worst >= best) break;
        }
        best = std::min(best, worst);
      }
    return best;
  }
  // 3-d charts: align over SO(3) with a few Nelder-Mead starts (axis-angle)
  auto sup2 = [&](const Vector& u) {
    // nearest sampled value; dirs are quasi-uniform so interpolate by NN
    double bestdot = -2.0;
    int bi = 0;
    for (size_t i = 0; i < dirs.size(); ++i) {
      double c = dirs[i].dot(u);
      if (c > bestdot) { bestdot = c; bi = int(i); }
    }
    return v2[bi];
  };
  auto resid = [&](const Vector& aa) {
    Matrix r = Eigen::AngleAxisd(aa.norm() < 1e-12 ? 0.0 : aa.norm(),
                                 aa.norm() < 1e-12 ? Eigen::Vector3d::UnitX()
                                                   : Eigen::Vector3d(aa.normalized()))
                   .toRotationMatrix();
    double worst = 0.0;
    for (size_t i = 0; i < dirs.size(); ++i)
      worst = std::max(worst, std::abs(v1[i] - sup2(r * dirs[i])));
    return worst;
  };
  double best = std::numeric_limits<double>::infinity();
  auto rng = make_rng(ctx.seed, 0x50c37u);
  for (int s = 0; s < 8; ++s) {
    Vector aa = (s == 0) ? Vector(Vector::Zero(3)) : Vector(kPi * random_unit(rng, 3));
    auto [x, v] = nelder_mead(resid, aa, 0.4);
    best = std::min(best, v);
  }
  return best;
}

} // namespace detail

/// Every (d-2)-flat through p a rotation coaxis of order k (k >= 3) =>
/// sphere centred at p, with the concurrent-congruent-sections criterion
/// spot checked on hyperplane pairs.
inline ClassificationReport theorem_brasil_pipeline(const ConvexBody& k, const Vector& p,
                                                    int order, double tol, int n_flats,
                                                    const Context& ctx = {}) {
  if (order < 3) throw std::invalid_argument("theorem_brasil_pipeline: order must be >= 3");
  const int d = k.dim();
  ClassificationReport rep;
  rep.theorem_id = "brasil";
  rep.seed = ctx.seed;
  rep.samples_used = n_flats;

  auto rng = make_rng(ctx.seed, 0xb7a511u);
  bool all = true;
  for (int i = 0; i < n_flats; ++i) {
    Matrix q = random_rotation(rng, d);
    Flat gamma(p, q.leftCols(d - 2));
    auto claim = is_rotation_coaxis_of_order(k, gamma, order, tol, ctx);
    rep.hypothesis_checks.push_back({"coaxis[" + std::to_string(i) + "]", claim.verdict, claim.residual});
    all = all && claim.verdict;
    if (!all && i >= 2) break; // enough failing witnesses
  }

  if (all) {
    const double scale = body_scale(k, ctx);
    for (int j = 0; j < 3; ++j) {
      Matrix q = random_rotation(rng, d);
      Matrix q2 = random_rotation(rng, d);
      double res = detail::section_congruence_residual(
          k, Flat(p, q.leftCols(d - 1)), Flat(p, q2.leftCols(d - 1)), ctx);
      rep.hypothesis_checks.push_back(
          {"congruent_sections[" + std::to_string(j) + "]", res <= 1e-4 * scale, res});
    }
  }

  if (!rep.hypotheses_pass()) {
    rep.notes.push_back("hypothesis failed; no conclusion asserted");
    return rep;
  }
  detail::conclude_sphere(rep, k, tol, ctx, &p);
  return rep;
}

/// Strictly convex K, every k-flat through p inside the (k+1)-flat Lambda a
/// k-axis => the (k+1)-sections parallel to Lambda are spheres centred on
/// the orthogonal complement through p, i.e. a (k+1)-body of revolution.
inline ClassificationReport theorem_copaoro_pipeline(const ConvexBody& k, const Vector& p,
                                                     const Flat& lambda, int kk, double tol,
                                                     const Context& ctx = {}) {
  const int d = k.dim();
  if (kk < 1 || kk > d - 2)
    throw std::invalid_argument("theorem_copaoro_pipeline: k out of range");
  if (lambda.dim() != kk + 1)
    throw std::invalid_argument("theorem_copaoro_pipeline: Lambda must be a (k+1)-flat");
  if (!lambda.contains_point(p, std::max(tol, 1e-9) * std::max(1.0, p.norm())))
    throw std::invalid_argument("theorem_copaoro_pipeline: p not on Lambda");

  ClassificationReport rep;
  rep.theorem_id = "copaoro";
  rep.seed = ctx.seed;
  const double scale = body_scale(k, ctx);

  // strict convexity probe: support attaining points must not jump under
  // tiny direction perturbations
  {
    double worst = 0.0;
    auto rng = make_rng(ctx.seed, 0x5a71c7u);
    for (const auto& u : unit_directions(d, 64)) {
      Vector du = random_unit(rng, d) * 1e-6;
      Vector u2 = (u + du).normalized();
      worst = std::max(worst, (k.support(u).point - k.support(u2).point).norm());
    }
    rep.hypothesis_checks.push_back({"strictly_convex", worst <= 5e-3 * scale, worst});
  }

  const int n_flats = 8;
  bool all = rep.hypothesis_checks[0].pass;
  auto ws = unit_directions(kk + 1, n_flats);
  for (int i = 0; i < n_flats; ++i) {
    // k-subspaces of Lambda through p: orthogonal complements of sampled
    // directions inside Lambda's direction space
    Matrix inside = orthonormal_complement(ws[i], kk + 1); // (k+1) x k chart
    Flat gamma(p, lambda.basis() * inside);
    auto claim = is_k_axis_of_symmetry(k, gamma, tol, KAxisMode::Mundial, ctx);
    rep.hypothesis_checks.push_back({"k_axis[" + std::to_string(i) + "]", claim.verdict, claim.residual});
    all = all && claim.verdict;
    if (!all && i >= 2) break;
  }
  rep.samples_used = n_flats;

  if (!all || !rep.hypotheses_pass()) {
    rep.notes.push_back("hypothesis failed; no conclusion asserted");
    return rep;
  }
  RevolutionStructure hint;
  hint.k = kk + 1;
  hint.core = orth_complement(lambda, p);
  detail::conclude_revolution(rep, k, kk + 1, tol, ctx, &hint);
  return rep;
}

/// Shadow-boundary condition at the origin: for each sampled hyperplane H
/// through 0 there must exist a line L_H with bd(H ∩ K) inside the shadow
/// boundary S∂(K, L_H); then K is verified as an ellipsoid.
inline ClassificationReport cabezon_condition_check(const ConvexBody& k, int n_hyperplanes,
                                                    double tol, const Context& ctx = {}) {
  const int d = k.dim();
  if (!k.smooth())
    throw std::invalid_argument("cabezon_condition_check: requires a smooth oracle body");
  ClassificationReport rep;
  rep.theorem_id = "cabezon";
  rep.seed = ctx.seed;
  rep.samples_used = n_hyperplanes;

  {
    double hmin = std::numeric_limits<double>::infinity();
    for (const auto& u : unit_directions(d, 128)) hmin = std::min(hmin, k.support(u).value);
    if (hmin <= 0)
      throw std::invalid_argument("cabezon_condition_check: origin must be interior to K");
  }

  bool all = true;
  auto plane_normals = unit_directions(d, n_hyperplanes);
  auto nm_starts = unit_directions(d, 16);
  for (int i = 0; i < n_hyperplanes; ++i) {
    const Vector& nrm = plane_normals[i];
    Flat h = Flat::hyperplane(Vector::Zero(d), nrm);
    auto pts = section_boundary_sample(k, h, 48);
    if (!pts || pts->empty()) {
      rep.hypothesis_checks.push_back({"shadow[" + std::to_string(i) + "]", false,
                                       std::numeric_limits<double>::infinity()});
      all = false;
      continue;
    }
    Matrix normals(int(pts->size()), d);
    int rows = 0;
    for (const auto& bp : *pts)
      if (bp.has_normal) normals.row(rows++) = bp.ambient_normal.transpose();
    normals.conservativeResize(rows, d);
    auto violation = [&](const Vector& v) {
      double worst = 0.0;
      for (int r = 0; r < rows; ++r) worst = std::max(worst, std::abs(normals.row(r).dot(v)));
      return worst;
    };
    Eigen::JacobiSVD<Matrix> svd(normals, Eigen::ComputeThinV);
    Vector init = svd.matrixV().col(d - 1);
    auto [v_best, res] = minimize_on_sphere(violation, init, 0.08);
    for (int s = 0; s < 15; ++s) {
      auto [v2, r2] = minimize_on_sphere(violation, nm_starts[s + 1], 0.3);
      if (r2 < res) { res = r2; v_best = v2; }
    }
    rep.hypothesis_checks.push_back({"shadow[" + std::to_string(i) + "]", res <= tol, res});
    all = all && (res <= tol);
  }

  if (!all) {
    rep.notes.push_back("hypothesis failed; no conclusion asserted");
    return rep;
  }
  auto fit = ellipsoid_fit(k, ctx);
  const double scale = body_scale(k, ctx);
  if (fit.positive_definite && fit.residual <= tol * scale) {
    rep.conclusion.type = ConclusionType::Ellipsoid;
    rep.conclusion.center = fit.center;
    rep.conclusion.shape = fit.shape;
    rep.conclusion.residual = fit.residual;
  } else {
    rep.conclusion.type = ConclusionType::Inconclusive;
    rep.conclusion.residual = fit.residual;
  }
  return rep;
}

struct ConjectureRow {
  int n_coaxes = 0;
  int order = 0;
  double sphere_residual = 0.0; // relative to scale
};

/// Numerical evidence table for the closing conjecture: orbit hulls under
/// finite sets of higher-order rotation coaxes, sphere-fit residual per
/// (count, order). Evidence only; no counterexample claims.
inline std::vector<ConjectureRow> conjecture_probe(std::uint64_t seed, int trials,
                                                   const std::vector<int>& orders, double tol,
                                                   const Context& ctx = {}) {
  if (trials < 1) throw std::invalid_argument("conjecture_probe: trials < 1");
  const int d = 3;
  std::vector<ConjectureRow> rows;
  for (int t = 0; t < trials; ++t) {
    auto rng = make_rng(seed, 0xc011u + std::uint64_t(t));
    for (int order : orders) {
      if (order < 3) throw std::invalid_argument("conjecture_probe: orders must be >= 3");
      for (int m = 1; m <= 3; ++m) {
        std::vector<Isometry> gens;
        for (int i = 0; i < m; ++i) {
          Vector dir = random_unit(rng, d);
          Flat gamma = Flat::line(Vector::Zero(d), dir);
          Matrix w = orthonormal_complement(gamma.basis(), d);
          Flat pi1 = Flat::hyperplane(Vector::Zero(d), w.col(0));
          gens.push_back(rotation_about_coaxis(gamma, order, pi1));
        }
        std::vector<Vector> seeds = {random_unit(rng, d)};
        auto group = group_closure(gens, 240);
        std::vector<Vector> orbit;
        for (const auto& g : group) orbit.push_back(g(seeds[0]));
        ConvexBody body = ConvexBody::polytope(orbit, "orbit-hull");
        auto fit = sphere_fit(body, ctx);
        double scale = body_scale(body, ctx);
        rows.push_back({m, order, fit.residual / scale});
      }
    }
  }
  (void)tol;
  return rows;
}

} // namespace convexsym
