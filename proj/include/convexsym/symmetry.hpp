#pragma once

#include "convexsym/generators.hpp"
#include "convexsym/polytope_faces.hpp"
#include "convexsym/star.hpp"

namespace convexsym {

enum class ClaimKind { Hyperplane, Axis, NAxis, KAxis, CoaxisOrder };

/// Outcome of a symmetry test. verdict == (residual <= tol * scale);
/// witnesses carry the worst-mismatch directions (or section anchors) when
/// the verdict is false.
struct SymmetryClaim {
  ClaimKind kind = ClaimKind::Axis;
  int order = 0; // n for NAxis, k for KAxis and CoaxisOrder
  Flat flat = Flat::point(Vector::Zero(2));
  bool verdict = false;
  double residual = 0.0;
  double scale = 1.0;
  std::vector<std::pair<Vector, double>> witnesses;
};

namespace detail {

inline SymmetryClaim claim_from_equality(ClaimKind kind, int order, const Flat& flat,
                                         const EqualityResult& eq, double tol) {
  SymmetryClaim c;
  c.kind = kind;
  c.order = order;
  c.flat = flat;
  c.residual = eq.residual;
  c.scale = eq.scale;
  c.verdict = eq.residual <= tol * eq.scale;
  if (!c.verdict && eq.witness.size()) c.witnesses.push_back({eq.witness, eq.residual});
  return c;
}

} // namespace detail

inline SymmetryClaim is_hyperplane_of_symmetry(const ConvexBody& k, const Flat& pi,
                                               double tol, const Context& ctx = {}) {
  if (pi.dim() != k.dim() - 1)
    throw std::invalid_argument("is_hyperplane_of_symmetry: flat is not a hyperplane");
  auto eq = bodies_equal(k, apply_isometry(k, reflect_hyperplane(pi)), tol, ctx);
  return detail::claim_from_equality(ClaimKind::Hyperplane, 0, pi, eq, tol);
}

inline SymmetryClaim is_axis_of_symmetry(const ConvexBody& k, const Flat& line,
                                         double tol, const Context& ctx = {}) {
  auto eq = bodies_equal(k, apply_isometry(k, axis_involution(line)), tol, ctx);
  return detail::claim_from_equality(ClaimKind::Axis, 2, line, eq, tol);
}

inline SymmetryClaim is_n_axis_of_symmetry(const ConvexBody& k, const Flat& line, int n,
                                           double tol, const Context& ctx = {}) {
  if (k.dim() != 3)
    throw std::invalid_argument("is_n_axis_of_symmetry: supported in E^3 only");
  if (n < 2) throw std::invalid_argument("is_n_axis_of_symmetry: n < 2");
  auto eq = bodies_equal(k, apply_isometry(k, rotation_about_line(line, 2.0 * kPi / n)), tol, ctx);
  return detail::claim_from_equality(n == 2 ? ClaimKind::Axis : ClaimKind::NAxis, n, line, eq, tol);
}

/// K = R(K) for the rotation of order kk about the (d-2)-flat gamma. The
/// starting hyperplane is mathematically irrelevant (the composed map is
/// the same rotation); three choices are run and their residual spread is
/// required to vanish, which guards the implementation.
inline SymmetryClaim is_rotation_coaxis_of_order(const ConvexBody& k, const Flat& gamma,
                                                 int kk, double tol, const Context& ctx = {}) {
  if (gamma.dim() != k.dim() - 2)
    throw std::invalid_argument("is_rotation_coaxis_of_order: gamma must be a (d-2)-flat");
  if (kk < 2) throw std::invalid_argument("is_rotation_coaxis_of_order: order < 2");
  Matrix w = orthonormal_complement(gamma.basis(), k.dim());
  auto rng = make_rng(ctx.seed, 0xc0a715u);
  std::uniform_real_distribution<double> ang(0.0, kPi);
  double worst = -1.0, best = std::numeric_limits<double>::infinity();
  EqualityResult worst_eq;
  for (int trial = 0; trial < 3; ++trial) {
    double phi = ang(rng);
    Vector normal = std::cos(phi) * w.col(0) + std::sin(phi) * w.col(1);
    Flat pi1 = Flat::hyperplane(gamma.base(), normal);
    auto r = rotation_about_coaxis(gamma, kk, pi1, std::max(tol, 1e-9));
    auto eq = bodies_equal(k, apply_isometry(k, r), tol, ctx);
    if (eq.residual > worst) { worst = eq.residual; worst_eq = eq; }
    best = std::min(best, eq.residual);
  }
  if (worst - best > std::max(tol * worst_eq.scale, 1e-10 * worst_eq.scale))
    throw std::runtime_error("is_rotation_coaxis_of_order: residual disagrees across starting hyperplanes");
  return detail::claim_from_equality(ClaimKind::CoaxisOrder, kk, gamma, worst_eq, tol);
}

struct CentralSymmetryResult {
  bool symmetric = false;
  double residual = 0.0;
  double scale = 1.0;
};

/// Central symmetry of a section about a point c on its carrier. S = 2c - S
/// reads h(u) - h(-u) = 2<c,u> on supports, so the residual is
/// sup_u |h(u) - h(-u) - 2<c,u>| over sampled chart directions.
inline CentralSymmetryResult is_centrally_symmetric(const SectionBody& s, const Vector& c,
                                                    double tol, const Context& ctx = {}) {
  if (!s.carrier().contains_point(c, std::max(tol, 1e-9) * std::max(1.0, c.norm())))
    throw std::invalid_argument("is_centrally_symmetric: centre off the carrier flat");
  Vector cc = s.to_chart(c);
  const int kd = s.dim();
  CentralSymmetryResult out;
  double rad = 0.0;
  int count = std::max(8, ctx.section_samples);
  for (const auto& u : unit_directions(kd, count)) {
    double hp = s.body().support(u).value;
    double hm = s.body().support(-u).value;
    rad = std::max(rad, std::max(hp, hm));
    out.residual = std::max(out.residual, std::abs(hp - hm - 2.0 * cc.dot(u)));
  }
  out.scale = std::max(1.0, rad);
  out.symmetric = out.residual <= tol * out.scale;
  return out;
}

enum class KAxisMode { Definition, Mundial };

/// k-axis of symmetry of K, both section routes:
///  - Definition: every sampled (k+1)-flat through Gamma meets K in a
///    section mirror-symmetric across Gamma within the flat.
///  - Mundial: every sampled (d-k)-flat orthogonal to Gamma meets K in a
///    centrally symmetric section about its intersection with Gamma.
inline SymmetryClaim is_k_axis_of_symmetry(const ConvexBody& k, const Flat& gamma,
                                           double tol, KAxisMode mode,
                                           const Context& ctx = {}) {
  const int d = k.dim();
  const int kk = gamma.dim();
  if (kk < 1 || kk > d - 2)
    throw std::invalid_argument("is_k_axis_of_symmetry: flat dimension out of range");

  const double scale = body_scale(k, ctx);
  Matrix comp = orthonormal_complement(gamma.basis(), d); // d x (d-kk)

  auto run = [&](int n_flats, int sweep) {
    double worst = 0.0;
    std::vector<std::pair<Vector, double>> wit;
    int used = 0;
    if (mode == KAxisMode::Definition) {
      auto ws = unit_directions(int(comp.cols()), n_flats);
      for (const auto& wdir : ws) {
        Vector w = comp * wdir;
        Matrix dirs(d, kk + 1);
        dirs.leftCols(kk) = gamma.basis();
        dirs.col(kk) = w;
        Flat lambda(gamma.base(), dirs);
        auto chart_dirs = unit_directions(kk + 1, sweep);
        auto sweep1 = section_sweep(k, lambda, chart_dirs);
        if (!sweep1) continue; // lambda misses K
        // mirror across Gamma inside the chart flips the w-coordinate
        std::vector<Vector> mirrored;
        mirrored.reserve(chart_dirs.size());
        for (auto u : chart_dirs) {
          u[kk] = -u[kk];
          mirrored.push_back(u);
        }
        auto sweep2 = section_sweep(k, lambda, mirrored);
        if (!sweep2) continue;
        double local = 0.0;
        for (size_t i = 0; i < chart_dirs.size(); ++i)
          local = std::max(local, std::abs((*sweep1)[i].value - (*sweep2)[i].value));
        ++used;
        if (local > worst) worst = local;
        if (local > tol * scale) wit.push_back({w, local});
      }
    } else {
      // extent of K along gamma's directions, for anchor sampling
      std::vector<std::pair<double, double>> extent;
      for (int j = 0; j < kk; ++j) {
        Vector g = gamma.basis().col(j);
        double hi = k.support(g).value - g.dot(gamma.base());
        double lo = -(k.support(-g).value + g.dot(gamma.base()));
        extent.push_back({lo, hi});
      }
      const double g2 = 1.2207440846057596;
      for (int i = 0; i < n_flats; ++i) {
        Vector q = gamma.base();
        for (int j = 0; j < kk; ++j) {
          double t = std::fmod(0.5 + (i + 1) / std::pow(g2, j + 1), 1.0);
          auto [lo, hi] = extent[j];
          q += (lo + (0.08 + 0.84 * t) * (hi - lo)) * gamma.basis().col(j);
        }
        Flat omega(q, comp);
        auto chart_dirs = unit_directions(int(comp.cols()), sweep / 2 + 1);
        auto sweep1 = section_sweep(k, omega, chart_dirs);
        if (!sweep1) continue;
        std::vector<Vector> neg;
        neg.reserve(chart_dirs.size());
        for (const auto& u : chart_dirs) neg.push_back(-u);
        auto sweep2 = section_sweep(k, omega, neg);
        if (!sweep2) continue;
        double local = 0.0;
        // chart origin is q = omega ∩ gamma, so central symmetry about it
        // reads |h(u) - h(-u)|
        for (size_t i = 0; i < chart_dirs.size(); ++i)
          local = std::max(local, std::abs((*sweep1)[i].value - (*sweep2)[i].value));
        ++used;
        if (local > worst) worst = local;
        if (local > tol * scale) wit.push_back({q, local});
      }
    }
    return std::tuple<double, std::vector<std::pair<Vector, double>>, int>(worst, wit, used);
  };

  auto [worst, wit, used] = run(ctx.flat_samples, ctx.section_samples);
  // adaptive escalation near the decision boundary
  if (worst > 0.5 * tol * scale && worst < 2.0 * tol * scale) {
    auto [w2, wit2, used2] = run(2 * ctx.flat_samples, 2 * ctx.section_samples);
    worst = std::max(worst, w2);
    for (auto& e : wit2) wit.push_back(e);
    used += used2;
  }

  SymmetryClaim c;
  c.kind = ClaimKind::KAxis;
  c.order = kk;
  c.flat = gamma;
  c.residual = worst;
  c.scale = scale;
  c.verdict = worst <= tol * scale;
  if (!c.verdict) {
    std::sort(wit.begin(), wit.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });
    if (wit.size() > 3) wit.resize(3);
    c.witnesses = std::move(wit);
  }
  return c;
}

/// Circumsphere centre; all verified symmetry flats must pass through it
/// (circumsphere uniqueness), which downstream searches exploit.
inline Vector circumsphere_prune(const ConvexBody& k, const Context& ctx = {}) {
  return minimum_enclosing_ball(k, ctx).center;
}

namespace detail {

/// Quick vertex-level rejection for candidate polytope symmetries.
inline bool polytope_quick_reject(const std::vector<Vector>& verts, const Isometry& t,
                                  double slack, int probe = 12) {
  int n = int(verts.size());
  int step = std::max(1, n / probe);
  for (int i = 0; i < n; i += step) {
    Vector img = t(verts[i]);
    double nn = std::numeric_limits<double>::infinity();
    for (const auto& v : verts) {
      nn = std::min(nn, (img - v).norm());
      if (nn <= slack) break;
    }
    if (nn > slack) return true;
  }
  return false;
}

inline void dedup_push_line(std::vector<Vector>& dirs, const Vector& dir, double tol) {
  for (const auto& e : dirs) {
    double c = std::abs(e.dot(dir));
    if (c >= 1.0 - tol) return;
  }
  dirs.push_back(dir);
}

} // namespace detail

/// Candidate axis lines for polytope symmetry search. Any finite symmetry
/// permutes vertices, so its fixed line passes through the circumcentre and
/// through a vertex, a vertex-pair midpoint, or (order >= 3 exits through a
/// facet) a facet vertex-barycentre.
inline std::vector<Vector> polytope_axis_candidates(const ConvexBody& k, const Vector& center,
                                                    double tol, const Context& ctx = {}) {
  const auto& verts = k.vertices();
  const double scale = body_scale(k, ctx);
  std::vector<Vector> dirs;
  auto add_point = [&](const Vector& p) {
    Vector d = p - center;
    double n = d.norm();
    if (n > 1e-7 * scale) detail::dedup_push_line(dirs, d / n, 1e-10);
  };
  for (const auto& v : verts) add_point(v);
  if (k.dim() == 3 && int(verts.size()) <= 200) {
    for (const auto& f : enumerate_facets(verts, 1e-9)) {
      Vector bary = Vector::Zero(3);
      for (int v : f.verts) bary += verts[v];
      add_point(bary / double(f.verts.size()));
    }
  }
  for (size_t i = 0; i < verts.size(); ++i)
    for (size_t j = i + 1; j < verts.size(); ++j)
      add_point(0.5 * (verts[i] + verts[j]));
  return dirs;
}

/// Axis detection. Polytopes: combinatorial candidates, verified by the
/// vertex-matching equality test; in E^3 each line reports its largest
/// rotation order in {2..8}. Oracles: residual minimization of the
/// involution mismatch over a directional grid with local polish.
inline std::vector<SymmetryClaim> detect_axes(const ConvexBody& k, int budget, double tol,
                                              const Context& ctx = {}) {
  if (budget < 1) throw std::invalid_argument("detect_axes: budget < 1");
  const int d = k.dim();
  const Vector center = circumsphere_prune(k, ctx);
  std::vector<SymmetryClaim> found;

  auto push_claim = [&](SymmetryClaim c) {
    for (const auto& e : found)
      if (e.flat.same_span(c.flat, 1e-7)) return;
    found.push_back(std::move(c));
  };

  if (k.is_polytope()) {
    const auto& verts = k.vertices();
    const double scale = body_scale(k, ctx);
    auto cands = polytope_axis_candidates(k, center, tol, ctx);
    if (int(cands.size()) > budget) cands.resize(budget);
    for (const auto& dir : cands) {
      Flat line = Flat::line(center, dir);
      int best_order = 0;
      SymmetryClaim best_claim;
      const int n_max = (d == 3) ? 8 : 2;
      for (int n = 2; n <= n_max; ++n) {
        Isometry t = (d == 3) ? rotation_about_line(line, 2.0 * kPi / n) : axis_involution(line);
        if (detail::polytope_quick_reject(verts, t, tol * scale)) continue;
        auto eq = bodies_equal(k, apply_isometry(k, t), tol, ctx);
        if (eq.equal) {
          best_order = n;
          best_claim = detail::claim_from_equality(
              n == 2 ? ClaimKind::Axis : ClaimKind::NAxis, n, line, eq, tol);
        }
      }
      if (best_order >= 2) push_claim(best_claim);
    }
    return found;
  }

  // oracle: grid + polish on the involution residual, reduced sweeps
  const double scale = body_scale(k, ctx);
  auto reduced_residual = [&](const Vector& dir, int samples) {
    Isometry t = axis_involution(Flat::line(center, dir));
    double worst = 0.0;
    for (const auto& u : unit_directions(d, samples)) {
      double h1 = k.support(u).value;
      double h2 = k.support(t.linear().transpose() * u).value + t.shift().dot(u);
      worst = std::max(worst, std::abs(h1 - h2));
    }
    return worst;
  };

  struct Cand {
    Vector dir;
    double res;
  };
  std::vector<Cand> grid;
  for (const auto& u : unit_directions(d, std::max(16, budget)))
    grid.push_back({u, reduced_residual(u, 128)});
  std::sort(grid.begin(), grid.end(), [](const Cand& a, const Cand& b) { return a.res < b.res; });

  int polish = std::min<int>(12, int(grid.size()));
  for (int i = 0; i < polish; ++i) {
    auto [dir, res] = minimize_on_sphere(
        [&](const Vector& u) { return reduced_residual(u, 256); }, grid[i].dir, 0.1);
    if (res > 4 * tol * scale) continue;
    Flat line = Flat::line(center, dir);
    auto claim = is_axis_of_symmetry(k, line, tol, ctx);
    if (!claim.verdict) continue;
    if (d == 3) {
      for (int n = 8; n >= 3; --n) {
        auto cn = is_n_axis_of_symmetry(k, line, n, tol, ctx);
        if (cn.verdict) { claim = cn; break; }
      }
    }
    push_claim(claim);
    if (int(found.size()) >= budget) break;
  }
  return found;
}

/// Hyperplane-of-symmetry search (internal harness for the classify
/// pipelines). Polytopes: bisector normals of vertex pairs; oracles:
/// reflection-residual grid plus polish.
inline std::vector<SymmetryClaim> detect_hyperplanes(const ConvexBody& k, int budget,
                                                     double tol, const Context& ctx = {}) {
  const int d = k.dim();
  const Vector center = circumsphere_prune(k, ctx);
  std::vector<SymmetryClaim> found;
  auto push_claim = [&](SymmetryClaim c) {
    for (const auto& e : found)
      if (e.flat.same_span(c.flat, 1e-7)) return;
    found.push_back(std::move(c));
  };

  if (k.is_polytope()) {
    const auto& verts = k.vertices();
    const double scale = body_scale(k, ctx);
    std::vector<Vector> normals;
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j) {
        Vector nrm = verts[i] - verts[j];
        double n = nrm.norm();
        if (n > 1e-9 * scale) detail::dedup_push_line(normals, nrm / n, 1e-10);
      }
    if (int(normals.size()) > budget) normals.resize(budget);
    for (const auto& nrm : normals) {
      Flat pi = Flat::hyperplane(center, nrm);
      if (detail::polytope_quick_reject(verts, reflect_hyperplane(pi), tol * scale)) continue;
      auto claim = is_hyperplane_of_symmetry(k, pi, tol, ctx);
      if (claim.verdict) push_claim(claim);
    }
    return found;
  }

  const double scale = body_scale(k, ctx);
  auto reduced_residual = [&](const Vector& nrm, int samples) {
    Isometry t = reflect_hyperplane(Flat::hyperplane(center, nrm));
    double worst = 0.0;
    for (const auto& u : unit_directions(d, samples)) {
      double h1 = k.support(u).value;
      double h2 = k.support(t.linear().transpose() * u).value + t.shift().dot(u);
      worst = std::max(worst, std::abs(h1 - h2));
    }
    return worst;
  };
  struct Cand {
    Vector dir;
    double res;
  };
  std::vector<Cand> grid;
  for (const auto& u : unit_directions(d, std::max(16, budget)))
    grid.push_back({u, reduced_residual(u, 128)});
  std::sort(grid.begin(), grid.end(), [](const Cand& a, const Cand& b) { return a.res < b.res; });
  int polish = std::min<int>(16, int(grid.size()));
  for (int i = 0; i < polish; ++i) {
    auto [dir, res] = minimize_on_sphere(
        [&](const Vector& u) { return reduced_residual(u, 256); }, grid[i].dir, 0.1);
    if (res > 4 * tol * scale) continue;
    auto claim = is_hyperplane_of_symmetry(k, Flat::hyperplane(center, dir), tol, ctx);
    if (claim.verdict) push_claim(claim);
    if (int(found.size()) >= budget) break;
  }
  return found;
}

/// All mirror lines of a planar figure through its circumcentre, as a Star.
/// The collection of a figure's mirror lines is equally spaced (a star),
/// which is verified on the result.
inline Star orthogonal_symmetry_lines(const SectionBody& f, double tol,
                                      const Context& ctx = {}) {
  if (f.dim() != 2)
    throw std::invalid_argument("orthogonal_symmetry_lines: figure must be planar");
  const ConvexBody& body = f.body();
  Ball circ = minimum_enclosing_ball(body, ctx);
  const Vector c = circ.center;
  const double scale = std::max(1.0, circ.radius);

  // support profile on a fine grid of the circle
  const int grid = 2048;
  std::vector<double> h(grid);
  for (int i = 0; i < grid; ++i) {
    double a = 2.0 * kPi * i / grid;
    Vector u(2);
    u << std::cos(a), std::sin(a);
    h[i] = body.support(u).value - c.dot(u); // recentred profile
  }
  auto h_at = [&](double a) {
    double t = a / (2.0 * kPi) * grid;
    t = std::fmod(t, double(grid));
    if (t < 0) t += grid;
    int lo = int(t) % grid;
    int hi = (lo + 1) % grid;
    double w = t - std::floor(t);
    return (1 - w) * h[lo] + w * h[hi];
  };
  // mirror residual on the interpolated profile
  auto coarse_res = [&](double phi) {
    double worst = 0.0;
    for (int i = 0; i < grid; i += 4) {
      double a = 2.0 * kPi * i / grid;
      worst = std::max(worst, std::abs(h[i] - h_at(2.0 * phi - a)));
    }
    return worst;
  };
  auto exact_res = [&](double phi) {
    double worst = 0.0;
    Vector dir(2);
    dir << std::cos(phi), std::sin(phi);
    Isometry t = reflect_hyperplane(Flat::line(c, dir)); // a line is a hyperplane in E^2
    for (const auto& u : unit_directions(2, 128)) {
      double h1 = body.support(u).value;
      double h2 = body.support(t.linear().transpose() * u).value + t.shift().dot(u);
      worst = std::max(worst, std::abs(h1 - h2));
    }
    return worst;
  };

  const int scan = 1024;
  std::vector<double> res(scan);
  for (int i = 0; i < scan; ++i) res[i] = coarse_res(kPi * i / scan);
  std::vector<double> lines;
  for (int i = 0; i < scan; ++i) {
    double phi = kPi * i / scan;
    double prev = res[(i - 1 + scan) % scan];
    double cur = res[i];
    double next = res[(i + 1) % scan];
    // candidate threshold sits above the profile-interpolation error
    // (significant near polygon vertices); the exact residual filters
    if (cur <= prev && cur <= next && cur < 0.02 * scale) {
      auto [lo, hi] = std::make_pair(phi - kPi / scan, phi + kPi / scan);
      auto [best_phi, neg] = golden_max([&](double p) { return -exact_res(p); }, lo, hi);
      if (-neg <= tol * scale) {
        double norm = normalize_angle_mod_pi(best_phi);
        bool dup = false;
        for (double e : lines) {
          double diff = std::abs(e - norm);
          diff = std::min(diff, kPi - diff);
          if (diff < 1e-6) dup = true;
        }
        if (!dup) lines.push_back(norm);
      }
    }
  }
  std::sort(lines.begin(), lines.end());

  Star star;
  star.apex = f.to_ambient(c);
  star.plane = f.carrier();
  star.angles = lines;
  for (double a : lines) {
    Vector dir = std::cos(a) * f.carrier().basis().col(0) + std::sin(a) * f.carrier().basis().col(1);
    star.lines.push_back(Flat::line(star.apex, dir));
  }
  const int n = int(lines.size());
  star.n = n;
  if (n == 0) {
    star.classification = StarClass::Undecided;
    return star;
  }
  bool equal = true;
  for (int i = 0; i < n; ++i) {
    double gap = (i + 1 < n) ? lines[i + 1] - lines[i] : lines[0] + kPi - lines[n - 1];
    if (std::abs(gap - kPi / n) > 1e-6) equal = false;
  }
  star.classification = equal ? StarClass::NStar : StarClass::Undecided;
  star.max_gap = kPi / std::max(1, n);
  return star;
}

} // namespace convexsym
