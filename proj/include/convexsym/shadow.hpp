#pragma once

#include "convexsym/polytope_faces.hpp"
#include "convexsym/section.hpp"

namespace convexsym {

enum class Membership { In, Out, Undecided };

/// Shadow boundary of K with respect to a flat Gamma: boundary points lying
/// on a supporting plane parallel to Gamma. A smooth boundary point x with
/// outward normal u belongs iff u is orthogonal to Gamma's direction space.
/// For polytopes the object also carries the facets wholly inside the set.
class ShadowBoundary {
 public:
  ShadowBoundary(ConvexBody k, Flat gamma, double tol, const Context& ctx)
      : body_(std::move(k)), gamma_(std::move(gamma)), tol_(tol) {
    scale_ = body_scale(body_, ctx);
    if (body_.is_polytope()) {
      facets_ = enumerate_facets(body_.vertices(), 1e-9);
      for (size_t i = 0; i < facets_.size(); ++i)
        if (normal_violation(facets_[i].normal) <= tol_) shadow_facets_.push_back(int(i));
    }
  }

  const Flat& gamma() const { return gamma_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<int>& shadow_facets() const { return shadow_facets_; }

  /// max_j |<u, g_j>| over Gamma's direction basis; zero for members.
  double normal_violation(const Vector& unit_normal) const {
    double worst = 0.0;
    for (int j = 0; j < gamma_.dim(); ++j)
      worst = std::max(worst, std::abs(unit_normal.dot(gamma_.basis().col(j))));
    return worst;
  }

  /// Membership of a boundary point. Smooth oracles decide through the
  /// normal; polytopes through the normal cone of the active facets;
  /// non-smooth oracle points stay undecided.
  Membership classify(const Vector& x, const std::optional<Vector>& normal = std::nullopt) const {
    if (normal) return normal_violation(normal->normalized()) <= tol_ ? Membership::In : Membership::Out;
    if (!body_.is_polytope()) return Membership::Undecided;
    std::vector<int> active;
    for (size_t i = 0; i < facets_.size(); ++i)
      if (std::abs(facets_[i].normal.dot(x) - facets_[i].offset) <= tol_ * scale_)
        active.push_back(int(i));
    if (active.empty()) return Membership::Out; // not a boundary point
    return cone_meets_orthogonal(active) ? Membership::In : Membership::Out;
  }

  /// Does the cone spanned by the given facet normals contain a nonzero
  /// vector orthogonal to Gamma? LP feasibility over cone coefficients.
  bool cone_meets_orthogonal(const std::vector<int>& facet_ids) const {
    const int d = body_.dim();
    Matrix w = orthonormal_complement(gamma_.basis(), d); // d x (d-g)
    const int m = int(facet_ids.size());
    // coefficients lambda >= 0, sum lambda = 1, <sum lambda n_i, g_j> = 0;
    // then require some coordinate of w' (sum lambda n_i) bounded away from 0.
    for (int col = 0; col < w.cols(); ++col) {
      for (double sign : {1.0, -1.0}) {
        Matrix a(gamma_.dim() + 1, m);
        Vector b(gamma_.dim() + 1);
        Vector c(m);
        for (int j = 0; j < m; ++j) {
          const Vector& nj = facets_[facet_ids[j]].normal;
          for (int g = 0; g < gamma_.dim(); ++g) a(g, j) = gamma_.basis().col(g).dot(nj);
          a(gamma_.dim(), j) = 1.0;
          c[j] = sign * w.col(col).dot(nj);
        }
        b.setZero();
        b[gamma_.dim()] = 1.0;
        SimplexSolver lp;
        auto res = lp.maximize(a, b, c);
        if (res.status == LpStatus::Optimal && res.objective > 1e-9) return true;
      }
    }
    return false;
  }

 private:
  ConvexBody body_;
  Flat gamma_;
  double tol_;
  double scale_ = 1.0;
  std::vector<Facet> facets_;
  std::vector<int> shadow_facets_;
};

inline ShadowBoundary shadow_boundary(const ConvexBody& k, const Flat& gamma,
                                      double tol, const Context& ctx = {}) {
  if (gamma.dim() < 1 || gamma.dim() > k.dim() - 1)
    throw std::invalid_argument("shadow_boundary: flat dimension out of range");
  return ShadowBoundary(k, gamma, tol, ctx);
}

/// No boundary segment parallel to Gamma lies inside the shadow boundary.
/// Polytopes: check every boundary segment whose direction sits inside
/// Gamma's direction space. Smooth strictly convex oracles contain no
/// segments at all.
inline bool is_segment_free(const ConvexBody& k, const Flat& gamma,
                            double tol, const Context& ctx = {}) {
  if (!k.is_polytope()) {
    if (k.smooth()) return true;
    throw std::invalid_argument("is_segment_free: non-smooth oracle unsupported");
  }
  ShadowBoundary sb = shadow_boundary(k, gamma, tol, ctx);
  const auto& verts = k.vertices();
  double scale = body_scale(k, ctx);
  auto segs = boundary_segments(verts, sb.facets());
  Matrix g = gamma.basis();
  for (auto [i, j] : segs) {
    Vector dir = verts[j] - verts[i];
    double off = (dir - g * (g.transpose() * dir)).norm();
    if (off > tol * scale) continue; // not parallel to Gamma
    // facets containing both endpoints span the segment's normal cone
    std::vector<int> common;
    const auto& fs = sb.facets();
    for (size_t f = 0; f < fs.size(); ++f) {
      bool has_i = false, has_j = false;
      for (int v : fs[f].verts) {
        has_i |= (v == i);
        has_j |= (v == j);
      }
      if (has_i && has_j) common.push_back(int(f));
    }
    if (!common.empty() && sb.cone_meets_orthogonal(common)) return false;
  }
  return true;
}

} // namespace convexsym
