#pragma once

#include <vector>

#include "convexsym/body.hpp"

namespace convexsym {

struct Facet {
  Vector normal;          // unit outward
  double offset = 0.0;    // <normal, x> = offset on the facet
  std::vector<int> verts; // indices into the vertex list
};

/// Facets of a V-polytope by brute enumeration of d-subsets. Fine at this
/// library's scale (tests run with at most ~150 vertices in d=3, ~80 in
/// d=4); throws beyond a hard cap rather than stalling.
inline std::vector<Facet> enumerate_facets(const std::vector<Vector>& verts,
                                           double tol = 1e-9) {
  const int d = int(verts[0].size());
  const int n = int(verts.size());
  const int cap = (d <= 3) ? 260 : 110;
  if (n > cap) throw std::invalid_argument("enumerate_facets: too many vertices for brute enumeration");
  double scale = 1.0;
  for (const auto& v : verts) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
  const double eps = tol * scale;

  std::vector<Facet> facets;
  auto known = [&](const Vector& nrm, double off) {
    for (const auto& f : facets)
      if ((f.normal - nrm).norm() < 1e-7 && std::abs(f.offset - off) < 1e-7 * scale) return true;
    return false;
  };

  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  auto advance = [&]() {
    int i = d - 1;
    while (i >= 0 && idx[i] == n - d + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  };

  do {
    Vector nrm(d);
    if (d == 3) {
      Eigen::Vector3d a = verts[idx[1]] - verts[idx[0]];
      Eigen::Vector3d b = verts[idx[2]] - verts[idx[0]];
      Eigen::Vector3d c = a.cross(b);
      double cn = c.norm();
      if (cn < 1e-12 * scale * scale) continue;
      nrm = c / cn;
    } else {
      Matrix diffs(d, d - 1);
      for (int j = 1; j < d; ++j) diffs.col(j - 1) = verts[idx[j]] - verts[idx[0]];
      Matrix span = orthonormalize(diffs, 1e-9);
      if (span.cols() != d - 1) continue; // affinely dependent subset
      nrm = orthonormal_complement(span, d).col(0);
    }
    double off = nrm.dot(verts[idx[0]]);
    int above = 0, below = 0;
    for (int v = 0; v < n && (above == 0 || below == 0); ++v) {
      double s = nrm.dot(verts[v]) - off;
      if (s > eps) ++above;
      else if (s < -eps) ++below;
    }
    if (above > 0 && below > 0) continue;
    if (above > 0) { nrm = -nrm; off = -off; }
    if (known(nrm, off)) continue;
    Facet f;
    f.normal = nrm;
    f.offset = off;
    for (int v = 0; v < n; ++v)
      if (std::abs(nrm.dot(verts[v]) - off) <= eps) f.verts.push_back(v);
    facets.push_back(std::move(f));
  } while (advance());
  return facets;
}

/// Vertex pairs spanning boundary segments: pairs sharing at least one facet.
inline std::vector<std::pair<int, int>> boundary_segments(
    const std::vector<Vector>& verts, const std::vector<Facet>& facets) {
  const int n = int(verts.size());
  std::vector<std::vector<char>> shared(n, std::vector<char>(n, 0));
  for (const auto& f : facets)
    for (size_t a = 0; a < f.verts.size(); ++a)
      for (size_t b = a + 1; b < f.verts.size(); ++b)
        shared[f.verts[a]][f.verts[b]] = 1;
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (shared[i][j]) out.emplace_back(i, j);
  return out;
}

/// Edges in d=3: vertex pairs lying on >= 2 common facets.
inline std::vector<std::pair<int, int>> polytope_edges3(
    const std::vector<Vector>& verts, const std::vector<Facet>& facets) {
  const int n = int(verts.size());
  std::vector<std::vector<int>> count(n, std::vector<int>(n, 0));
  for (const auto& f : facets)
    for (size_t a = 0; a < f.verts.size(); ++a)
      for (size_t b = a + 1; b < f.verts.size(); ++b)
        ++count[f.verts[a]][f.verts[b]];
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (count[i][j] >= 2) out.emplace_back(i, j);
  return out;
}

} // namespace convexsym
