#pragma once

#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "convexsym/numerics.hpp"

namespace convexsym {

/// Affine k-flat: a base point plus an orthonormal direction basis.
/// k = 0 is a point, k = 1 a line, k = d-1 a hyperplane.
class Flat {
 public:
  Flat(Vector base, Matrix directions)
      : base_(std::move(base)) {
    if (directions.rows() != base_.size())
      throw std::invalid_argument("Flat: direction/base dimension mismatch");
    basis_ = orthonormalize(directions);
    if (basis_.cols() != directions.cols())
      throw std::invalid_argument("Flat: degenerate direction basis");
  }

  static Flat point(Vector p) {
    Matrix none(p.size(), 0);
    return Flat(std::move(p), none, 0);
  }

  static Flat line(Vector p, const Vector& dir) {
    Matrix b(p.size(), 1);
    b.col(0) = dir;
    return Flat(std::move(p), b);
  }

  static Flat hyperplane(Vector p, const Vector& normal) {
    if (normal.norm() < 1e-14)
      throw std::invalid_argument("Flat::hyperplane: zero normal");
    Matrix n(p.size(), 1);
    n.col(0) = normal.normalized();
    Matrix dirs = orthonormal_complement(n, int(p.size()));
    return Flat(std::move(p), dirs, int(dirs.cols()));
  }

  int ambient_dim() const { return int(base_.size()); }
  int dim() const { return int(basis_.cols()); }
  const Vector& base() const { return base_; }
  const Matrix& basis() const { return basis_; }

  /// Orthogonal projection of x onto the flat.
  Vector project(const Vector& x) const {
    return base_ + basis_ * (basis_.transpose() * (x - base_));
  }

  double distance(const Vector& x) const { return (x - project(x)).norm(); }

  bool contains_point(const Vector& x, double tol) const {
    return distance(x) <= tol;
  }

  /// Is the direction vector v inside the flat's direction space?
  bool contains_direction(const Vector& v, double tol) const {
    return (v - basis_ * (basis_.transpose() * v)).norm() <= tol * std::max(1.0, v.norm());
  }

  /// Equality as affine spans: membership both ways within tol.
  bool same_span(const Flat& other, double tol) const {
    if (other.ambient_dim() != ambient_dim() || other.dim() != dim()) return false;
    if (!contains_point(other.base_, tol) || !other.contains_point(base_, tol)) return false;
    for (int j = 0; j < basis_.cols(); ++j)
      if (!other.contains_direction(basis_.col(j), tol)) return false;
    return true;
  }

  /// Unit normal for a hyperplane (dim d-1).
  Vector normal() const {
    if (dim() != ambient_dim() - 1)
      throw std::invalid_argument("Flat::normal: not a hyperplane");
    return orthonormal_complement(basis_, ambient_dim()).col(0);
  }

  /// Line direction (dim 1).
  Vector direction() const {
    if (dim() != 1) throw std::invalid_argument("Flat::direction: not a line");
    return basis_.col(0);
  }

 private:
  Flat(Vector base, Matrix orthonormal_basis, int) : base_(std::move(base)), basis_(std::move(orthonormal_basis)) {}

  Vector base_;
  Matrix basis_; // d x k, orthonormal columns
};

/// Smallest flat containing all inputs.
inline Flat affine_hull(const std::vector<Flat>& flats) {
  if (flats.empty()) throw std::invalid_argument("affine_hull: empty input");
  const int d = flats[0].ambient_dim();
  int total = 0;
  for (const auto& f : flats) {
    if (f.ambient_dim() != d) throw std::invalid_argument("affine_hull: mixed ambient dims");
    total += f.dim() + 1;
  }
  Matrix dirs(d, total);
  int c = 0;
  for (const auto& f : flats) {
    for (int j = 0; j < f.dim(); ++j) dirs.col(c++) = f.basis().col(j);
    dirs.col(c++) = f.base() - flats[0].base();
  }
  Matrix basis = orthonormalize(dirs.leftCols(c));
  return Flat(flats[0].base(), basis);
}

inline Flat affine_hull(std::initializer_list<Flat> flats) {
  return affine_hull(std::vector<Flat>(flats));
}

/// The (d-k)-flat orthogonal to lambda, anchored at p.
inline Flat orth_complement(const Flat& lambda, const Vector& p) {
  Matrix comp = orthonormal_complement(lambda.basis(), lambda.ambient_dim());
  return Flat(p, comp);
}

/// Angle between two (unoriented) lines, folded to [0, pi/2].
inline double angle_between_lines(const Flat& l1, const Flat& l2) {
  if (l1.dim() != 1 || l2.dim() != 1)
    throw std::invalid_argument("angle_between_lines: inputs must be lines");
  double c = std::abs(l1.direction().dot(l2.direction()));
  return std::acos(std::clamp(c, 0.0, 1.0));
}

inline bool is_perpendicular(const Flat& l1, const Flat& l2, double tol) {
  return std::abs(l1.direction().dot(l2.direction())) <= tol;
}

/// Is gamma contained in lambda (as sets), within tol?
inline bool flat_contains(const Flat& lambda, const Flat& gamma, double tol) {
  if (!lambda.contains_point(gamma.base(), tol)) return false;
  for (int j = 0; j < gamma.dim(); ++j)
    if (!lambda.contains_direction(gamma.basis().col(j), tol)) return false;
  return true;
}

} // namespace convexsym
