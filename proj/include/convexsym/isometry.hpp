#pragma once

#include <stdexcept>

#include "convexsym/flats.hpp"

namespace convexsym {

/// Rigid motion x -> Ax + b with A orthogonal (det +1 or -1).
class Isometry {
 public:
  Isometry(Matrix linear, Vector shift, double ortho_tol = 1e-12)
      : linear_(std::move(linear)), shift_(std::move(shift)) {
    const int d = int(shift_.size());
    if (linear_.rows() != d || linear_.cols() != d)
      throw std::invalid_argument("Isometry: non-square linear part");
    double err = (linear_.transpose() * linear_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (err > 64 * ortho_tol)
      throw std::invalid_argument("Isometry: linear part not orthogonal");
  }

  static Isometry identity(int d) { return Isometry(Matrix::Identity(d, d), Vector::Zero(d)); }

  static Isometry translation(Vector b) {
    const int d = int(b.size());
    return Isometry(Matrix::Identity(d, d), std::move(b));
  }

  int dim() const { return int(shift_.size()); }
  const Matrix& linear() const { return linear_; }
  const Vector& shift() const { return shift_; }
  double det() const { return linear_.determinant(); }

  Vector operator()(const Vector& x) const { return linear_ * x + shift_; }

  /// (*this) after g: x -> this(g(x)).
  Isometry compose(const Isometry& g) const {
    return Isometry(linear_ * g.linear_, linear_ * g.shift_ + shift_);
  }

  Isometry inverse() const {
    Matrix at = linear_.transpose();
    return Isometry(at, -(at * shift_));
  }

 private:
  Matrix linear_;
  Vector shift_;
};

/// Isometry fixing the flat pointwise and negating its orthogonal
/// complement. On lines this is the axis map R_L, on hyperplanes the
/// reflection S_Pi.
inline Isometry flat_involution(const Flat& gamma) {
  const int d = gamma.ambient_dim();
  Matrix p = gamma.dim() > 0 ? Matrix(gamma.basis() * gamma.basis().transpose())
                             : Matrix::Zero(d, d);
  Matrix a = 2.0 * p - Matrix::Identity(d, d);
  return Isometry(a, gamma.base() - a * gamma.base());
}

/// S_Pi, the reflection across a hyperplane.
inline Isometry reflect_hyperplane(const Flat& pi) {
  if (pi.dim() != pi.ambient_dim() - 1)
    throw std::invalid_argument("reflect_hyperplane: flat is not a hyperplane");
  return flat_involution(pi);
}

/// R_L: identity on the line, x -> -x on the orthogonal complement.
inline Isometry axis_involution(const Flat& line) {
  if (line.dim() != 1)
    throw std::invalid_argument("axis_involution: flat is not a line");
  return flat_involution(line);
}

/// Rotation about a line by theta (E^3 only). Rodrigues form.
inline Isometry rotation_about_line(const Flat& line, double theta) {
  if (line.ambient_dim() != 3)
    throw std::invalid_argument("rotation_about_line: supported in E^3 only");
  if (line.dim() != 1)
    throw std::invalid_argument("rotation_about_line: flat is not a line");
  const Vector u = line.direction();
  Matrix k(3, 3);
  k << 0, -u[2], u[1],
       u[2], 0, -u[0],
       -u[1], u[0], 0;
  Matrix a = Matrix::Identity(3, 3) + std::sin(theta) * k + (1.0 - std::cos(theta)) * (k * k);
  return Isometry(a, line.base() - a * line.base());
}

/// R = S_{Pi2} o S_{Pi1} where Pi2 also contains gamma and the two unit
/// normals make an angle pi/k: a rotation of order k about the
/// (d-2)-flat gamma.
inline Isometry rotation_about_coaxis(const Flat& gamma, int k, const Flat& pi1,
                                      double tol = 1e-9) {
  const int d = gamma.ambient_dim();
  if (gamma.dim() != d - 2)
    throw std::invalid_argument("rotation_about_coaxis: gamma must be a (d-2)-flat");
  if (pi1.dim() != d - 1)
    throw std::invalid_argument("rotation_about_coaxis: pi1 must be a hyperplane");
  if (k < 2) throw std::invalid_argument("rotation_about_coaxis: order k < 2");
  if (!flat_contains(pi1, gamma, tol))
    throw std::invalid_argument("rotation_about_coaxis: gamma not contained in pi1");

  // The plane orthogonal to gamma carries both normals.
  Matrix w = orthonormal_complement(gamma.basis(), d); // d x 2
  Vector u1 = pi1.normal();
  u1 = (w * (w.transpose() * u1)).normalized(); // numerically inside the 2-plane
  Vector u1c = w.transpose() * u1;              // coords in the 2-plane
  Vector u2c(2);
  u2c << std::cos(kPi / k) * u1c[0] - std::sin(kPi / k) * u1c[1],
         std::sin(kPi / k) * u1c[0] + std::cos(kPi / k) * u1c[1];
  Vector u2 = w * u2c;

  Flat pi2 = Flat::hyperplane(gamma.base(), u2);
  Isometry r = reflect_hyperplane(pi2).compose(reflect_hyperplane(pi1));
  return r;
}

} // namespace convexsym
