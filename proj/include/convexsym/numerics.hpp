#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "convexsym/context.hpp"

namespace convexsym {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Orthonormalization

/// Modified Gram-Schmidt with one re-orthogonalization pass. Columns below
/// `rank_tol` (relative to the largest input norm) are dropped; returns an
/// orthonormal basis of the span.
inline Matrix orthonormalize(const Matrix& cols, double rank_tol = 1e-10) {
  const int d = int(cols.rows());
  Matrix out(d, cols.cols());
  int r = 0;
  double scale = 0.0;
  for (int j = 0; j < cols.cols(); ++j) scale = std::max(scale, cols.col(j).norm());
  if (scale == 0.0) return Matrix(d, 0);
  for (int j = 0; j < cols.cols(); ++j) {
    Vector v = cols.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < r; ++i) v -= out.col(i).dot(v) * out.col(i);
    double n = v.norm();
    if (n > rank_tol * scale) out.col(r++) = v / n;
  }
  return out.leftCols(r);
}

/// Orthonormal basis of the orthogonal complement of span(cols) in E^d.
inline Matrix orthonormal_complement(const Matrix& cols, int d) {
  if (cols.cols() == 0) return Matrix::Identity(d, d);
  Eigen::HouseholderQR<Matrix> qr(cols);
  Matrix q = qr.householderQ();
  return q.rightCols(d - cols.cols());
}

/// Principal angles between two subspaces given by orthonormal bases.
inline std::vector<double> principal_angles(const Matrix& a, const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(a.transpose() * b);
  std::vector<double> out;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    out.push_back(std::acos(std::clamp(svd.singularValues()[i], -1.0, 1.0)));
  return out;
}

inline double max_principal_angle(const Matrix& a, const Matrix& b) {
  auto ang = principal_angles(a, b);
  return ang.empty() ? 0.0 : *std::max_element(ang.begin(), ang.end());
}

// ---------------------------------------------------------------------------
// Quasi-uniform unit directions

/// Deterministic quasi-uniform sample of the unit sphere S^{dim-1}.
/// dim 2: equal angles; dim 3: Fibonacci spiral; dim 4: Shoemake map of a
/// Kronecker (plastic-constant) lattice. Higher dims fall back to a seeded
/// normal sample.
inline std::vector<Vector> unit_directions(int dim, int n) {
  std::vector<Vector> dirs;
  dirs.reserve(n);
  if (dim == 1) {
    Vector v(1);
    v[0] = 1.0;
    dirs.push_back(v);
    v[0] = -1.0;
    if (n > 1) dirs.push_back(v);
    return dirs;
  }
  if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      double a = 2.0 * kPi * i / n;
      Vector v(2);
      v << std::cos(a), std::sin(a);
      dirs.push_back(v);
    }
    return dirs;
  }
  if (dim == 3) {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int i = 0; i < n; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / n;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double a = 2.0 * kPi * std::fmod(i / golden, 1.0);
      Vector v(3);
      v << r * std::cos(a), r * std::sin(a), z;
      dirs.push_back(v);
    }
    return dirs;
  }
  if (dim == 4) {
    // R3 Kronecker sequence -> uniform S^3 parametrization (Shoemake).
    const double g = 1.2207440846057596; // plastic-like constant, x^4 = x + 1
    const double a1 = 1.0 / g, a2 = 1.0 / (g * g), a3 = 1.0 / (g * g * g);
    for (int i = 0; i < n; ++i) {
      double u = std::fmod(0.5 + a1 * (i + 1), 1.0);
      double v = std::fmod(0.5 + a2 * (i + 1), 1.0);
      double w = std::fmod(0.5 + a3 * (i + 1), 1.0);
      double su = std::sqrt(u), cu = std::sqrt(1.0 - u);
      Vector x(4);
      x << cu * std::sin(2 * kPi * v), cu * std::cos(2 * kPi * v),
           su * std::sin(2 * kPi * w), su * std::cos(2 * kPi * w);
      dirs.push_back(x);
    }
    return dirs;
  }
  auto rng = make_rng(0x5eed5u ^ std::uint64_t(dim), std::uint64_t(n));
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (int(dirs.size()) < n) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    double norm = v.norm();
    if (norm > 1e-12) dirs.push_back(v / norm);
  }
  return dirs;
}

inline Vector random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  double n = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    n = v.norm();
  } while (n < 1e-12);
  return v / n;
}

/// Random orthogonal matrix (QR of a gaussian matrix, signs fixed).
inline Matrix random_rotation(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

// ---------------------------------------------------------------------------
// Scalar and simplex optimization

/// Golden-section maximizer for a unimodal function on [lo, hi].
inline std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                            double lo, double hi, int iters = 90) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double x = (fc > fd) ? c : d;
  return {x, std::max(fc, fd)};
}

struct NelderMeadOptions {
  int max_iter = 240;
  double f_tol = 1e-13;
  double x_tol = 1e-13;
};

/// Nelder-Mead minimizer. Small dimensions only (<= 6 here); no re-starts.
inline std::pair<Vector, double> nelder_mead(const std::function<double(const Vector&)>& f,
                                             const Vector& start, double step,
                                             NelderMeadOptions opt = {}) {
  const int n = int(start.size());
  if (n == 0) return {start, f(start)};
  std::vector<Vector> x(n + 1, start);
  std::vector<double> fx(n + 1);
  for (int i = 1; i <= n; ++i) x[i][i - 1] += step;
  for (int i = 0; i <= n; ++i) fx[i] = f(x[i]);

  auto order = [&] {
    for (int i = 1; i <= n; ++i) {
      Vector xv = x[i];
      double fv = fx[i];
      int j = i - 1;
      while (j >= 0 && fx[j] > fv) { x[j + 1] = x[j]; fx[j + 1] = fx[j]; --j; }
      x[j + 1] = xv; fx[j + 1] = fv;
    }
  };
  order();

  for (int it = 0; it < opt.max_iter; ++it) {
    if (std::abs(fx[n] - fx[0]) < opt.f_tol * (1.0 + std::abs(fx[0])) &&
        (x[n] - x[0]).norm() < opt.x_tol * (1.0 + x[0].norm()))
      break;
    Vector centroid = Vector::Zero(n);
    for (int i = 0; i < n; ++i) centroid += x[i];
    centroid /= n;

    Vector xr = centroid + (centroid - x[n]);
    double fr = f(xr);
    if (fr < fx[0]) {
      Vector xe = centroid + 2.0 * (centroid - x[n]);
      double fe = f(xe);
      if (fe < fr) { x[n] = xe; fx[n] = fe; }
      else { x[n] = xr; fx[n] = fr; }
    } else if (fr < fx[n - 1]) {
      x[n] = xr; fx[n] = fr;
    } else {
      Vector xc = centroid + 0.5 * (x[n] - centroid);
      double fc = f(xc);
      if (fc < fx[n]) { x[n] = xc; fx[n] = fc; }
      else {
        for (int i = 1; i <= n; ++i) {
          x[i] = x[0] + 0.5 * (x[i] - x[0]);
          fx[i] = f(x[i]);
        }
      }
    }
    order();
  }
  return {x[0], fx[0]};
}

/// Minimize f over the unit sphere via a tangent-plane chart at `anchor`.
inline std::pair<Vector, double> minimize_on_sphere(
    const std::function<double(const Vector&)>& f, const Vector& anchor,
    double step = 0.15, NelderMeadOptions opt = {}) {
  const int d = int(anchor.size());
  Vector a = anchor.normalized();
  Matrix tangent = orthonormal_complement(a, d);
  auto in_chart = [&](const Vector& t) {
    Vector v = a + tangent * t;
    return v.normalized();
  };
  auto g = [&](const Vector& t) { return f(in_chart(t)); };
  auto [t, ft] = nelder_mead(g, Vector::Zero(d - 1), step, opt);
  return {in_chart(t), ft};
}

} // namespace convexsym
