#pragma once

#include <limits>
#include <vector>

#include "convexsym/numerics.hpp"

namespace convexsym {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Vector x; // primal solution (original variables only)
};

/// Dense two-phase simplex for  max c'x  s.t.  Ax = b, x >= 0.
/// Sized for this library's instances: a handful of rows, a few hundred
/// columns. Largest-coefficient pricing with a Bland fallback against
/// cycling; pivot tolerance relative to the tableau scale.
class SimplexSolver {
 public:
  explicit SimplexSolver(double eps = 1e-11) : eps_(eps) {}

  LpResult maximize(const Matrix& a, const Vector& b, const Vector& c) const {
    const int m = int(a.rows());
    const int n = int(a.cols());

    Matrix t(m + 1, n + m + 1); // tableau with artificial columns
    t.setZero();
    double scale = std::max(1.0, std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
    for (int i = 0; i < m; ++i) {
      double sign = b[i] >= 0 ? 1.0 : -1.0;
      t.block(i, 0, 1, n) = sign * a.row(i);
      t(i, n + i) = 1.0;
      t(i, n + m) = sign * b[i];
    }
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    // Phase 1: minimize sum of artificials.
    for (int j = 0; j <= n + m; ++j) {
      double s = 0;
      for (int i = 0; i < m; ++i) s += t(i, j);
      t(m, j) = -s; // row m holds -(reduced costs) of the phase objective
    }
    for (int i = 0; i < m; ++i) t(m, n + i) = 0.0;
    if (!iterate(t, basis, n + m, scale)) return {LpStatus::Infeasible, 0.0, {}};
    if (-t(m, n + m) > 1e-7 * scale) return {LpStatus::Infeasible, 0.0, {}};

    // Drive leftover artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (basis[i] < n) continue;
      int enter = -1;
      for (int j = 0; j < n; ++j)
        if (std::abs(t(i, j)) > eps_ * scale) { enter = j; break; }
      if (enter >= 0) pivot(t, basis, i, enter);
    }

    // Phase 2 objective.
    for (int j = 0; j <= n + m; ++j) t(m, j) = 0.0;
    for (int j = 0; j < n; ++j) t(m, j) = -c[j];
    for (int i = 0; i < m; ++i) {
      if (basis[i] < n && std::abs(t(m, basis[i])) > 0)
        t.row(m) -= t(m, basis[i]) * t.row(i);
    }
    double cscale = std::max(scale, n > 0 ? c.cwiseAbs().maxCoeff() : 0.0);
    if (!iterate(t, basis, n, cscale)) return {LpStatus::Unbounded, 0.0, {}};

    LpResult res;
    res.status = LpStatus::Optimal;
    res.x = Vector::Zero(n);
    for (int i = 0; i < m; ++i)
      if (basis[i] < n) res.x[basis[i]] = t(i, n + m);
    res.objective = c.dot(res.x);
    return res;
  }

  /// Feasibility of {x >= 0 : Ax = b}; returns an x when feasible.
  LpResult feasible_point(const Matrix& a, const Vector& b) const {
    return maximize(a, b, Vector::Zero(a.cols()));
  }

 private:
  void pivot(Matrix& t, std::vector<int>& basis, int row, int col) const {
    t.row(row) /= t(row, col);
    for (int i = 0; i < t.rows(); ++i) {
      if (i == row) continue;
      double f = t(i, col);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    basis[row] = col;
  }

  // Pivoting is restricted to the first `ncols` columns, which keeps
  // artificials out of the basis during phase 2.
  bool iterate(Matrix& t, std::vector<int>& basis, int ncols, double scale) const {
    const int m = int(t.rows()) - 1;
    const int rhs = int(t.cols()) - 1;
    const int stall_limit = 48 * (m + ncols);
    for (int it = 0; it < stall_limit; ++it) {
      bool bland = it > stall_limit / 2;
      int enter = -1;
      double best = -eps_ * scale;
      for (int j = 0; j < ncols; ++j) {
        double r = t(m, j);
        if (r < best) {
          best = r;
          enter = j;
          if (bland) break;
        }
      }
      if (enter < 0) return true; // optimal
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        double aij = t(i, enter);
        if (aij > eps_ * scale) {
          double ratio = t(i, rhs) / aij;
          if (ratio < best_ratio - 1e-12 * (1 + std::abs(best_ratio)) ||
              (std::abs(ratio - best_ratio) <= 1e-12 * (1 + std::abs(best_ratio)) &&
               (leave < 0 || basis[i] < basis[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false; // unbounded
      pivot(t, basis, leave, enter);
    }
    return true; // stalled at tolerance; current point is as good as we get
  }

  double eps_;
};

/// Is q in the convex hull of pts? Small phase-1 feasibility problem.
inline bool in_convex_hull(const std::vector<Vector>& pts, const Vector& q,
                           double tol = 1e-9) {
  if (pts.empty()) return false;
  const int d = int(q.size());
  const int n = int(pts.size());
  double scale = 1.0;
  for (const auto& p : pts) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
  Matrix a(d + 1, n);
  Vector b(d + 1);
  for (int j = 0; j < n; ++j) {
    a.block(0, j, d, 1) = pts[j];
    a(d, j) = 1.0;
  }
  b.head(d) = q;
  b[d] = 1.0;
  SimplexSolver lp;
  auto res = lp.feasible_point(a, b);
  if (res.status != LpStatus::Optimal) return false;
  // verify the combination actually reproduces q at tolerance
  Vector sum = Vector::Zero(d);
  double wsum = 0;
  for (int j = 0; j < n; ++j) {
    sum += res.x[j] * pts[j];
    wsum += res.x[j];
  }
  return std::abs(wsum - 1.0) <= tol && (sum - q).norm() <= tol * scale;
}

} // namespace convexsym
