#pragma once

#include <limits>
#include <vector>

#include "rmpc/types.hpp"

namespace rmpc {

struct LpResult {
  double value = 0.0;
  bool unbounded = false;
};

/// Maximize obj'x over { x : C x <= d } by a dense tableau simplex.
/// `interior` must satisfy C*interior <= d (used to shift the feasible
/// region so the slack basis is immediately feasible); the origin works
/// whenever d >= 0. Dantzig pricing with a Bland fallback on stalling.
inline LpResult lp_max(const VectorXd& obj, const MatrixXd& C, const VectorXd& d,
                       const VectorXd& interior) {
  const int r = static_cast<int>(C.rows());
  const int n = static_cast<int>(C.cols());
  if (r == 0) return {0.0, true};

  VectorXd dshift = d - C * interior;
  for (int i = 0; i < r; ++i) {
    if (dshift(i) < 0.0) {
      if (dshift(i) < -1e-7) throw std::invalid_argument("lp_max: interior point infeasible");
      dshift(i) = 0.0;
    }
  }

  // columns: x+ (n), x- (n), slacks (r); minimize -obj'(x+ - x-)
  const int ncols = 2 * n + r;
  MatrixXd T(r + 1, ncols + 1);
  T.setZero();
  T.block(0, 0, r, n) = C;
  T.block(0, n, r, n) = -C;
  T.block(0, 2 * n, r, r) = MatrixXd::Identity(r, r);
  T.block(0, ncols, r, 1) = dshift;
  T.block(r, 0, 1, n) = -obj.transpose();
  T.block(r, n, 1, n) = obj.transpose();

  std::vector<int> basis(r);
  for (int i = 0; i < r; ++i) basis[i] = 2 * n + i;

  const double ctol = 1e-9, ptol = 1e-10;
  int degenerate_streak = 0;
  const long max_pivots = 200L * (r + ncols) + 2000;
  for (long it = 0; it < max_pivots; ++it) {
    // entering column
    int enter = -1;
    if (degenerate_streak < 30) {
      double best = -ctol;
      for (int j = 0; j < ncols; ++j)
        if (T(r, j) < best) { best = T(r, j); enter = j; }
    } else {
      for (int j = 0; j < ncols; ++j)
        if (T(r, j) < -ctol) { enter = j; break; }  // Bland
    }
    if (enter < 0) return {obj.dot(interior) + T(r, ncols), false};

    // ratio test, ties to smallest basis index
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < r; ++i) {
      double a = T(i, enter);
      if (a > ptol) {
        double ratio = T(i, ncols) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return {0.0, true};
    degenerate_streak = (best_ratio < 1e-12) ? degenerate_streak + 1 : 0;

    // pivot
    double piv = T(leave, enter);
    T.row(leave) /= piv;
    for (int i = 0; i <= r; ++i) {
      if (i == leave) continue;
      double f = T(i, enter);
      if (f != 0.0) T.row(i) -= f * T.row(leave);
    }
    basis[leave] = enter;
  }
  throw MaxIterError("lp_max: pivot limit exceeded");
}

inline LpResult lp_max(const VectorXd& obj, const MatrixXd& C, const VectorXd& d) {
  return lp_max(obj, C, d, VectorXd::Zero(C.cols()));
}

}  // namespace rmpc
