#pragma once

#include <vector>

#include "rmpc/simplex.hpp"
#include "rmpc/types.hpp"

namespace rmpc {

/// True when row'x <= rhs everywhere on { C x <= d }.
inline bool row_redundant(const VectorXd& row, double rhs, const MatrixXd& C,
                          const VectorXd& d, const VectorXd& interior, double tol = 1e-9) {
  LpResult lp = lp_max(row, C, d, interior);
  if (lp.unbounded) return false;
  return lp.value <= rhs + tol;
}

/// Remove redundant rows; for a full-dimensional polytope the result is the
/// unique facet representation (row order preserved).
inline Polytope reduce_polytope(const Polytope& poly, const VectorXd& interior, double tol = 1e-9) {
  const int r = poly.rows();
  std::vector<bool> keep(r, true);
  int kept = r;
  for (int j = 0; j < r; ++j) {
    if (kept <= 1) break;
    MatrixXd Csub(kept - 1, poly.dim());
    VectorXd dsub(kept - 1);
    int at = 0;
    for (int i = 0; i < r; ++i) {
      if (i == j || !keep[i]) continue;
      Csub.row(at) = poly.C.row(i);
      dsub(at) = poly.c(i);
      ++at;
    }
    if (row_redundant(poly.C.row(j), poly.c(j), Csub, dsub, interior, tol)) {
      keep[j] = false;
      --kept;
    }
  }
  Polytope out;
  out.C.resize(kept, poly.dim());
  out.c.resize(kept);
  int at = 0;
  for (int i = 0; i < r; ++i) {
    if (!keep[i]) continue;
    out.C.row(at) = poly.C.row(i);
    out.c(at) = poly.c(i);
    ++at;
  }
  return out;
}

/// Maximal constraint-admissible positively invariant set for
/// x(k+1) = (A + B K) x(k) subject to x in X and K x in U:
///   O_0 = { x in X, Kx in U },  O_{t+1} = O_t  ∩ { A_K^{t+1} x in O_0 },
/// iterated to determination, then reduced to the facet representation.
inline Polytope compute_terminal_set(const DiscreteSystem& sys, const MatrixXd& K_lqr,
                                     const BoxConstraints& box, int max_iter = 500,
                                     double tol = 1e-9) {
  const int n = sys.n(), m = sys.m();
  MatrixXd A_K = sys.A + sys.B * K_lqr;

  MatrixXd C0(2 * n + 2 * m, n);
  VectorXd c0(2 * n + 2 * m);
  C0.topRows(n) = MatrixXd::Identity(n, n);
  C0.middleRows(n, n) = -MatrixXd::Identity(n, n);
  C0.middleRows(2 * n, m) = K_lqr;
  C0.bottomRows(m) = -K_lqr;
  c0 << box.x_hi, -box.x_lo, box.u_hi, -box.u_lo;

  MatrixXd C = C0;
  VectorXd c = c0;
  MatrixXd At = A_K;
  VectorXd origin = VectorXd::Zero(n);
  bool determined = false;
  for (int t = 0; t < max_iter; ++t) {
    MatrixXd Cnew = C0 * At;
    int added = 0;
    for (int j = 0; j < Cnew.rows(); ++j) {
      if (!row_redundant(Cnew.row(j), c0(j), C, c, origin, tol)) {
        C.conservativeResize(C.rows() + 1, Eigen::NoChange);
        C.row(C.rows() - 1) = Cnew.row(j);
        c.conservativeResize(c.size() + 1);
        c(c.size() - 1) = c0(j);
        ++added;
      }
    }
    if (added == 0) {
      determined = true;
      break;
    }
    At = At * A_K;
  }
  if (!determined) throw std::runtime_error("terminal set: no determination within max_iter");

  Polytope full{C, c};
  return reduce_polytope(full, origin, tol);
}

}  // namespace rmpc
