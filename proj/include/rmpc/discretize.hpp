#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include "rmpc/types.hpp"

namespace rmpc {

/// Zero-order-hold discretization via the exponential of the augmented
/// block matrix [[A_c, B_c], [0, 0]] * Ts.
inline DiscreteSystem discretize_zoh(const ContinuousSystem& cs, double Ts) {
  cs.validate();
  if (!(Ts > 0.0)) throw std::invalid_argument("sampling time must be positive");
  const int n = cs.n(), m = cs.m();
  MatrixXd M = MatrixXd::Zero(n + m, n + m);
  M.topLeftCorner(n, n) = cs.A_c * Ts;
  M.topRightCorner(n, m) = cs.B_c * Ts;
  MatrixXd E = M.exp();
  if (!E.allFinite()) throw std::runtime_error("matrix exponential overflow");
  DiscreteSystem d;
  d.A = E.topLeftCorner(n, n);
  d.B = E.topRightCorner(n, m);
  d.Ts = Ts;
  return d;
}

}  // namespace rmpc
