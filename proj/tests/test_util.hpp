#pragma once

#include <rmpc/condense.hpp>
#include <rmpc/discretize.hpp>
#include <rmpc/invariant_set.hpp>
#include <rmpc/riccati.hpp>
#include <rmpc/types.hpp>

#include <random>

namespace rmpc::testutil {

struct BuiltProblem {
  MpcSpec spec;
  QpData qp;
  DareResult dare;
};

inline BuiltProblem build_problem(const MatrixXd& Ac, const MatrixXd& Bc, double Ts,
                                  const MatrixXd& Q, const MatrixXd& R, int N,
                                  const VectorXd& x_lo, const VectorXd& x_hi,
                                  const VectorXd& u_lo, const VectorXd& u_hi) {
  BuiltProblem out;
  DiscreteSystem sys = discretize_zoh({Ac, Bc}, Ts);
  out.dare = solve_dare(sys.A, sys.B, Q, R);
  out.spec.system = sys;
  out.spec.Q = Q;
  out.spec.R = R;
  out.spec.P = out.dare.P;
  out.spec.N = N;
  out.spec.constraints = {x_lo, x_hi, u_lo, u_hi};
  out.spec.terminal = compute_terminal_set(sys, out.dare.K_lqr, out.spec.constraints);
  out.qp = condense(out.spec);
  return out;
}

inline BuiltProblem make_di6() {
  MatrixXd Ac(2, 2), Bc(2, 1);
  Ac << -1, -2, 1, 0;
  Bc << 1, 0;
  MatrixXd Q = Eigen::Vector2d(0.01, 4.0).asDiagonal();
  MatrixXd R = MatrixXd::Constant(1, 1, 0.01);
  VectorXd xhi = VectorXd::Constant(2, 3.0);
  VectorXd uhi = VectorXd::Constant(1, 2.0);
  return build_problem(Ac, Bc, 1.0, Q, R, 6, -xhi, xhi, -uhi, uhi);
}

inline BuiltProblem make_us12() {
  MatrixXd Ac(2, 2), Bc(2, 1);
  Ac << -1, 0.3, 0.1, 1;
  Bc << 0.5, -2;
  MatrixXd Q = MatrixXd::Identity(2, 2);
  MatrixXd R = MatrixXd::Constant(1, 1, 0.1);
  VectorXd xhi = VectorXd::Constant(2, 3.0);
  VectorXd uhi = VectorXd::Constant(1, 1.0);
  return build_problem(Ac, Bc, 0.5, Q, R, 12, -xhi, xhi, -uhi, uhi);
}

inline BuiltProblem make_siso20() {
  MatrixXd Ac(2, 2), Bc(2, 1);
  Ac << -1, -2, 1, 0;
  Bc << 1, 0;
  MatrixXd Q = Eigen::Vector2d(0.01, 4.0).asDiagonal();
  MatrixXd R = MatrixXd::Constant(1, 1, 0.01);
  VectorXd xhi = VectorXd::Constant(2, 3.0);
  VectorXd uhi = VectorXd::Constant(1, 2.0);
  return build_problem(Ac, Bc, 0.1, Q, R, 20, -xhi, xhi, -uhi, uhi);
}

/// Uniform draw from the state box.
inline VectorXd random_box_state(const BoxConstraints& box, std::mt19937_64& rng) {
  VectorXd x(box.x_lo.size());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < x.size(); ++i)
    x(i) = box.x_lo(i) + (box.x_hi(i) - box.x_lo(i)) * unif(rng);
  return x;
}

}  // namespace rmpc::testutil
