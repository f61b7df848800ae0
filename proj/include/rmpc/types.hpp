#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace rmpc {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LicqError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MaxIterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Continuous-time LTI system xdot = A_c x + B_c u.
struct ContinuousSystem {
  MatrixXd A_c;
  MatrixXd B_c;

  int n() const { return static_cast<int>(A_c.rows()); }
  int m() const { return static_cast<int>(B_c.cols()); }

  void validate() const {
    if (A_c.rows() != A_c.cols()) throw std::invalid_argument("A_c must be square");
    if (B_c.rows() != A_c.rows()) throw std::invalid_argument("B_c row count mismatch");
    if (A_c.rows() < 1 || B_c.cols() < 1) throw std::invalid_argument("empty system");
  }
};

/// Discrete-time LTI plant x(k+1) = A x(k) + B u(k), sampled at Ts seconds.
struct DiscreteSystem {
  MatrixXd A;
  MatrixXd B;
  double Ts = 0.0;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }

  void validate() const {
    if (A.rows() != A.cols()) throw std::invalid_argument("A must be square");
    if (B.rows() != A.rows()) throw std::invalid_argument("B row count mismatch");
  }
};

/// Componentwise state and input bounds; the origin must be interior.
struct BoxConstraints {
  VectorXd x_lo, x_hi;
  VectorXd u_lo, u_hi;

  void validate() const {
    auto interior = [](const VectorXd& lo, const VectorXd& hi) {
      return (lo.array() < 0).all() && (hi.array() > 0).all();
    };
    if (x_lo.size() != x_hi.size() || u_lo.size() != u_hi.size())
      throw std::invalid_argument("bound dimension mismatch");
    if (!interior(x_lo, x_hi) || !interior(u_lo, u_hi))
      throw std::invalid_argument("origin must be interior to the constraint box");
  }
};

/// Halfspace polytope { x : C x <= c }.
struct Polytope {
  MatrixXd C;
  VectorXd c;

  int rows() const { return static_cast<int>(C.rows()); }
  int dim() const { return static_cast<int>(C.cols()); }

  bool contains(const VectorXd& x, double tol) const {
    return ((C * x - c).array() <= tol).all();
  }
  bool contains(const VectorXd& x) const {
    return contains(x, 1e-9 * (1.0 + c.lpNorm<Eigen::Infinity>()));
  }
};

/// Full MPC problem description before condensing.
struct MpcSpec {
  DiscreteSystem system;
  MatrixXd Q;
  MatrixXd R;
  MatrixXd P;
  int N = 0;
  BoxConstraints constraints;
  Polytope terminal;

  void validate() const {
    system.validate();
    constraints.validate();
    if (N < 1) throw std::invalid_argument("horizon must be >= 1");
    auto check_spd = [](const MatrixXd& M, const char* name) {
      if (M.rows() != M.cols() || !M.isApprox(M.transpose(), 1e-10))
        throw std::invalid_argument(std::string(name) + " must be symmetric");
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
      if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument(std::string(name) + " must be positive definite");
    };
    check_spd(Q, "Q");
    check_spd(R, "R");
    check_spd(P, "P");
    if (Q.rows() != system.n() || R.rows() != system.m() || P.rows() != system.n())
      throw std::invalid_argument("weight dimension mismatch");
    if (constraints.x_lo.size() != system.n() || constraints.u_lo.size() != system.m())
      throw std::invalid_argument("constraint dimension mismatch");
    if (terminal.dim() != system.n())
      throw std::invalid_argument("terminal set dimension mismatch");
  }
};

}  // namespace rmpc
