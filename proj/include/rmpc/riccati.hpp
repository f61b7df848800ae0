#pragma once

#include "rmpc/linalg.hpp"
#include "rmpc/types.hpp"

namespace rmpc {

struct DareResult {
  MatrixXd P;      // stabilizing solution
  MatrixXd K_lqr;  // u = K_lqr x, A + B K_lqr stable
};

/// Solve P = A'PA - A'PB (R + B'PB)^-1 B'PA + Q by the structure-preserving
/// doubling iteration. Requires (A,B) stabilizable and Q, R positive definite.
inline DareResult solve_dare(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                             const MatrixXd& R, int max_iter = 200) {
  const int n = static_cast<int>(A.rows());
  if (!is_stabilizable(A, B)) throw std::runtime_error("dare: (A,B) not stabilizable");

  MatrixXd Ak = A;
  MatrixXd Gk = B * R.ldlt().solve(B.transpose());
  MatrixXd Hk = Q;
  const MatrixXd I = MatrixXd::Identity(n, n);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::PartialPivLU<MatrixXd> lu(I + Gk * Hk);
    MatrixXd W1 = lu.solve(Ak);          // (I + G H)^-1 A
    MatrixXd W2 = lu.solve(Gk);          // (I + G H)^-1 G
    MatrixXd Hn = Hk + Ak.transpose() * Hk * W1;
    MatrixXd Gn = Gk + Ak * W2 * Ak.transpose();
    MatrixXd An = Ak * W1;
    double delta = (Hn - Hk).norm();
    Ak = An;
    Gk = Gn;
    Hk = 0.5 * (Hn + Hn.transpose());
    if (delta <= 1e-12 * std::max(1.0, Hk.norm())) {
      DareResult res;
      res.P = Hk;
      res.K_lqr = -(R + B.transpose() * Hk * B).ldlt().solve(B.transpose() * Hk * A);
      return res;
    }
  }
  throw std::runtime_error("dare: doubling iteration did not converge");
}

/// Frobenius-norm residual of the fixed-point equation, for verification.
inline double dare_residual(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q,
                            const MatrixXd& R, const MatrixXd& P) {
  MatrixXd T = A.transpose() * P * B;
  MatrixXd res = A.transpose() * P * A -
                 T * (R + B.transpose() * P * B).ldlt().solve(T.transpose()) + Q - P;
  return res.norm();
}

}  // namespace rmpc
