#pragma once

#include <Eigen/Dense>

#include "rmpc/types.hpp"

namespace rmpc {

inline double spectral_radius(const MatrixXd& A) {
  return Eigen::EigenSolver<MatrixXd>(A, false).eigenvalues().cwiseAbs().maxCoeff();
}

/// PBH test: every eigenvalue of A with |lambda| >= 1 must be controllable.
inline bool is_stabilizable(const MatrixXd& A, const MatrixXd& B, double tol = 1e-9) {
  const int n = static_cast<int>(A.rows());
  Eigen::EigenSolver<MatrixXd> es(A);
  for (int i = 0; i < n; ++i) {
    std::complex<double> lam = es.eigenvalues()(i);
    if (std::abs(lam) < 1.0 - 1e-10) continue;
    Eigen::MatrixXcd M(n, n + B.cols());
    M.leftCols(n) = A.cast<std::complex<double>>() - lam * Eigen::MatrixXcd::Identity(n, n);
    M.rightCols(B.cols()) = B.cast<std::complex<double>>();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(M);
    qr.setThreshold(tol);
    if (qr.rank() < n) return false;
  }
  return true;
}

/// Rank of a (possibly empty) row block via column-pivoted QR.
inline int matrix_rank(const MatrixXd& M, double tol) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<MatrixXd> qr(M);
  qr.setThreshold(tol);
  return static_cast<int>(qr.rank());
}

}  // namespace rmpc
