#include <rmpc/riccati.hpp>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace rmpc;

TEST(Dare, ZeroAGivesPEqualsQ) {
  MatrixXd A = MatrixXd::Zero(3, 3);
  MatrixXd B = MatrixXd::Identity(3, 3);
  MatrixXd Q = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  MatrixXd R = MatrixXd::Identity(3, 3);
  auto res = solve_dare(A, B, Q, R);
  EXPECT_TRUE(res.P.isApprox(Q, 1e-12));
  EXPECT_LT(res.K_lqr.cwiseAbs().maxCoeff(), 1e-12);
}

// oracle: solve p = a^2 p - a^2 b^2 p^2 / (r + b^2 p) + q by bisection
static double scalar_dare_root(double a, double b, double q, double r) {
  auto f = [&](double p) { return a * a * p - a * a * b * b * p * p / (r + b * b * p) + q - p; };
  double lo = 1e-12, hi = 1e6;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(Dare, ScalarAgainstRootFindingOracle) {
  const double a = 2.0, b = 1.0, q = 1.0, r = 1.0;
  double p_oracle = scalar_dare_root(a, b, q, r);
  auto res = solve_dare(MatrixXd::Constant(1, 1, a), MatrixXd::Constant(1, 1, b),
                        MatrixXd::Constant(1, 1, q), MatrixXd::Constant(1, 1, r));
  EXPECT_NEAR(res.P(0, 0), p_oracle, 1e-9);
}

TEST(Dare, ResidualAndClosedLoopOnBenchmark) {
  auto pb = testutil::make_di6();
  const auto& sys = pb.spec.system;
  double res = dare_residual(sys.A, sys.B, pb.spec.Q, pb.spec.R, pb.dare.P);
  EXPECT_LE(res, 1e-8 * pb.dare.P.norm());
  EXPECT_LT(spectral_radius(sys.A + sys.B * pb.dare.K_lqr), 1.0);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(pb.dare.P);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

// oracle: value iteration P_{k+1} = Ric(P_k) from P_0 = Q
TEST(Dare, AgreesWithValueIterationOracle) {
  auto pb = testutil::make_di6();
  const MatrixXd &A = pb.spec.system.A, &B = pb.spec.system.B;
  const MatrixXd &Q = pb.spec.Q, &R = pb.spec.R;
  MatrixXd P = Q;
  for (int k = 0; k < 100000; ++k) {
    MatrixXd T = A.transpose() * P * B;
    MatrixXd Pn =
        A.transpose() * P * A - T * (R + B.transpose() * P * B).ldlt().solve(T.transpose()) + Q;
    double delta = (Pn - P).norm();
    P = Pn;
    if (delta < 1e-13) break;
  }
  EXPECT_LT((P - pb.dare.P).norm(), 1e-6);
}

TEST(Dare, RejectsNonStabilizablePair) {
  // x+ = 2x with no input authority
  EXPECT_THROW(solve_dare(MatrixXd::Constant(1, 1, 2.0), MatrixXd::Zero(1, 1),
                          MatrixXd::Identity(1, 1), MatrixXd::Identity(1, 1)),
               std::runtime_error);
}
