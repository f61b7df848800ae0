#include <rmpc/discretize.hpp>
#include <rmpc/transfer.hpp>

#include <gtest/gtest.h>

using namespace rmpc;

namespace {

RationalFn rf(std::initializer_list<double> num, std::initializer_list<double> den) {
  RationalFn f;
  f.num = Eigen::Map<const VectorXd>(std::data(num), static_cast<long>(num.size()));
  f.den = Eigen::Map<const VectorXd>(std::data(den), static_cast<long>(den.size()));
  return f;
}

TransferMatrix mimo75_tf() {
  return {
      {rf({-5, 1}, {36, 6, 1}), rf({0.5, 0}, {8, 1}), rf({0}, {1})},
      {rf({0}, {1}), rf({-1, 0.1}, {8, 1, 0}), rf({-0.1}, {64, 6, 1, 0})},
      {rf({-2, 1}, {12, 3, 1}), rf({0}, {1}), rf({-10, 2}, {16, 2, 1})},
  };
}

TransferMatrix am4_tf() {
  return {
      {rf({0.5}, {36, 6, 1}), rf({0.04, 0.02}, {8, 1})},
      {rf({0.04, 0.02}, {8, 1}), rf({0.05}, {12, 3, 1})},
  };
}

}  // namespace

TEST(Transfer, SecondOrderSisoRealization) {
  TransferMatrix tf = {{rf({2}, {1, 1, 2})}};
  StateSpace ss = realize_transfer_function(tf);
  EXPECT_EQ(ss.n(), 2);
  std::complex<double> s(0.0, 1.0);
  auto G = freq_response(ss, s);
  std::complex<double> expected = 2.0 / (std::complex<double>(-1.0, 1.0) + 2.0);
  EXPECT_LT(std::abs(G(0, 0) - expected), 1e-10);
}

TEST(Transfer, Mimo75MinimalOrderIsTen) {
  StateSpace ss = realize_transfer_function(mimo75_tf());
  EXPECT_EQ(ss.n(), 10);
  EXPECT_EQ(ss.B.cols(), 3);
  for (double w : {0.01, 0.1, 1.0, 10.0}) {
    std::complex<double> s(0.0, w);
    EXPECT_LT((freq_response(ss, s) - freq_response(mimo75_tf(), s)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Transfer, Am4FrequencyResponseOracle) {
  StateSpace ss = realize_transfer_function(am4_tf());
  EXPECT_EQ(ss.n(), 6);
  for (double w : {0.01, 0.1, 1.0, 10.0}) {
    std::complex<double> s(0.0, w);
    EXPECT_LT((freq_response(ss, s) - freq_response(am4_tf(), s)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Transfer, RowObserverRealizationMatchesResponses) {
  StateSpace ss = stack_row_observer_realization(mimo75_tf());
  EXPECT_EQ(ss.n(), 12);
  for (double w : {0.02, 0.3, 2.0}) {
    std::complex<double> s(0.0, w);
    EXPECT_LT((freq_response(ss, s) - freq_response(mimo75_tf(), s)).cwiseAbs().maxCoeff(), 1e-8);
  }
  StateSpace pruned = prune_uncontrollable(ss);
  EXPECT_EQ(pruned.n(), 10);
}

TEST(Transfer, RejectsImproperEntry) {
  TransferMatrix tf = {{rf({1, 0, 0}, {1, 1})}};  // s^2 / (s+1)
  EXPECT_THROW(realize_transfer_function(tf), std::invalid_argument);
}

TEST(Transfer, BalancedDiscreteKeepsResponse) {
  StateSpace ss = realize_transfer_function(am4_tf());
  DiscreteSystem d = discretize_zoh({ss.A, ss.B}, 1.0);
  StateSpace dss{d.A, d.B, ss.C, ss.D};
  StateSpace bal = balance_discrete(dss);
  // discrete responses must coincide on the unit circle
  for (double th : {0.1, 0.7, 2.0}) {
    std::complex<double> z = std::polar(1.0, th);
    EXPECT_LT((freq_response(bal, z) - freq_response(dss, z)).cwiseAbs().maxCoeff(), 1e-9);
  }
  // balanced Gramians are equal and diagonal
  MatrixXd Wc = discrete_lyapunov(bal.A, bal.B * bal.B.transpose());
  MatrixXd Wo = discrete_lyapunov(bal.A.transpose(), bal.C.transpose() * bal.C);
  EXPECT_LT((Wc - Wo).cwiseAbs().maxCoeff(), 1e-8);
  MatrixXd offdiag = Wc - MatrixXd(Wc.diagonal().asDiagonal());
  EXPECT_LT(offdiag.cwiseAbs().maxCoeff(), 1e-8);
}
