#include <rmpc/qp.hpp>

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace rmpc;

namespace {

// Independent optimum certificate: enumerate candidate active sets drawn
// from a violation-based pool, solve each equality subproblem, and accept
// the first candidate whose full KKT conditions hold. Convexity plus H > 0
// make any KKT point the unique global optimum, so the pool only affects
// whether the search succeeds, never its correctness.
struct EnumerationOracle {
  VectorXd U;
  double objective;
  bool found = false;
};

EnumerationOracle enumerate_qp(const QpData& qp, const VectorXd& x, int max_size) {
  EnumerationOracle out;
  VectorXd b = qp.w + qp.E * x;
  VectorXd g = qp.F.transpose() * x;
  VectorXd U_unc = -qp.lltH.solve(g);
  VectorXd slack_unc = b - qp.G * U_unc;
  std::vector<int> pool;
  for (int i = 0; i < qp.q; ++i)
    if (slack_unc(i) < 1e-6) pool.push_back(i);
  const double tol = 1e-8 * (1.0 + b.lpNorm<Eigen::Infinity>());

  if ((slack_unc.array() >= -tol).all()) {
    out.U = U_unc;
    out.found = true;
  } else {
    std::vector<int> comb;
    // iterate subsets of the pool by increasing size
    std::function<bool(size_t, int)> rec = [&](size_t start, int remaining) {
      if (remaining == 0) {
        const int k = static_cast<int>(comb.size());
        MatrixXd GA(k, qp.nu());
        VectorXd bA(k);
        for (int i = 0; i < k; ++i) {
          GA.row(i) = qp.G.row(comb[i]);
          bA(i) = b(comb[i]);
        }
        MatrixXd W = GA * qp.lltH.solve(GA.transpose());
        Eigen::FullPivLU<MatrixXd> lu(W);
        if (lu.rank() < k) return false;
        VectorXd lam = lu.solve(-(GA * qp.lltH.solve(g)) - bA);
        if ((lam.array() < -1e-9).any()) return false;
        VectorXd U = -qp.lltH.solve(g + GA.transpose() * lam);
        if (((b - qp.G * U).array() < -tol).any()) return false;
        out.U = U;
        out.found = true;
        return true;
      }
      for (size_t i = start; i + remaining <= pool.size() + 1 && i < pool.size(); ++i) {
        comb.push_back(pool[i]);
        if (rec(i + 1, remaining - 1)) return true;
        comb.pop_back();
      }
      return false;
    };
    for (int size = 1; size <= max_size && !out.found; ++size) rec(0, size);
  }
  if (out.found)
    out.objective = 0.5 * out.U.dot(qp.H * out.U) + x.dot(qp.F * out.U) + 0.5 * x.dot(qp.Y * x);
  return out;
}

}  // namespace

TEST(SolveQp, OriginIsUnconstrainedMinimum) {
  auto pb = testutil::make_di6();
  QpSolution sol = solve_qp(pb.qp, VectorXd::Zero(2));
  EXPECT_LT(sol.U_star.lpNorm<Eigen::Infinity>(), 1e-10);
  EXPECT_TRUE(sol.active.empty());
  EXPECT_NEAR(sol.objective, 0.0, 1e-12);
}

TEST(SolveQp, KktCertificateOnRandomFeasibleStates) {
  auto pb = testutil::make_di6();
  std::mt19937_64 rng(3);
  int done = 0;
  while (done < 50) {
    VectorXd x = testutil::random_box_state(pb.spec.constraints, rng);
    if (!is_feasible(pb.qp, x)) continue;
    ++done;
    QpSolution sol = solve_qp(pb.qp, x);
    VectorXd b = pb.qp.w + pb.qp.E * x;
    const double tol = 1e-8 * (1.0 + b.lpNorm<Eigen::Infinity>());
    VectorXd slack = b - pb.qp.G * sol.U_star;
    EXPECT_GE(slack.minCoeff(), -tol);                       // primal
    EXPECT_GE(sol.lambda_star.minCoeff(), -1e-10);           // dual
    EXPECT_LE(sol.kkt_residual, tol);                        // stationarity
    for (int i : sol.inactive) EXPECT_EQ(sol.lambda_star(i), 0.0);
    for (int i = 0; i < pb.qp.q; ++i)
      EXPECT_LE(std::abs(sol.lambda_star(i) * slack(i)),
                1e-8 * (1.0 + sol.lambda_star.lpNorm<Eigen::Infinity>()) * (1.0 + b.lpNorm<Eigen::Infinity>()));
  }
}

TEST(SolveQp, MatchesEnumerationOracleDI6) {
  auto pb = testutil::make_di6();
  std::mt19937_64 rng(11);
  int done = 0;
  while (done < 200) {
    VectorXd x = testutil::random_box_state(pb.spec.constraints, rng);
    if (!is_feasible(pb.qp, x)) continue;
    auto oracle = enumerate_qp(pb.qp, x, pb.qp.nu());
    ASSERT_TRUE(oracle.found);
    QpSolution sol = solve_qp(pb.qp, x);
    EXPECT_LT((sol.U_star - oracle.U).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_NEAR(sol.objective, oracle.objective, 1e-8 * (1.0 + std::abs(oracle.objective)));
    ++done;
  }
}

TEST(SolveQp, MatchesEnumerationOracleUS12) {
  auto pb = testutil::make_us12();
  std::mt19937_64 rng(13);
  int done = 0, skipped = 0;
  while (done < 200 && skipped < 4000) {
    VectorXd x = testutil::random_box_state(pb.spec.constraints, rng);
    if (!is_feasible(pb.qp, x)) { ++skipped; continue; }
    auto oracle = enumerate_qp(pb.qp, x, 6);
    if (!oracle.found) { ++skipped; continue; }  // optimum needs > 6 active rows
    QpSolution sol = solve_qp(pb.qp, x);
    EXPECT_LT((sol.U_star - oracle.U).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_NEAR(sol.objective, oracle.objective, 1e-8 * (1.0 + std::abs(oracle.objective)));
    ++done;
  }
  EXPECT_GE(done, 150);
}

TEST(SolveQp, InfeasibleStateThrows) {
  auto pb = testutil::make_di6();
  VectorXd x = 2.0 * pb.spec.constraints.x_hi;
  EXPECT_FALSE(is_feasible(pb.qp, x));
  EXPECT_THROW(solve_qp(pb.qp, x), InfeasibleError);
}

TEST(SolveQp, FeasibilityAgreesWithSolverOnSISO20) {
  auto pb = testutil::make_siso20();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    VectorXd x = testutil::random_box_state(pb.spec.constraints, rng);
    bool feas = is_feasible(pb.qp, x);
    bool solved = true;
    try {
      solve_qp(pb.qp, x);
    } catch (const InfeasibleError&) {
      solved = false;
    }
    EXPECT_EQ(feas, solved) << "sample " << i;
  }
}

TEST(SolveQp, DeterministicActiveSets) {
  auto pb = testutil::make_us12();
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    VectorXd x = testutil::random_box_state(pb.spec.constraints, rng);
    if (!is_feasible(pb.qp, x)) continue;
    QpSolution a = solve_qp(pb.qp, x);
    QpSolution b = solve_qp(pb.qp, x);
    EXPECT_EQ(a.active, b.active);
    EXPECT_TRUE(a.U_star == b.U_star);  // bitwise
  }
}

TEST(SolveQp, UniqueOptimizerUnderPerturbedIterationOrder) {
  auto pb = testutil::make_us12();
  std::mt19937_64 rng(29);
  SolveOptions rev;
  rev.reverse_tiebreak = true;
  for (int i = 0; i < 50; ++i) {
    VectorXd x = testutil::random_box_state(pb.spec.constraints, rng);
    if (!is_feasible(pb.qp, x)) continue;
    QpSolution a = solve_qp(pb.qp, x);
    QpSolution b = solve_qp(pb.qp, x, rev);
    EXPECT_LT((a.U_star - b.U_star).lpNorm<Eigen::Infinity>(), 1e-7);
  }
}

TEST(SolveQp, WarmStartReachesSameSolution) {
  auto pb = testutil::make_di6();
  std::mt19937_64 rng(31);
  for (int i = 0; i < 30; ++i) {
    VectorXd x = testutil::random_box_state(pb.spec.constraints, rng);
    if (!is_feasible(pb.qp, x)) continue;
    QpSolution cold = solve_qp(pb.qp, x);
    SolveOptions opts;
    opts.warm_start = &cold.active;
    QpSolution warm = solve_qp(pb.qp, x, opts);
    EXPECT_LT((warm.U_star - cold.U_star).lpNorm<Eigen::Infinity>(), 1e-9);
    EXPECT_EQ(warm.active, cold.active);
  }
}

TEST(CheckLicq, BasicProperties) {
  auto pb = testutil::make_di6();
  EXPECT_TRUE(check_licq(pb.qp, {}));
  // seven rows cannot be independent with six variables
  EXPECT_FALSE(check_licq(pb.qp, {0, 1, 2, 3, 4, 5, 6}));
  // upper and lower bound of the same input are parallel rows
  int up = pb.qp.input_row(0, 0, true);
  int lo = pb.qp.input_row(0, 0, false);
  EXPECT_FALSE(check_licq(pb.qp, {up, lo}));
  EXPECT_TRUE(check_licq(pb.qp, {up}));
}
