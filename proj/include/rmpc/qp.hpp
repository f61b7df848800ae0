#pragma once

#include <algorithm>
#include <ostream>
#include <vector>

#include "rmpc/condense.hpp"
#include "rmpc/types.hpp"

namespace rmpc {

/// KKT point of the condensed QP at one parameter value, with the index
/// sets the regional machinery consumes. Indices are 0-based and sorted.
struct QpSolution {
  VectorXd U_star;
  VectorXd lambda_star;
  std::vector<int> active;
  std::vector<int> inactive;
  std::vector<int> weakly_active;
  double objective = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
};

struct SolveOptions {
  const std::vector<int>* warm_start = nullptr;
  bool reverse_tiebreak = false;  // flip ratio-test tie resolution (test hook)
  std::ostream* debug = nullptr;
};

namespace detail {

// Ops interface shared by the main solve and the phase-1 subproblem.
struct MainOps {
  const QpData& qp;
  double ghg(int i, int j) const { return qp.GHiGt(i, j); }
  VectorXd solveH(const VectorXd& v) const { return qp.lltH.solve(v); }
  VectorXd mult_G(const VectorXd& v) const { return qp.G * v; }
  VectorXd mult_H(const VectorXd& v) const { return qp.H * v; }
  VectorXd gt_row(int i) const { return qp.G.row(i).transpose(); }
  int dup(int i) const { return qp.dup_of.empty() ? i : qp.dup_of[i]; }
  int q() const { return qp.q; }
  int nu() const { return qp.nu(); }
};

// Feasibility phase: least-norm relaxation over the row-normalized rows,
//   min 1/2 |U|^2 + 1/2 t^2 + M t   s.t.  Gn U - t <= bn,  -t <= 0.
// The unit Hessian and unit-norm rows keep every scale O(1); the verdict
// is taken from the returned U in original units.
struct Phase1Ops {
  const QpData& qp;
  double ghg(int i, int j) const {
    double base = (i < qp.q && j < qp.q) ? qp.GnGt(i, j) : 0.0;
    return base + 1.0;
  }
  VectorXd solveH(const VectorXd& v) const { return v; }
  VectorXd mult_H(const VectorXd& v) const { return v; }
  VectorXd mult_G(const VectorXd& v) const {
    VectorXd out(qp.q + 1);
    out.head(qp.q) = qp.Gn * v.head(qp.nu()) - VectorXd::Constant(qp.q, v(qp.nu()));
    out(qp.q) = -v(qp.nu());
    return out;
  }
  VectorXd gt_row(int i) const {
    VectorXd r = VectorXd::Zero(qp.nu() + 1);
    if (i < qp.q) r.head(qp.nu()) = qp.Gn.row(i).transpose();
    r(qp.nu()) = -1.0;
    return r;
  }
  int dup(int i) const { return (i < qp.q && !qp.dup_of.empty()) ? qp.dup_of[i] : i; }
  int q() const { return qp.q + 1; }
  int nu() const { return qp.nu() + 1; }
};

struct CoreResult {
  VectorXd U;
  std::vector<int> working;
  VectorXd mu;  // multipliers for the working set
  int iterations = 0;
};

/// Primal active-set method from a feasible start. Ties in the ratio test
/// break toward the smallest constraint index; after three consecutive
/// degenerate steps the removal rule switches to smallest-index (Bland).
/// Rows that would make the working-set Gram matrix numerically singular
/// are refused (bordered-pivot test) and ignored until the set changes.
template <class Ops>
CoreResult active_set_core(const Ops& ops, const VectorXd& g, const VectorXd& b,
                           VectorXd U0, std::vector<int> W0, const SolveOptions& opts,
                           long max_iter) {
  const int q = ops.q();
  VectorXd U = std::move(U0);
  std::vector<int> W = std::move(W0);
  std::vector<char> inW(q, 0);
  for (int i : W) inW[i] = 1;
  std::vector<char> banned(q, 0);
  int degenerate_streak = 0;

  for (long it = 1; it <= max_iter; ++it) {
    VectorXd h = ops.mult_H(U) + g;
    VectorXd slack = b - ops.mult_G(U);
    const int k = static_cast<int>(W.size());

    MatrixXd M(k, k);
    for (int a = 0; a < k; ++a)
      for (int c = 0; c <= a; ++c) M(a, c) = M(c, a) = ops.ghg(W[a], W[c]);
    if (k > 0) M.diagonal().array() += 1e-13 * (1.0 + M.diagonal().maxCoeff());
    Eigen::LDLT<MatrixXd> ldlt;
    VectorXd mu(k);
    if (k > 0) {
      ldlt.compute(M);
      VectorXd Hih = ops.solveH(h);
      VectorXd GHih = ops.mult_G(Hih);
      VectorXd rhs(k);
      for (int a = 0; a < k; ++a) rhs(a) = -GHih(W[a]) - slack(W[a]);
      mu = ldlt.solve(rhs);
      if (!mu.allFinite()) throw std::runtime_error("qp: singular working-set system");
    }
    VectorXd resid = h;
    for (int a = 0; a < k; ++a) resid += mu(a) * ops.gt_row(W[a]);
    VectorXd p = -ops.solveH(resid);

    double pscale = p.lpNorm<Eigen::Infinity>();
    if (resid.lpNorm<Eigen::Infinity>() <= 1e-9 * (1.0 + h.lpNorm<Eigen::Infinity>()) ||
        pscale <= 1e-11 * (1.0 + U.lpNorm<Eigen::Infinity>())) {
      // stationary on the working set: check dual feasibility
      int worst = -1;
      if (degenerate_streak >= 3) {
        for (int a = 0; a < k; ++a)
          if (mu(a) < -1e-10) { worst = a; break; }  // Bland-style
      } else {
        double mv = -1e-10;
        for (int a = 0; a < k; ++a)
          if (mu(a) < mv) { mv = mu(a); worst = a; }
      }
      if (worst < 0) {
        CoreResult res;
        res.U = std::move(U);
        res.working = std::move(W);
        res.mu = std::move(mu);
        res.iterations = static_cast<int>(it);
        return res;
      }
      inW[W[worst]] = 0;
      W.erase(W.begin() + worst);
      std::fill(banned.begin(), banned.end(), 0);
      degenerate_streak = 0;
      continue;
    }

    VectorXd Gp = ops.mult_G(p);
    double alpha = 1.0;
    int blocking = -1;
    for (int i = 0; i < q; ++i) {
      if (inW[i] || banned[i] || inW[ops.dup(i)]) continue;
      if (Gp(i) > 1e-12 * (1.0 + std::abs(slack(i)))) {
        double ratio = slack(i) / Gp(i);
        if (ratio < -1e-12) ratio = 0.0;
        bool tie = std::abs(ratio - alpha) <= 1e-12 * (1.0 + alpha);
        if (ratio < alpha - 1e-12 * (1.0 + alpha) || (tie && blocking >= 0 &&
            (opts.reverse_tiebreak ? i > blocking : i < blocking))) {
          alpha = std::min(ratio, alpha);
          blocking = i;
        } else if (tie && blocking < 0 && ratio <= 1.0) {
          alpha = std::min(ratio, 1.0);
          blocking = i;
        }
      }
    }
    degenerate_streak = (blocking >= 0 && alpha <= 1e-12) ? degenerate_streak + 1 : 0;
    U += alpha * p;
    if (blocking >= 0 && alpha < 1.0 - 1e-12) {
      bool accept = true;
      if (k > 0) {
        VectorXd col(k);
        for (int a = 0; a < k; ++a) col(a) = ops.ghg(W[a], blocking);
        VectorXd y = ldlt.solve(col);
        double pivot = ops.ghg(blocking, blocking) - col.dot(y);
        if (!(pivot > 1e-10 * (1.0 + ops.ghg(blocking, blocking)))) accept = false;
      }
      if (accept) {
        W.push_back(blocking);
        inW[blocking] = 1;
        std::fill(banned.begin(), banned.end(), 0);
      } else {
        banned[blocking] = 1;  // nearly dependent on the current working set
      }
    }
  }
  throw MaxIterError("qp: iteration cap exceeded");
}

}  // namespace detail

namespace detail {

struct Phase1Result {
  double violation = 0.0;  // worst original-unit violation of the returned point
  VectorXd U;
};

inline Phase1Result solve_phase1(const QpData& qp, const VectorXd& x) {
  VectorXd b = qp.w + qp.E * x;
  VectorXd bn(qp.q + 1);
  bn.head(qp.q) = qp.wn + qp.En * x;
  bn(qp.q) = 0.0;
  const double t0 = std::max(0.0, -bn.head(qp.q).minCoeff());
  Phase1Ops ops{qp};
  SolveOptions opts;
  Phase1Result out;
  out.violation = std::numeric_limits<double>::infinity();
  // exact penalty: escalate once in case M is below the multiplier mass
  for (double bigM : {1e6 * (1.0 + t0), 1e9 * (1.0 + t0)}) {
    VectorXd U0 = VectorXd::Zero(qp.nu() + 1);
    U0(qp.nu()) = t0 + 1.0;
    VectorXd g = VectorXd::Zero(qp.nu() + 1);
    g(qp.nu()) = bigM;
    auto core = active_set_core(ops, g, bn, U0, {}, opts, 50L * (qp.q + 1));
    VectorXd U = core.U.head(qp.nu());
    double viol = std::max(0.0, (qp.G * U - b).maxCoeff());
    if (!std::isfinite(viol)) continue;
    if (viol < out.violation) {
      out.violation = viol;
      out.U = std::move(U);
    }
    if (out.violation <= 1e-8 * (1.0 + b.lpNorm<Eigen::Infinity>())) break;
  }
  if (!std::isfinite(out.violation)) throw std::runtime_error("qp: feasibility phase failed");
  return out;
}

}  // namespace detail

/// Phase-1 value: worst constraint violation of a least-norm relaxed point;
/// zero (below threshold) exactly when GU <= w + Ex admits a solution.
inline double phase1_violation(const QpData& qp, const VectorXd& x, VectorXd* U_out = nullptr) {
  auto res = detail::solve_phase1(qp, x);
  if (U_out) *U_out = res.U;
  return res.violation;
}

/// True when some U satisfies GU <= w + Ex (phase-1 violation below 1e-8).
inline bool is_feasible(const QpData& qp, const VectorXd& x) {
  double t = phase1_violation(qp, x);
  return t <= 1e-8 * (1.0 + (qp.w + qp.E * x).lpNorm<Eigen::Infinity>());
}

/// Full row rank test for the selected constraint rows (pivoted QR with
/// absolute tolerance 1e-9 * ||G_A||).
inline bool check_licq(const QpData& qp, const std::vector<int>& aset) {
  if (aset.empty()) return true;
  if (static_cast<int>(aset.size()) > qp.nu()) return false;
  MatrixXd GA(aset.size(), qp.nu());
  for (size_t i = 0; i < aset.size(); ++i) GA.row(i) = qp.G.row(aset[i]);
  Eigen::ColPivHouseholderQR<MatrixXd> qr(GA.transpose());
  double tol = 1e-9 * GA.norm();
  int rank = 0;
  for (int i = 0; i < std::min(GA.rows(), GA.cols()); ++i)
    if (std::abs(qr.matrixQR()(i, i)) > tol) ++rank;
  return rank == static_cast<int>(aset.size());
}

/// Solve the condensed QP at parameter x. Throws InfeasibleError when x is
/// outside the feasible set and MaxIterError past the 50q iteration cap.
inline QpSolution solve_qp(const QpData& qp, const VectorXd& x, const SolveOptions& opts = {}) {
  VectorXd b = qp.w + qp.E * x;
  const double bscale = 1.0 + b.lpNorm<Eigen::Infinity>();
  const double tol = 1e-8 * bscale;
  VectorXd g = qp.F.transpose() * x;

  VectorXd U0;
  std::vector<int> W0;
  bool have_start = false;
  if (opts.warm_start && !opts.warm_start->empty() &&
      static_cast<int>(opts.warm_start->size()) <= qp.nu()) {
    // equality solution on the guessed set; accept if primal feasible
    const auto& ws = *opts.warm_start;
    const int k = static_cast<int>(ws.size());
    MatrixXd M(k, k);
    VectorXd rhs(k);
    VectorXd Hig = qp.lltH.solve(g);
    for (int a = 0; a < k; ++a) {
      for (int c = 0; c <= a; ++c) M(a, c) = M(c, a) = qp.GHiGt(ws[a], ws[c]);
      rhs(a) = -qp.G.row(ws[a]).dot(Hig) - b(ws[a]);
    }
    Eigen::LDLT<MatrixXd> ldlt(M);
    if (ldlt.info() == Eigen::Success) {
      VectorXd mu = ldlt.solve(rhs);
      VectorXd U = -Hig - qp.HiGt(Eigen::all, ws) * mu;
      if (((b - qp.G * U).array() >= -tol).all()) {
        U0 = U;
        W0 = ws;
        have_start = true;
      }
    }
  }
  if (!have_start) {
    if ((b.array() >= 0).all()) {
      U0 = VectorXd::Zero(qp.nu());
    } else {
      auto ph1 = detail::solve_phase1(qp, x);
      if (ph1.violation > 1e-8 * bscale)
        throw InfeasibleError("qp: parameter outside feasible set");
      U0 = std::move(ph1.U);
    }
  }
  detail::MainOps ops{qp};
  auto core = detail::active_set_core(ops, g, b, U0, W0, opts, 50L * qp.q);

  QpSolution sol;
  sol.lambda_star = VectorXd::Zero(qp.q);
  sol.U_star = core.U;
  sol.iterations = core.iterations;
  for (size_t a = 0; a < core.working.size(); ++a)
    sol.lambda_star(core.working[a]) = std::max(core.mu(a), 0.0);

  VectorXd slack = b - qp.G * sol.U_star;
  for (int i = 0; i < qp.q; ++i) {
    if (slack(i) <= tol) sol.active.push_back(i);
    else sol.inactive.push_back(i);
  }
  const double lscale = 1.0 + sol.lambda_star.lpNorm<Eigen::Infinity>();
  for (int i : sol.active)
    if (sol.lambda_star(i) / lscale <= 1e-8) sol.weakly_active.push_back(i);

  sol.objective = 0.5 * sol.U_star.dot(qp.H * sol.U_star) + x.dot(qp.F * sol.U_star) +
                  0.5 * x.dot(qp.Y * x);
  VectorXd stat = qp.H * sol.U_star + g + qp.G.transpose() * sol.lambda_star;
  sol.kkt_residual = stat.lpNorm<Eigen::Infinity>();
  if (opts.debug) {
    (*opts.debug) << "kkt: stationarity=" << sol.kkt_residual
                  << " max_violation=" << std::max(0.0, -slack.minCoeff())
                  << " iters=" << sol.iterations << " |A|=" << sol.active.size() << "\n";
  }
  return sol;
}

}  // namespace rmpc
