#pragma once

#include <algorithm>
#include <vector>

#include "rmpc/types.hpp"

namespace rmpc {

enum class RowKind : uint8_t { Input, State, Terminal };

struct RowInfo {
  RowKind kind;
  int stage;  // input: 0..N-1, state: 1..N, terminal: N
  int comp;   // component index within the bound vector
  bool upper; // true for <= hi rows, false for >= lo rows
};

/// Condensed QP  min_U 1/2 U'HU + x'FU + 1/2 x'Yx  s.t.  GU <= w + Ex,
/// with row metadata and the factorizations every consumer shares.
struct QpData {
  MatrixXd H, F, Y, G, E;
  VectorXd w;
  MatrixXd S;      // E + G H^-1 F'
  int q = 0;
  int n = 0, m = 0, N = 0;
  std::vector<RowInfo> rows;
  std::vector<int> dup_of;  // representative index of each row's exact-duplicate group

  // shared precomputations
  Eigen::LLT<MatrixXd> lltH;
  MatrixXd HiGt;   // H^-1 G'   (mN x q)
  MatrixXd HiFt;   // H^-1 F'   (mN x n)
  MatrixXd GHiGt;  // G H^-1 G' (q x q)
  // row-normalized copies for the feasibility phase
  MatrixXd Gn, En;
  VectorXd wn, row_norm;
  MatrixXd GnGt;   // Gn Gn' (q x q)

  int nu() const { return static_cast<int>(H.rows()); }

  int stage_of_row(int r) const { return rows[r].stage; }
  RowKind kind_of_row(int r) const { return rows[r].kind; }

  // row index layout: stage 0 holds 2m input rows; stages 1..N-1 hold
  // 2m input rows then 2n state rows; stage N holds 2n state rows and
  // then the terminal rows.
  int input_row(int stage, int comp, bool upper) const {
    int off = stage == 0 ? 0 : 2 * m + (stage - 1) * (2 * m + 2 * n);
    return off + (upper ? 0 : m) + comp;
  }
  int state_row(int stage, int comp, bool upper) const {
    int off = 2 * m + (stage - 1) * (2 * m + 2 * n) + (stage == N ? 0 : 2 * m);
    return off + (upper ? 0 : n) + comp;
  }

  /// Map a constraint row to the same bound at an earlier stage; -1 when the
  /// shifted row does not exist (stage fell off the horizon start).
  int shift_row(int r, int shift) const {
    const RowInfo& ri = rows[r];
    if (ri.kind == RowKind::Terminal) return -1;
    int s = ri.stage - shift;
    if (ri.kind == RowKind::Input) return s >= 0 ? input_row(s, ri.comp, ri.upper) : -1;
    return s >= 1 ? state_row(s, ri.comp, ri.upper) : -1;
  }
};

/// Build the condensed QP from the full MPC description. Input bounds are
/// imposed for stages 0..N-1 and state bounds for the predicted states
/// x(1)..x(N); the x(0) rows carry no U dependence and are omitted.
inline QpData condense(const MpcSpec& spec) {
  spec.validate();
  const MatrixXd& A = spec.system.A;
  const MatrixXd& B = spec.system.B;
  const int n = spec.system.n(), m = spec.system.m(), N = spec.N;

  std::vector<MatrixXd> Apow(N + 1);
  Apow[0] = MatrixXd::Identity(n, n);
  for (int i = 1; i <= N; ++i) Apow[i] = Apow[i - 1] * A;

  MatrixXd Phi(N * n, n);
  MatrixXd Gam = MatrixXd::Zero(N * n, N * m);
  for (int i = 1; i <= N; ++i) {
    Phi.middleRows((i - 1) * n, n) = Apow[i];
    for (int j = 0; j < i; ++j)
      Gam.block((i - 1) * n, j * m, n, m) = Apow[i - 1 - j] * B;
  }

  MatrixXd Qbar = MatrixXd::Zero(N * n, N * n);
  for (int i = 1; i < N; ++i) Qbar.block((i - 1) * n, (i - 1) * n, n, n) = spec.Q;
  Qbar.bottomRightCorner(n, n) = spec.P;
  MatrixXd Rbar = MatrixXd::Zero(N * m, N * m);
  for (int i = 0; i < N; ++i) Rbar.block(i * m, i * m, m, m) = spec.R;

  QpData qp;
  qp.n = n;
  qp.m = m;
  qp.N = N;
  qp.H = 2.0 * (Gam.transpose() * Qbar * Gam + Rbar);
  qp.H = 0.5 * (qp.H + qp.H.transpose()).eval();
  qp.F = 2.0 * Phi.transpose() * Qbar * Gam;
  qp.Y = 2.0 * (spec.Q + Phi.transpose() * Qbar * Phi);

  const int rT = spec.terminal.rows();
  const int q = 2 * m * N + 2 * n * N + rT;
  qp.q = q;
  qp.G = MatrixXd::Zero(q, N * m);
  qp.E = MatrixXd::Zero(q, n);
  qp.w = VectorXd::Zero(q);
  qp.rows.reserve(q);

  int at = 0;
  auto push_bounds = [&](const MatrixXd& Gu, const MatrixXd& Gl, const MatrixXd& Eu,
                         const MatrixXd& El, const VectorXd& hi, const VectorXd& lo,
                         RowKind kind, int stage) {
    const int k = static_cast<int>(hi.size());
    qp.G.middleRows(at, k) = Gu;
    qp.E.middleRows(at, k) = Eu;
    qp.w.segment(at, k) = hi;
    for (int j = 0; j < k; ++j) qp.rows.push_back({kind, stage, j, true});
    at += k;
    qp.G.middleRows(at, k) = Gl;
    qp.E.middleRows(at, k) = El;
    qp.w.segment(at, k) = -lo;
    for (int j = 0; j < k; ++j) qp.rows.push_back({kind, stage, j, false});
    at += k;
  };

  for (int i = 0; i < N; ++i) {
    MatrixXd sel = MatrixXd::Zero(m, N * m);
    sel.middleCols(i * m, m) = MatrixXd::Identity(m, m);
    push_bounds(sel, -sel, MatrixXd::Zero(m, n), MatrixXd::Zero(m, n),
                spec.constraints.u_hi, spec.constraints.u_lo, RowKind::Input, i);
    if (i >= 1) {
      MatrixXd Gi = Gam.middleRows((i - 1) * n, n);
      push_bounds(Gi, -Gi, -Apow[i], Apow[i], spec.constraints.x_hi, spec.constraints.x_lo,
                  RowKind::State, i);
    }
  }
  MatrixXd GN = Gam.bottomRows(n);
  push_bounds(GN, -GN, -Apow[N], Apow[N], spec.constraints.x_hi, spec.constraints.x_lo,
              RowKind::State, N);
  qp.G.middleRows(at, rT) = spec.terminal.C * GN;
  qp.E.middleRows(at, rT) = -spec.terminal.C * Apow[N];
  qp.w.segment(at, rT) = spec.terminal.c;
  for (int j = 0; j < rT; ++j) qp.rows.push_back({RowKind::Terminal, N, j, true});
  at += rT;

  if ((qp.w.array() <= 0).any())
    throw std::invalid_argument("condense: origin not strictly feasible (w must be > 0)");

  // group exact duplicate rows (terminal facets can coincide with state
  // bound rows); the solver keeps at most one per group in its working set
  qp.dup_of.assign(q, -1);
  {
    std::vector<int> order(q);
    for (int i = 0; i < q; ++i) order[i] = i;
    auto row_less = [&](int a, int c) {
      if (qp.w(a) != qp.w(c)) return qp.w(a) < qp.w(c);
      for (int j = 0; j < qp.G.cols(); ++j)
        if (qp.G(a, j) != qp.G(c, j)) return qp.G(a, j) < qp.G(c, j);
      for (int j = 0; j < n; ++j)
        if (qp.E(a, j) != qp.E(c, j)) return qp.E(a, j) < qp.E(c, j);
      return false;
    };
    auto row_eq = [&](int a, int c) { return !row_less(a, c) && !row_less(c, a); };
    std::sort(order.begin(), order.end(), row_less);
    int run_start = 0;
    for (int i = 1; i <= q; ++i) {
      if (i == q || !row_eq(order[i], order[run_start])) {
        int rep = *std::min_element(order.begin() + run_start, order.begin() + i);
        for (int j = run_start; j < i; ++j) qp.dup_of[order[j]] = rep;
        run_start = i;
      }
    }
  }

  qp.lltH.compute(qp.H);
  if (qp.lltH.info() != Eigen::Success)
    throw std::runtime_error("condense: H not positive definite");
  qp.HiGt = qp.lltH.solve(qp.G.transpose());
  qp.HiFt = qp.lltH.solve(qp.F.transpose());
  qp.S = qp.E + qp.G * qp.HiFt;
  qp.GHiGt = qp.G * qp.HiGt;
  qp.GHiGt = 0.5 * (qp.GHiGt + qp.GHiGt.transpose()).eval();

  qp.row_norm = qp.G.rowwise().norm();
  for (int i = 0; i < q; ++i) qp.row_norm(i) = std::max(qp.row_norm(i), 1e-300);
  qp.Gn = qp.row_norm.cwiseInverse().asDiagonal() * qp.G;
  qp.En = qp.row_norm.cwiseInverse().asDiagonal() * qp.E;
  qp.wn = qp.w.cwiseQuotient(qp.row_norm);
  qp.GnGt = qp.Gn * qp.Gn.transpose();
  qp.GnGt = 0.5 * (qp.GnGt + qp.GnGt.transpose()).eval();
  return qp;
}

}  // namespace rmpc
