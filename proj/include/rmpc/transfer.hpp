#pragma once

#include <complex>
#include <vector>

#include "rmpc/linalg.hpp"
#include "rmpc/types.hpp"

namespace rmpc {

/// Rational function in s, coefficients in descending powers.
struct RationalFn {
  VectorXd num;
  VectorXd den;

  bool is_zero() const { return num.size() == 0 || num.cwiseAbs().maxCoeff() == 0.0; }

  std::complex<double> eval(std::complex<double> s) const {
    auto horner = [&](const VectorXd& p) {
      std::complex<double> v = 0.0;
      for (int i = 0; i < p.size(); ++i) v = v * s + p(i);
      return v;
    };
    return horner(num) / horner(den);
  }
};

using TransferMatrix = std::vector<std::vector<RationalFn>>;

struct StateSpace {
  MatrixXd A, B, C, D;
  int n() const { return static_cast<int>(A.rows()); }
};

namespace detail {

inline VectorXd poly_trim(const VectorXd& p) {
  int i = 0;
  while (i < p.size() - 1 && p(i) == 0.0) ++i;
  return p.tail(p.size() - i);
}

inline VectorXd poly_mul(const VectorXd& a, const VectorXd& b) {
  VectorXd out = VectorXd::Zero(a.size() + b.size() - 1);
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) out(i + j) += a(i) * b(j);
  return out;
}

struct ProperParts {
  double D = 0.0;
  VectorXd beta;  // strictly proper numerator, padded to deg(den)-1
  VectorXd a;     // monic denominator tail
};

inline ProperParts split_proper(const RationalFn& g) {
  VectorXd num = poly_trim(g.num);
  VectorXd den = poly_trim(g.den);
  if (num.size() > den.size()) throw std::invalid_argument("transfer entry not proper");
  double lead = den(0);
  den /= lead;
  num /= lead;
  ProperParts pp;
  if (num.size() == den.size()) {
    pp.D = num(0);
    num = (num - pp.D * den).tail(num.size() - 1).eval();
  }
  const int k = static_cast<int>(den.size()) - 1;
  pp.beta = VectorXd::Zero(k);
  if (num.size() > 0) pp.beta.tail(num.size()) = num;
  pp.a = den.tail(k);
  return pp;
}

// top-row companion of a monic polynomial tail
inline MatrixXd companion(const VectorXd& a) {
  const int k = static_cast<int>(a.size());
  MatrixXd A = MatrixXd::Zero(k, k);
  A.row(0) = -a.transpose();
  for (int r = 1; r < k; ++r) A(r, r - 1) = 1.0;
  return A;
}

}  // namespace detail

/// Per-entry controllable-canonical blocks stacked row-major.
inline StateSpace stack_entry_realization(const TransferMatrix& tf) {
  const int p = static_cast<int>(tf.size());
  const int m = static_cast<int>(tf[0].size());
  struct Block {
    int i, j;
    detail::ProperParts pp;
  };
  std::vector<Block> blocks;
  int n = 0;
  for (int i = 0; i < p; ++i) {
    if (static_cast<int>(tf[i].size()) != m) throw std::invalid_argument("ragged transfer matrix");
    for (int j = 0; j < m; ++j) {
      if (tf[i][j].is_zero()) continue;
      blocks.push_back({i, j, detail::split_proper(tf[i][j])});
      n += static_cast<int>(blocks.back().pp.a.size());
    }
  }
  StateSpace ss;
  ss.A = MatrixXd::Zero(n, n);
  ss.B = MatrixXd::Zero(n, m);
  ss.C = MatrixXd::Zero(p, n);
  ss.D = MatrixXd::Zero(p, m);
  int off = 0;
  for (const auto& b : blocks) {
    const int k = static_cast<int>(b.pp.a.size());
    ss.D(b.i, b.j) += b.pp.D;
    if (k == 0) continue;
    ss.A.block(off, off, k, k) = detail::companion(b.pp.a);
    ss.B(off, b.j) = 1.0;
    ss.C.block(b.i, off, 1, k) = b.pp.beta.transpose();
    off += k;
  }
  return ss;
}

/// Observer-companion block per output row over the product of that row's
/// denominators (dual of the input-column companion form).
inline StateSpace stack_row_observer_realization(const TransferMatrix& tf) {
  const int p = static_cast<int>(tf.size());
  const int m = static_cast<int>(tf[0].size());
  std::vector<MatrixXd> Ablk, Bblk;
  std::vector<int> row_of;
  MatrixXd D = MatrixXd::Zero(p, m);
  int n = 0;
  for (int i = 0; i < p; ++i) {
    VectorXd prod(1);
    prod << 1.0;
    for (int j = 0; j < m; ++j) {
      if (tf[i][j].is_zero()) continue;
      VectorXd den = detail::poly_trim(tf[i][j].den);
      prod = detail::poly_mul(prod, den / den(0));
    }
    const int k = static_cast<int>(prod.size()) - 1;
    if (k == 0) {
      for (int j = 0; j < m; ++j)
        if (!tf[i][j].is_zero()) D(i, j) += detail::split_proper(tf[i][j]).D;
      continue;
    }
    MatrixXd Bi = MatrixXd::Zero(k, m);
    for (int j = 0; j < m; ++j) {
      if (tf[i][j].is_zero()) continue;
      VectorXd den = detail::poly_trim(tf[i][j].den);
      VectorXd num = detail::poly_trim(tf[i][j].num);
      // multiply num by prod/den to put the entry over the row denominator
      VectorXd mult = VectorXd::Zero(static_cast<int>(prod.size() - den.size()) + 1);
      {
        // exact polynomial division prod / (den/den0): remainder is zero by construction
        VectorXd rem = prod;
        VectorXd dmon = den / den(0);
        for (int t = 0; t <= static_cast<int>(prod.size() - den.size()); ++t) {
          mult(t) = rem(t);
          for (int u = 0; u < dmon.size(); ++u) rem(t + u) -= mult(t) * dmon(u);
        }
      }
      RationalFn scaled{detail::poly_mul(num / den(0), mult), prod};
      auto pp = detail::split_proper(scaled);
      D(i, j) += pp.D;
      Bi.col(j) = pp.beta;
    }
    Ablk.push_back(detail::companion((prod / prod(0)).tail(k)).transpose());
    Bblk.push_back(Bi);
    row_of.push_back(i);
    n += k;
  }
  StateSpace ss;
  ss.A = MatrixXd::Zero(n, n);
  ss.B = MatrixXd::Zero(n, m);
  ss.C = MatrixXd::Zero(p, n);
  ss.D = D;
  int off = 0;
  for (size_t b = 0; b < Ablk.size(); ++b) {
    const int k = static_cast<int>(Ablk[b].rows());
    ss.A.block(off, off, k, k) = Ablk[b];
    ss.B.block(off, 0, k, m) = Bblk[b];
    ss.C(row_of[b], off) = 1.0;  // e1' of the observer block
    off += k;
  }
  return ss;
}

/// Kalman controllability pruning: restrict to the controllable subspace
/// (orthonormal SVD basis, rank tolerance 1e-9 relative).
inline StateSpace prune_uncontrollable(const StateSpace& ss, double tol = 1e-9) {
  const int n = ss.n();
  MatrixXd ctrb(n, n * ss.B.cols());
  MatrixXd blk = ss.B;
  for (int i = 0; i < n; ++i) {
    ctrb.middleCols(i * ss.B.cols(), ss.B.cols()) = blk;
    blk = ss.A * blk;
  }
  Eigen::JacobiSVD<MatrixXd> svd(ctrb, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * std::max(s(0), 1.0)) ++r;
  if (r == n) return ss;
  MatrixXd V = svd.matrixU().leftCols(r);
  return {V.transpose() * ss.A * V, V.transpose() * ss.B, ss.C * V, ss.D};
}

inline StateSpace prune_unobservable(const StateSpace& ss, double tol = 1e-9) {
  StateSpace dual{ss.A.transpose(), ss.C.transpose(), ss.B.transpose(), ss.D.transpose()};
  StateSpace red = prune_uncontrollable(dual, tol);
  return {red.A.transpose(), red.C.transpose(), red.B.transpose(), ss.D};
}

/// Minimal-order realization: per-entry canonical stacking with
/// uncontrollable and unobservable subspaces removed.
inline StateSpace realize_transfer_function(const TransferMatrix& tf, double tol = 1e-9) {
  StateSpace ss = stack_entry_realization(tf);
  ss = prune_uncontrollable(ss, tol);
  ss = prune_unobservable(ss, tol);
  return ss;
}

inline ContinuousSystem to_continuous(const StateSpace& ss) { return {ss.A, ss.B}; }

inline Eigen::MatrixXcd freq_response(const StateSpace& ss, std::complex<double> s) {
  Eigen::MatrixXcd M = s * Eigen::MatrixXcd::Identity(ss.n(), ss.n()) - ss.A.cast<std::complex<double>>();
  return ss.C.cast<std::complex<double>>() * M.lu().solve(ss.B.cast<std::complex<double>>()) +
         ss.D.cast<std::complex<double>>();
}

inline Eigen::MatrixXcd freq_response(const TransferMatrix& tf, std::complex<double> s) {
  Eigen::MatrixXcd G(tf.size(), tf[0].size());
  for (size_t i = 0; i < tf.size(); ++i)
    for (size_t j = 0; j < tf[i].size(); ++j) G(i, j) = tf[i][j].eval(s);
  return G;
}

/// Discrete Lyapunov solve X = A X A' + W by doubling (requires rho(A) < 1).
inline MatrixXd discrete_lyapunov(const MatrixXd& A, const MatrixXd& W, int max_iter = 100) {
  MatrixXd X = W;
  MatrixXd Ak = A;
  for (int i = 0; i < max_iter; ++i) {
    MatrixXd Xn = X + Ak * X * Ak.transpose();
    MatrixXd An = Ak * Ak;
    double delta = (Xn - X).norm();
    X = 0.5 * (Xn + Xn.transpose());
    Ak = An;
    if (delta <= 1e-14 * std::max(1.0, X.norm())) return X;
  }
  throw std::runtime_error("discrete_lyapunov: no convergence (unstable A?)");
}

/// Similarity-transform a stable discrete system to balanced coordinates
/// (equal diagonal controllability/observability Gramians).
inline StateSpace balance_discrete(const StateSpace& ss) {
  MatrixXd Wc = discrete_lyapunov(ss.A, ss.B * ss.B.transpose());
  MatrixXd Wo = discrete_lyapunov(ss.A.transpose(), ss.C.transpose() * ss.C);
  Eigen::LLT<MatrixXd> llt(Wc);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("balance_discrete: controllability Gramian not positive definite");
  MatrixXd L = llt.matrixL();
  Eigen::JacobiSVD<MatrixXd> svd(L.transpose() * Wo * L, Eigen::ComputeThinU);
  VectorXd s = svd.singularValues();
  MatrixXd T = L * svd.matrixU() * s.array().pow(-0.25).matrix().asDiagonal();
  Eigen::PartialPivLU<MatrixXd> Tlu(T);
  return {Tlu.solve(ss.A * T), Tlu.solve(ss.B), ss.C * T, ss.D};
}

}  // namespace rmpc
