#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rmpc/qp.hpp"
#include "rmpc/types.hpp"

namespace rmpc {

/// Affine law U(x) = Kbar x + bbar with its polytope of validity
/// { x : T_mat x <= d_vec }. The first |I| polytope rows are primal
/// (one per inactive constraint, in inactive order), the last |A| rows
/// are dual (one per generating active constraint, in active order);
/// the dual row slacks equal the working multipliers.
struct RegionLaw {
  MatrixXd Kbar;
  VectorXd bbar;
  MatrixXd T_mat;
  VectorXd d_vec;
  std::vector<int> gen_aset;    // sorted ascending
  std::vector<int> inactive;    // complement, sorted ascending

  int m = 0;  // input block size for the feedback-law accessors

  MatrixXd K() const { return Kbar.topRows(m); }
  VectorXd b() const { return bbar.head(m); }
  VectorXd input(const VectorXd& x) const { return Kbar.topRows(m) * x + bbar.head(m); }
  VectorXd full_sequence(const VectorXd& x) const { return Kbar * x + bbar; }

  int primal_rows() const { return static_cast<int>(inactive.size()); }
  bool row_is_primal(int r) const { return r < primal_rows(); }
  /// constraint index a polytope row tracks
  int row_constraint(int r) const {
    return row_is_primal(r) ? inactive[r] : gen_aset[r - primal_rows()];
  }
};

inline bool contains(const RegionLaw& law, const VectorXd& x, double tol) {
  return ((law.T_mat * x - law.d_vec).array() <= tol).all();
}
inline bool contains(const RegionLaw& law, const VectorXd& x) {
  return contains(law, x, 1e-9 * (1.0 + law.d_vec.lpNorm<Eigen::Infinity>()));
}

/// Build the affine law and polytope generated by an active set. Throws
/// LicqError when the active rows are rank deficient or the working-set
/// Gram matrix is numerically singular (condition above 1e12).
inline RegionLaw law_from_active_set(const QpData& qp, const std::vector<int>& aset) {
  RegionLaw law;
  law.m = qp.m;
  law.gen_aset = aset;
  std::sort(law.gen_aset.begin(), law.gen_aset.end());
  const int ka = static_cast<int>(law.gen_aset.size());
  law.inactive.reserve(qp.q - ka);
  {
    size_t ai = 0;
    for (int i = 0; i < qp.q; ++i) {
      if (ai < law.gen_aset.size() && law.gen_aset[ai] == i) ++ai;
      else law.inactive.push_back(i);
    }
  }

  if (ka == 0) {
    law.Kbar = -qp.HiFt;
    law.bbar = VectorXd::Zero(qp.nu());
    law.T_mat = -qp.S;
    law.d_vec = qp.w;
    return law;
  }
  if (!check_licq(qp, law.gen_aset)) throw LicqError("active rows rank deficient");

  MatrixXd W(ka, ka);
  for (int a = 0; a < ka; ++a)
    for (int c = 0; c <= a; ++c) W(a, c) = W(c, a) = qp.GHiGt(law.gen_aset[a], law.gen_aset[c]);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(W);
  double emin = es.eigenvalues().minCoeff(), emax = es.eigenvalues().maxCoeff();
  if (!(emin > 0.0) || emax / emin > 1e12)
    throw LicqError("active-set Gram matrix ill conditioned");

  MatrixXd SA(ka, qp.n);
  VectorXd wA(ka);
  for (int a = 0; a < ka; ++a) {
    SA.row(a) = qp.S.row(law.gen_aset[a]);
    wA(a) = qp.w(law.gen_aset[a]);
  }
  Eigen::LLT<MatrixXd> llt(W);
  MatrixXd WiSA = llt.solve(SA);   // W^-1 S^A
  VectorXd Wiw = llt.solve(wA);    // W^-1 w^A

  law.Kbar = qp.HiGt(Eigen::all, law.gen_aset) * WiSA - qp.HiFt;
  law.bbar = qp.HiGt(Eigen::all, law.gen_aset) * Wiw;

  const int ki = static_cast<int>(law.inactive.size());
  law.T_mat.resize(ki + ka, qp.n);
  law.d_vec.resize(ki + ka);
  MatrixXd GI_HiGA = qp.GHiGt(law.inactive, law.gen_aset);
  law.T_mat.topRows(ki) = GI_HiGA * WiSA - qp.S(law.inactive, Eigen::all);
  law.d_vec.head(ki) = qp.w(law.inactive) - GI_HiGA * Wiw;
  law.T_mat.bottomRows(ka) = WiSA;
  law.d_vec.tail(ka) = -Wiw;
  return law;
}

struct FacetCrossing {
  double t_exit = 0.0;
  std::vector<int> rows;  // every row attaining the minimum within tie tolerance
};

/// First facet crossed when moving from x_from (inside) toward x_to.
/// Returns nullopt when the whole segment stays inside.
inline std::optional<FacetCrossing> crossed_facet(const RegionLaw& region, const VectorXd& x_from,
                                                  const VectorXd& x_to) {
  const double ctol = 1e-9 * (1.0 + region.d_vec.lpNorm<Eigen::Infinity>());
  if (!contains(region, x_from, ctol))
    throw std::invalid_argument("crossed_facet: x_from outside region");
  VectorXd dir = x_to - x_from;
  VectorXd Tx = region.T_mat * x_from;
  VectorXd Td = region.T_mat * dir;
  double t_exit = std::numeric_limits<double>::infinity();
  for (int i = 0; i < region.T_mat.rows(); ++i) {
    if (Td(i) <= 1e-14) continue;  // not moving outward through this facet
    double t = (region.d_vec(i) - Tx(i)) / Td(i);
    if (t < 0.0) t = 0.0;
    t_exit = std::min(t_exit, t);
  }
  if (!(t_exit <= 1.0)) return std::nullopt;
  FacetCrossing out;
  out.t_exit = t_exit;
  for (int i = 0; i < region.T_mat.rows(); ++i) {
    if (Td(i) <= 1e-14) continue;
    double t = std::max(0.0, (region.d_vec(i) - Tx(i)) / Td(i));
    if (t <= t_exit + 1e-9 * (1.0 + t_exit)) out.rows.push_back(i);
  }
  return out;
}

/// Region on which a frozen law stays feasible and keeps certifying descent:
/// a polytope (the frozen sequence satisfies every constraint) intersected
/// with the sublevel condition of the frozen-sequence cost quadric.
struct ExtendedRegion {
  RegionLaw base;
  MatrixXd feas_C;
  VectorXd feas_c;
  MatrixXd quad_M;
  VectorXd quad_v;
  double quad_s = 0.0;
  double anchor_cost = 0.0;

  /// cost of applying the frozen input sequence from state x
  double frozen_cost(const VectorXd& x) const {
    return 0.5 * x.dot(quad_M * x) + quad_v.dot(x) + quad_s;
  }
};

inline ExtendedRegion extend_region(const QpData& qp, const RegionLaw& law, const MpcSpec& spec,
                                    const VectorXd& anchor_x) {
  (void)spec;
  ExtendedRegion er;
  er.base = law;
  er.feas_C = qp.G * law.Kbar - qp.E;
  er.feas_c = qp.w - qp.G * law.bbar;
  MatrixXd HK = qp.H * law.Kbar;
  er.quad_M = law.Kbar.transpose() * HK + qp.F * law.Kbar +
              (qp.F * law.Kbar).transpose() + qp.Y;
  er.quad_M = 0.5 * (er.quad_M + er.quad_M.transpose()).eval();
  er.quad_v = law.Kbar.transpose() * (qp.H * law.bbar) + qp.F * law.bbar;
  er.quad_s = 0.5 * law.bbar.dot(qp.H * law.bbar);
  er.anchor_cost = er.frozen_cost(anchor_x);
  return er;
}

/// Membership: frozen law feasible at x and its cost below the carried bound
/// (the caller keeps the bound decreasing by the realized stage costs).
inline bool extended_contains(const ExtendedRegion& er, const VectorXd& x, double carried_bound) {
  double ftol = 1e-9 * (1.0 + er.feas_c.lpNorm<Eigen::Infinity>());
  if (!((er.feas_C * x - er.feas_c).array() <= ftol).all()) return false;
  return er.frozen_cost(x) <= carried_bound + 1e-9 * (1.0 + std::abs(carried_bound));
}

/// Diagnostic record for a law: {|A|, indices} as 32-bit little-endian words.
inline std::vector<uint8_t> serialize_active_set(const std::vector<int>& aset) {
  std::vector<uint8_t> out;
  auto push32 = [&out](uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
  };
  push32(static_cast<uint32_t>(aset.size()));
  for (int i : aset) push32(static_cast<uint32_t>(i));
  return out;
}

inline std::vector<int> deserialize_active_set(const std::vector<uint8_t>& buf) {
  if (buf.size() < 4 || buf.size() % 4 != 0) throw std::invalid_argument("bad active-set record");
  auto read32 = [&buf](size_t at) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(buf[at + i]) << (8 * i);
    return v;
  };
  uint32_t count = read32(0);
  if (buf.size() != 4 * (count + 1)) throw std::invalid_argument("bad active-set record length");
  std::vector<int> out(count);
  for (uint32_t i = 0; i < count; ++i) out[i] = static_cast<int>(read32(4 * (i + 1)));
  return out;
}

}  // namespace rmpc
