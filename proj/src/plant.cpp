// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#include "districtcool/plant.hpp"

#include <algorithm>
#include <cmath>

namespace dcool {

double ng_gordon_electric(double e_cool, double t_out, const NgGordonParams& p,
                          double dt) {
  const double denom = p.t_cw - p.a4 / dt * e_cool;
  if (denom <= 0.0) {
    throw SolverError("cooling request at or beyond the chiller model pole");
  }
  const double num = p.a1 * t_out * p.t_cw * dt + p.a2 * (t_out - p.t_cw) * dt +
                     p.a3 * t_out * e_cool;
  return num / denom - e_cool;
}

double chiller_electric(double e_cool, const BiquadFit& fit) {
  const double e2 = e_cool * e_cool;
  return fit.c2 * e2 * e2 + fit.c1 * e2 + fit.c0;
}

BiquadFit fit_even_quartic(const std::vector<double>& e_cool,
                           const std::vector<double>& e_electric,
                           const std::vector<double>& weights) {
  if (e_cool.size() != e_electric.size() || e_cool.size() != weights.size() ||
      e_cool.size() < 3) {
    throw ModelError("quartic regression needs at least three matched samples");
  }
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < e_cool.size(); ++i) {
    const double e2 = e_cool[i] * e_cool[i];
    const Eigen::Vector3d row(e2 * e2, e2, 1.0);
    ata += weights[i] * row * row.transpose();
    atb += weights[i] * row * e_electric[i];
  }
  const Eigen::Vector3d c = ata.ldlt().solve(atb);
  if (!c.allFinite()) throw SolverError("quartic regression normal equations failed");
  return BiquadFit{c(2), c(1), c(0)};
}

BiquadFit fit_biquadratic(double t_out, const NgGordonParams& p, double dt,
                          int grid_size) {
  if (grid_size < 3) throw ModelError("fit grid too small");
  const double pole = p.t_cw * dt / p.a4;

  // locate the max-COP point on a fine scan below the pole
  double cop_max = 0.0, ec_cop_max = 0.0;
  const int scan = 2000;
  for (int i = 1; i < scan; ++i) {
    const double ec = pole * 0.995 * i / scan;
    const double ee = ng_gordon_electric(ec, t_out, p, dt);
    if (ee <= 0.0) continue;
    const double cop = ec / ee;
    if (cop > cop_max) {
      cop_max = cop;
      ec_cop_max = ec;
    }
  }
  if (cop_max <= 0.0) throw ModelError("no positive-COP operating point in domain");

  // grid upper end: largest Ec (below the pole) with COP >= half the max
  double ec_hi = ec_cop_max;
  for (int i = scan - 1; i >= 1; --i) {
    const double ec = pole * 0.995 * i / scan;
    const double ee = ng_gordon_electric(ec, t_out, p, dt);
    if (ee > 0.0 && ec / ee >= 0.5 * cop_max) {
      ec_hi = std::max(ec_hi, ec);
      break;
    }
  }

  std::vector<double> ecs, ees, ws;
  const auto add = [&](double ec, double w) {
    ecs.push_back(ec);
    ees.push_back(ng_gordon_electric(ec, t_out, p, dt));
    ws.push_back(w);
  };
  for (int i = 0; i < grid_size; ++i) {
    add(ec_hi * i / (grid_size - 1), 1.0);
  }
  add(0.0, 1e4);          // zero-request anchor
  add(ec_cop_max, 1e4);   // max-COP anchor

  BiquadFit fit = fit_even_quartic(ecs, ees, ws);
  fit.c2 = std::max(fit.c2, 0.0);
  fit.c1 = std::max(fit.c1, 0.0);

  // anchors must land within 1% of the full model
  const double ee0 = ng_gordon_electric(0.0, t_out, p, dt);
  const double ee_cop = ng_gordon_electric(ec_cop_max, t_out, p, dt);
  if (std::abs(chiller_electric(0.0, fit) - ee0) > 0.01 * std::abs(ee0) ||
      std::abs(chiller_electric(ec_cop_max, fit) - ee_cop) > 0.01 * std::abs(ee_cop)) {
    throw SolverError("biquadratic fit anchor residual exceeds 1%");
  }
  return fit;
}

const BiquadFit& ChillerModel::fit_at(double t_out) const {
  if (!has_ng_) return fixed_;
  auto it = cache_.find(t_out);
  if (it == cache_.end()) {
    it = cache_.emplace(t_out, fit_biquadratic(t_out, ng_, dt_)).first;
  }
  return it->second;
}

void ChillerModel::warm_cache(const std::vector<double>& t_out_values) const {
  if (!has_ng_) return;
  for (double t : t_out_values) fit_at(t);
}

void StorageParams::validate(int n_buildings) const {
  if (!(loss > 0.0 && loss < 1.0))
    throw ModelError("storage loss coefficient must lie in (0,1)");
  if (capacity <= 0.0) throw ModelError("storage capacity must be > 0");
  if (static_cast<int>(exchange_max.size()) != n_buildings)
    throw ModelError("storage exchange limits must be given per building");
  for (double e : exchange_max)
    if (e <= 0.0) throw ModelError("storage exchange limits must be > 0");
}

StorageTrajectory storage_trajectory(double loss, int n_t) {
  StorageTrajectory st;
  st.init_coeff = Vector(n_t + 1);
  st.exch_coeff = Matrix::Zero(n_t + 1, n_t);
  double pw = 1.0;
  for (int t = 1; t <= n_t + 1; ++t) {
    st.init_coeff(t - 1) = pw;
    pw *= loss;
  }
  for (int t = 2; t <= n_t + 1; ++t) {
    for (int tau = 1; tau < t && tau <= n_t; ++tau) {
      st.exch_coeff(t - 1, tau - 1) = -st.init_coeff(t - 1 - tau);
    }
  }
  return st;
}

}  // namespace dcool
