// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#include "districtcool/thermal.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace dcool {

RadiationLinearization linearize_radiation(double t_bar, double sigma) {
  if (t_bar < 0.0) {
    throw ModelError("radiation linearization point must be >= 0 K");
  }
  const double t3 = t_bar * t_bar * t_bar;
  return {4.0 * sigma * t3, -3.0 * sigma * t3 * t_bar};
}

WallModel assemble_wall_dynamics(const WallSpec& spec, int n_zones) {
  const int ns = static_cast<int>(spec.slices.size());
  if (ns == 0) throw ModelError("wall '" + spec.name + "' has no slices");
  if (!spec.first.is_outdoor() && spec.first.zone >= n_zones)
    throw ModelError("wall '" + spec.name + "': first boundary zone out of range");
  if (!spec.last.is_outdoor() && spec.last.zone >= n_zones)
    throw ModelError("wall '" + spec.name + "': last boundary zone out of range");

  for (int s = 0; s < ns; ++s) {
    const auto& p = spec.slices[s];
    if (p.capacity <= 0.0)
      throw ModelError("wall '" + spec.name + "': slice capacity must be > 0");
    if (p.emissivity < 0.0 || p.emissivity >= 1.0)
      throw ModelError("wall '" + spec.name + "': emissivity must be in [0,1)");
    // no conduction through the exposed faces, no convection inside the wall
    if (s == 0 && p.cond_prev != 0.0)
      throw ModelError("wall '" + spec.name + "': boundary slice 1 has conduction");
    if (s == ns - 1 && p.cond_next != 0.0)
      throw ModelError("wall '" + spec.name + "': boundary slice n_s has conduction");
    if (s > 0 && p.conv_prev != 0.0)
      throw ModelError("wall '" + spec.name + "': interior convection not allowed");
    if (s < ns - 1 && p.conv_next != 0.0)
      throw ModelError("wall '" + spec.name + "': interior convection not allowed");
    if (s > 0 && s < ns - 1 &&
        (p.absorb_short != 0.0 || p.absorb_long != 0.0 || p.emissivity != 0.0))
      throw ModelError("wall '" + spec.name + "': interior slice has radiation terms");
    if (s > 0 && spec.slices[s - 1].cond_next != p.cond_prev)
      throw ModelError("wall '" + spec.name + "': conduction coefficients not symmetric");
  }

  WallModel wm;
  wm.spec = spec;
  wm.A = Matrix::Zero(ns, ns);
  wm.B = Matrix::Zero(ns, n_zones);
  wm.F = Matrix::Zero(ns, 4);

  for (int s = 0; s < ns; ++s) {
    const auto& p = spec.slices[s];
    const double inv_c = 1.0 / p.capacity;
    if (s > 0) {
      const double h = p.cond_prev;
      wm.A(s, s - 1) += h * inv_c;
      wm.A(s, s) -= h * inv_c;
    }
    if (s < ns - 1) {
      const double h = p.cond_next;
      wm.A(s, s + 1) += h * inv_c;
      wm.A(s, s) -= h * inv_c;
    }
    // exposed faces: convection toward the zone or the ambient
    const bool is_first = (s == 0);
    const bool is_last = (s == ns - 1);
    if (is_first || is_last) {
      const double hbar = is_first ? p.conv_prev : p.conv_next;
      const Boundary& b = is_first ? spec.first : spec.last;
      wm.A(s, s) -= hbar * inv_c;
      if (b.is_outdoor()) {
        wm.F(s, 0) += hbar * inv_c;
      } else {
        wm.B(s, b.zone) += hbar * inv_c;
      }
      wm.F(s, 1) += p.absorb_short * inv_c;
      wm.F(s, 2) += p.absorb_long * inv_c;
      if (p.emissivity > 0.0) {
        const auto rad = linearize_radiation(p.t_bar);
        wm.A(s, s) -= p.emissivity * rad.slope * inv_c;
        wm.F(s, 3) -= p.emissivity * rad.intercept * inv_c;
      }
    }
    wm.F(s, 3) += p.generation * inv_c;
  }
  return wm;
}

BuildingThermalModel assemble_building_dynamics(const std::vector<WallModel>& walls,
                                                int n_zones) {
  BuildingThermalModel m;
  m.n_zones = n_zones;
  m.n_walls = static_cast<int>(walls.size());
  int n_state = 0;
  for (const auto& w : walls) n_state += static_cast<int>(w.A.rows());
  m.n_state = n_state;

  m.A = Matrix::Zero(n_state, n_state);
  m.B = Matrix::Zero(n_state, n_zones);
  m.F = Matrix::Zero(n_state, 4);
  m.C = Matrix::Zero(n_zones, n_state);
  m.D = Matrix::Zero(n_zones, n_zones);

  std::vector<bool> zone_has_wall(n_zones, false);
  int off = 0;
  for (const auto& w : walls) {
    const int ns = static_cast<int>(w.A.rows());
    m.A.block(off, off, ns, ns) = w.A;
    m.B.middleRows(off, ns) = w.B;
    m.F.middleRows(off, ns) = w.F;

    const auto add_output = [&](int slice, double hbar, const Boundary& b) {
      if (b.is_outdoor()) return;
      m.C(b.zone, off + slice) += w.spec.area * hbar;
      m.D(b.zone, b.zone) -= w.spec.area * hbar;
      zone_has_wall[b.zone] = true;
    };
    add_output(0, w.spec.slices.front().conv_prev, w.spec.first);
    add_output(ns - 1, w.spec.slices.back().conv_next, w.spec.last);
    m.walls.push_back(w.spec);
    off += ns;
  }
  for (int z = 0; z < n_zones; ++z) {
    if (!zone_has_wall[z])
      throw ModelError("zone " + std::to_string(z) + " has no adjacent wall");
  }
  return m;
}

DiscreteDynamics discretize(const BuildingThermalModel& model, double dt) {
  if (dt <= 0.0) throw ModelError("slot duration must be positive");
  const int n = model.n_state;
  const int nu = model.n_zones + 4;
  Matrix Bfull(n, nu);
  Bfull << model.B, model.F;

  // Van Loan augmented exponential: the top row blocks of exp(M dt) give
  // e^{A dt}, int e^{A(dt-s)}B ds and int e^{A(dt-s)}B s ds.
  Matrix M = Matrix::Zero(n + 2 * nu, n + 2 * nu);
  M.topLeftCorner(n, n) = model.A;
  M.block(0, n, n, nu) = Bfull;
  M.block(n, n + nu, nu, nu) = Matrix::Identity(nu, nu);
  const Matrix E = (M * dt).exp();

  DiscreteDynamics d;
  d.dt = dt;
  d.Ad = E.topLeftCorner(n, n);
  const Matrix S0 = E.block(0, n, n, nu);
  const Matrix S1 = E.block(0, n + nu, n, nu);
  d.B1 = S1 / dt;
  d.B0 = S0 - d.B1;
  if (!d.Ad.allFinite() || !d.B0.allFinite() || !d.B1.allFinite())
    throw ModelError("discretization produced non-finite entries");
  return d;
}

double walls_energy(double dt, double q_prev, double q_next) {
  return 0.5 * dt * (q_prev + q_next);
}

PeopleCoeffs people_energy_coeffs(double dt, double occ_prev, double occ_next,
                                  double people_slope, double people_intercept) {
  // integral of (n(s))(p1 T(s) + p0) over the slot with n and T linear in s
  PeopleCoeffs c;
  c.q2 = people_slope * dt * (occ_prev / 6.0 + occ_next / 3.0);
  c.q1 = people_slope * dt * (occ_prev / 3.0 + occ_next / 6.0);
  c.q0 = people_intercept * dt * 0.5 * (occ_prev + occ_next);
  return c;
}

double people_energy(const PeopleCoeffs& c, double t_prev, double t_next) {
  return c.q2 * t_next + c.q1 * t_prev + c.q0;
}

double internal_energy(double dt, double solar_gain, double qs_prev,
                       double qs_next, double equip_per_person, double occ_prev,
                       double occ_next, double base_load) {
  const double p_prev = solar_gain * qs_prev +
                        equip_per_person * std::max(occ_prev, 0.0) + base_load;
  const double p_next = solar_gain * qs_next +
                        equip_per_person * std::max(occ_next, 0.0) + base_load;
  return 0.5 * dt * (p_prev + p_next);
}

double inertia_energy(double heat_capacity, double t_prev, double t_next) {
  return -heat_capacity * (t_next - t_prev);
}

EnergyRequestMap building_energy_request(const BuildingThermalModel& model,
                                         const DiscreteDynamics& disc,
                                         const std::vector<ZoneParams>& zones,
                                         const DisturbanceProfile& dist,
                                         int n_t) {
  const int nz = model.n_zones;
  const int nx = model.n_state;
  if (static_cast<int>(zones.size()) != nz)
    throw ModelError("zone parameter count does not match the model");
  if (dist.n_breakpoints() != n_t + 1)
    throw ModelError("disturbance profile must have n_t + 1 breakpoints");
  for (const auto& zp : zones) {
    if (zp.heat_capacity <= 0.0) throw ModelError("zone heat capacity must be > 0");
    if (static_cast<int>(zp.occupancy.size()) != n_t + 1)
      throw ModelError("zone occupancy profile must have n_t + 1 breakpoints");
  }

  EnergyRequestMap em;
  em.n_t = n_t;
  em.n_zones = nz;
  em.n_state = nx;
  em.dt = disc.dt;
  const int nu = em.n_u();
  const int off = em.state_offset();
  const double to_mj = 1e-6;

  const Matrix Bd0 = disc.B0.leftCols(nz);
  const Matrix Fd0 = disc.B0.rightCols(4);
  const Matrix Bd1 = disc.B1.leftCols(nz);
  const Matrix Fd1 = disc.B1.rightCols(4);

  // state maps T(b dt) = S_b u + s_b, propagated breakpoint to breakpoint
  Matrix S = Matrix::Zero(nx, nu);
  S.middleCols(off, nx) = Matrix::Identity(nx, nx);
  Vector s = Vector::Zero(nx);

  // heat-flux map at the previous breakpoint
  Matrix Qprev = model.C * S;
  Vector qprev = model.C * s;
  for (int z = 0; z < nz; ++z)
    for (int z2 = 0; z2 < nz; ++z2)
      Qprev(z, em.temp_index(1, z2)) += model.D(z, z2);

  em.Gz = Matrix::Zero(em.n_slots() * nz, nu);
  em.gz = Vector::Zero(em.n_slots() * nz);

  for (int t = 2; t <= n_t; ++t) {
    // advance the wall state over slot t
    Matrix Snext = disc.Ad * S;
    Vector snext = disc.Ad * s + Fd0 * dist.at(t - 1) + Fd1 * dist.at(t);
    for (int z = 0; z < nz; ++z) {
      Snext.col(em.temp_index(t - 1, z)) += Bd0.col(z);
      Snext.col(em.temp_index(t, z)) += Bd1.col(z);
    }

    Matrix Qnext = model.C * Snext;
    Vector qnext = model.C * snext;
    for (int z = 0; z < nz; ++z)
      for (int z2 = 0; z2 < nz; ++z2)
        Qnext(z, em.temp_index(t, z2)) += model.D(z, z2);

    for (int z = 0; z < nz; ++z) {
      const int row = (t - 2) * nz + z;
      Eigen::RowVectorXd g = 0.5 * disc.dt * (Qprev.row(z) + Qnext.row(z));
      double g0 = 0.5 * disc.dt * (qprev(z) + qnext(z));

      const auto& zp = zones[z];
      const auto pc = people_energy_coeffs(disc.dt, zp.occupancy[t - 1],
                                           zp.occupancy[t], zp.people_slope,
                                           zp.people_intercept);
      g(em.temp_index(t, z)) += pc.q2;
      g(em.temp_index(t - 1, z)) += pc.q1;
      g0 += pc.q0;

      g0 += internal_energy(disc.dt, zp.solar_gain, dist.q_short[t - 1],
                            dist.q_short[t], zp.equip_per_person,
                            zp.occupancy[t - 1], zp.occupancy[t], zp.base_load);

      g(em.temp_index(t, z)) += -zp.heat_capacity;
      g(em.temp_index(t - 1, z)) += zp.heat_capacity;

      em.Gz.row(row) = g * to_mj;
      em.gz(row) = g0 * to_mj;
    }

    S = std::move(Snext);
    s = std::move(snext);
    Qprev = std::move(Qnext);
    qprev = std::move(qnext);
  }

  em.Send = S;
  em.send = s;

  em.Gtot = Matrix::Zero(em.n_slots(), nu);
  em.gtot = Vector::Zero(em.n_slots());
  for (int t = 2; t <= n_t; ++t) {
    for (int z = 0; z < nz; ++z) {
      em.Gtot.row(t - 2) += em.Gz.row((t - 2) * nz + z);
      em.gtot(t - 2) += em.gz((t - 2) * nz + z);
    }
  }
  return em;
}

}  // namespace dcool
