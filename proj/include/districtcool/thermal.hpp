// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Wall-slice thermal dynamics, first-order-hold discretization and the
// affine maps from zone-temperature decisions to per-slot cooling energy.

#ifndef DISTRICTCOOL_THERMAL_HPP
#define DISTRICTCOOL_THERMAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "districtcool/common.hpp"

namespace dcool {

/// Tangent-line coefficients of the grey-body radiation law at t_bar.
struct RadiationLinearization {
  double slope;      // W/(m^2 K)
  double intercept;  // W/m^2
};

RadiationLinearization linearize_radiation(double t_bar,
                                           double sigma = kStefanBoltzmann);

/// A wall face borders either a building zone or the outdoor environment.
struct Boundary {
  int zone = -1;  // -1 encodes outdoor

  bool is_outdoor() const { return zone < 0; }
  static Boundary outdoor() { return Boundary{-1}; }
  static Boundary to_zone(int z) { return Boundary{z}; }
};

struct WallSliceParams {
  double capacity = 0.0;       // J/(m^2 K), > 0
  double cond_prev = 0.0;      // conduction to slice s-1, W/(m^2 K)
  double cond_next = 0.0;      // conduction to slice s+1
  double conv_prev = 0.0;      // convection through the s-1 face
  double conv_next = 0.0;      // convection through the s+1 face
  double absorb_short = 0.0;   // shortwave absorbance
  double absorb_long = 0.0;    // longwave absorbance
  double emissivity = 0.0;     // in [0, 1)
  double generation = 0.0;     // W/m^2
  double t_bar = 293.15;       // radiation linearization point, K
};

struct WallSpec {
  std::string name;
  double area = 0.0;  // m^2
  std::vector<WallSliceParams> slices;
  Boundary first;  // neighbor of slice 1
  Boundary last;   // neighbor of slice n_s
};

/// Continuous-time dynamics of one wall: Tdot = A T + B Ttilde + F d,
/// with d = [T_o, Q_S, Q_L, 1].
struct WallModel {
  Matrix A, B, F;
  WallSpec spec;
};

WallModel assemble_wall_dynamics(const WallSpec& spec, int n_zones);

/// Stacked building system with the zone heat-flux output map
/// Q_walls = C T + D Ttilde.
struct BuildingThermalModel {
  int n_zones = 0;
  int n_walls = 0;
  int n_state = 0;  // sum of slice counts
  Matrix A, B, F;
  Matrix C, D;
  std::vector<WallSpec> walls;
};

BuildingThermalModel assemble_building_dynamics(const std::vector<WallModel>& walls,
                                                int n_zones);

/// Exact discrete maps for piecewise-linear inputs over one slot:
///   T(t) = Ad T(t-1) + B0 w(t-1) + B1 w(t),  w = [Ttilde; d].
struct DiscreteDynamics {
  double dt = 0.0;
  Matrix Ad, B0, B1;
};

DiscreteDynamics discretize(const BuildingThermalModel& model, double dt);

// --- per-slot energy terms (breakpoint arithmetic) ---

/// Trapezoid of the wall heat flux over one slot, J.
double walls_energy(double dt, double q_prev, double q_next);

/// Coefficients of E_people = q2 T(t dt) + q1 T((t-1) dt) + q0 for linearly
/// varying occupancy and zone temperature within the slot.
struct PeopleCoeffs {
  double q2 = 0.0, q1 = 0.0, q0 = 0.0;
};

PeopleCoeffs people_energy_coeffs(double dt, double occ_prev, double occ_next,
                                  double people_slope, double people_intercept);

double people_energy(const PeopleCoeffs& c, double t_prev, double t_next);

double internal_energy(double dt, double solar_gain, double qs_prev,
                       double qs_next, double equip_per_person, double occ_prev,
                       double occ_next, double base_load);

double inertia_energy(double heat_capacity, double t_prev, double t_next);

/// Zone-side parameters of the energy request.
struct ZoneParams {
  double heat_capacity = 0.0;      // J/K
  double people_slope = 0.0;       // W/(person K)
  double people_intercept = 0.0;   // W/person
  double solar_gain = 0.0;         // W per W/m^2
  double equip_per_person = 0.0;   // W/person
  double base_load = 0.0;          // W
  std::vector<double> occupancy;   // breakpoints 0..n_t (persons)
};

/// Ambient signals at breakpoints 0..n_t (index 0 precedes the first
/// decision breakpoint and is unused by the energy maps).
struct DisturbanceProfile {
  std::vector<double> t_out;    // K
  std::vector<double> q_short;  // W/m^2
  std::vector<double> q_long;   // W/m^2

  int n_breakpoints() const { return static_cast<int>(t_out.size()); }
  Eigen::Vector4d at(int b) const {
    return Eigen::Vector4d(t_out[b], q_short[b], q_long[b], 1.0);
  }
};

/// Affine maps from the local decision vector
///   u = [Ttilde(1 dt) .. Ttilde(n_t dt), T(dt)]
/// to slot energies, in MJ.  Slots t = 2..n_t are modeled (slot t spans
/// [(t-1) dt, t dt]); the map is causal in the breakpoint ordering.
struct EnergyRequestMap {
  int n_t = 0;
  int n_zones = 0;
  int n_state = 0;
  double dt = 0.0;

  // per-zone energies: row (t-2)*n_z + z of Gz gives E_{B,z}(t), MJ
  Matrix Gz;
  Vector gz;
  // building totals: row t-2 gives E_B(t), MJ
  Matrix Gtot;
  Vector gtot;
  // wall state at the last breakpoint: T(n_t dt) = Send u + send
  Matrix Send;
  Vector send;

  int n_slots() const { return n_t - 1; }
  int n_u() const { return n_t * n_zones + n_state; }
  int temp_index(int breakpoint, int zone) const {
    return (breakpoint - 1) * n_zones + zone;
  }
  int state_offset() const { return n_t * n_zones; }

  double zone_energy(const Vector& u, int slot, int zone) const {
    return Gz.row((slot - 2) * n_zones + zone).dot(u) + gz((slot - 2) * n_zones + zone);
  }
  double total_energy(const Vector& u, int slot) const {
    return Gtot.row(slot - 2).dot(u) + gtot(slot - 2);
  }
};

EnergyRequestMap building_energy_request(const BuildingThermalModel& model,
                                         const DiscreteDynamics& disc,
                                         const std::vector<ZoneParams>& zones,
                                         const DisturbanceProfile& dist,
                                         int n_t);

}  // namespace dcool

#endif
