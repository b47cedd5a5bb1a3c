// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Decision-variable packing and per-building objective/constraint assembly.
// Each building's feasible set couples its local temperatures with the
// shared storage exchanges of every building.

#ifndef DISTRICTCOOL_PROBLEM_HPP
#define DISTRICTCOOL_PROBLEM_HPP

#include <string>
#include <vector>

#include "districtcool/plant.hpp"
#include "districtcool/solver.hpp"
#include "districtcool/thermal.hpp"

namespace dcool {

/// Local decision u_i: zone temperature breakpoints plus initial wall state.
struct LocalDecision {
  Matrix zone_temps;  // n_t x n_zones, K; row b-1 holds Ttilde(b dt)
  Vector wall_state;  // wall-slice temperatures at dt, K
};

Vector pack_local(const LocalDecision& d);
LocalDecision unpack_local(const Vector& u, int n_t, int n_zones, int n_state);

/// One building's slice of the global vector.
struct BuildingExchange {
  Vector exchanges;           // e_s(1..n_t), MJ
  double storage_init = 0.0;  // this building's copy of E_storage(1), MJ
};

struct GlobalDecision {
  std::vector<BuildingExchange> buildings;
};

Vector pack_global(const GlobalDecision& d);
GlobalDecision unpack_global(const Vector& x, int m, int n_t);

/// Index arithmetic for the stacked global vector x in R^{m(n_t+1)}.
struct GlobalLayout {
  int m = 0;
  int n_t = 0;

  int dim() const { return m * (n_t + 1); }
  int exchange_index(int building, int slot) const {
    return building * (n_t + 1) + slot - 1;  // slot = 1..n_t
  }
  int storage_index(int building) const { return building * (n_t + 1) + n_t; }
};

struct NamedResiduals {
  std::string name;
  Vector values;  // <= 0 iff satisfied
};

struct ResidualSet {
  std::vector<NamedResiduals> groups;

  double max_residual() const;
  const Vector& operator[](const std::string& name) const;
};

/// Comfort bounds per breakpoint and zone, K.
struct ComfortSchedule {
  Matrix lo, hi;  // n_t x n_zones
};

/// One building's objective f_i(x, u_i) and feasible set V_i, assembled over
/// precomputed affine maps.  Immutable after construction.
struct AgentProblem {
  int index = 0;
  GlobalLayout layout;
  EnergyRequestMap emap;
  std::vector<BiquadFit> fits;  // per slot, index t-2 for t = 2..n_t
  double chiller_cap = 0.0;     // electric-energy cap, MJ
  Vector prices;                // per slot, index t-2
  StorageParams storage;
  StorageTrajectory traj;
  ComfortSchedule comfort;
  double tie_break = 1e-9;  // quadratic u-regularization of the proximal step

  int n_u() const { return emap.n_u(); }
  int n_x() const { return layout.dim(); }

  /// E_chiller,c(t) = E_B(t) - e_s^i(t), slots t = 2..n_t.
  double net_cooling(const Vector& x, const Vector& u, int slot) const;

  /// sum_t psi(t) * chiller_electric(net_cooling(t)).
  double evaluate_objective(const Vector& x, const Vector& u) const;

  ResidualSet constraint_residuals(const Vector& x, const Vector& u) const;

  /// min over (x, u) in V_i of f_i + |x - x_avg|^2/(2c) + tie_break |u|^2,
  /// stacked as z = [x, u].
  ConvexProgram proximal_program(const Vector& x_avg, double c) const;

  /// min over u in U_i(x) of f_i(x, u); x enters as fixed data.
  ConvexProgram inner_program(const Vector& x) const;

  /// Violation of the constraints of V_i that involve x only (exchange
  /// boxes, storage level/terminal); 0 when x is in X_i's affine part.
  double x_only_violation(const Vector& x) const;

  /// Storage level trajectory implied by x, length n_t+1 (E(1)..E(n_t+1)).
  Vector storage_levels(const Vector& x) const;
};

/// Joint program over z = [x, u_1, ..., u_m] for the centralized oracle.
ConvexProgram centralized_program(const std::vector<AgentProblem>& agents);

}  // namespace dcool

#endif
