// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures: a small one-zone building problem usable as a consensus
// agent without loading a scenario file.

#ifndef DISTRICTCOOL_TESTS_SUPPORT_HPP
#define DISTRICTCOOL_TESTS_SUPPORT_HPP

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "districtcool/consensus.hpp"
#include "districtcool/problem.hpp"

namespace dcool::testing {

// one-zone building with a single exterior wall, short horizon, part of an
// m-building fleet sharing the storage
inline AgentProblem tiny_agent(int index, int m = 2, int n_t = 6) {
  WallSpec w;
  w.name = "ext";
  w.area = 200.0;
  w.first = Boundary::to_zone(0);
  w.last = Boundary::outdoor();
  w.slices.resize(2);
  for (int s = 0; s < 2; ++s) {
    w.slices[s].capacity = 2.0e5;
    w.slices[s].cond_prev = s == 1 ? 2.0 : 0.0;
    w.slices[s].cond_next = s == 0 ? 2.0 : 0.0;
  }
  w.slices[0].conv_prev = 8.0;
  w.slices[1].conv_next = 20.0;
  w.slices[1].absorb_short = 0.15;

  std::vector<WallModel> walls{assemble_wall_dynamics(w, 1)};
  const BuildingThermalModel model = assemble_building_dynamics(walls, 1);
  const double dt = 600.0;
  const DiscreteDynamics disc = discretize(model, dt);

  DisturbanceProfile dist;
  for (int b = 0; b <= n_t; ++b) {
    dist.t_out.push_back(303.0 + 0.5 * b);
    dist.q_short.push_back(200.0 * b);
    dist.q_long.push_back(400.0);
  }
  std::vector<ZoneParams> zones(1);
  zones[0].heat_capacity = 3.0e6;
  zones[0].people_slope = -3.3;
  zones[0].people_intercept = 1057.4;
  zones[0].solar_gain = 3.5;
  zones[0].equip_per_person = 80.0;
  zones[0].base_load = 400.0;
  zones[0].occupancy.assign(n_t + 1, 10.0);

  AgentProblem ap;
  ap.index = index;
  ap.layout = GlobalLayout{m, n_t};
  ap.emap = building_energy_request(model, disc, zones, dist, n_t);
  ap.fits.assign(n_t - 1, BiquadFit{2.46, 2.77e-2, 3.79e-5});
  ap.chiller_cap = 30.0;
  ap.prices = Vector::Constant(n_t - 1, 0.2);
  ap.storage.loss = 0.99;
  ap.storage.capacity = 50.0;
  ap.storage.exchange_max.assign(m, 3.0);
  ap.traj = storage_trajectory(ap.storage.loss, n_t);
  ap.comfort.lo = Matrix::Constant(n_t, 1, 293.15);
  ap.comfort.hi = Matrix::Constant(n_t, 1, 299.15);
  return ap;
}

// step sizes for the tiny scenario: a flat transport phase followed by a
// geometric decay, formatted as a JSON array
inline std::string tiny_step_list() {
  std::ostringstream out;
  out.precision(12);
  out << "[";
  double c = 8.0;
  for (int k = 0; k < 60; ++k) out << (k ? ", " : "") << c;
  while (c > 8e-4) {
    c *= 0.93;
    out << ", " << c;
  }
  out << "]";
  return out.str();
}

// two-building, one-zone, four-slot scenario document for end-to-end tests
inline std::string tiny_scenario_json() {
  return R"({
 "units": {"temperature": "C", "energy": "MJ", "time": "s"},
 "horizon": {"n_t": 4, "dt": 600.0},
 "disturbances": {
  "t_out": [27.0, 28.0, 29.0, 28.0, 27.0],
  "q_short": [0.0, 100.0, 200.0, 100.0, 0.0],
  "q_long": [400.0, 400.0, 400.0, 400.0, 400.0]
 },
 "buildings": [
  {
   "name": "b",
   "zones": [{"heat_capacity": 3e6, "people_slope": -3.3,
              "people_intercept": 1057.4, "solar_gain": 3.5,
              "equip_per_person": 80.0, "base_load": 400.0,
              "occupancy": [0.0, 5.0, 5.0, 0.0, 0.0]}],
   "walls": [{"name": "ext", "area": 200.0, "slice_count": 2,
              "slice_capacity": 2.1e5, "conduction": 2.0,
              "conv_first": 8.0, "conv_last": 20.0,
              "absorb_short": 0.15, "absorb_long": 0.9, "emissivity": 0.9,
              "t_bar": 26.85, "first": {"zone": 0}, "last": "outdoor"}],
   "chiller": {"c0": 2.46, "c1": 2.77e-2, "c2": 3.79e-5, "e_max": 30.0},
   "prices": {"values": [0.1, 0.1, 0.2, 0.2, 0.1]},
   "comfort": {"working": [20.0, 24.0], "off": [16.0, 30.0]}
  },
  {
   "name": "c",
   "zones": [{"heat_capacity": 3e6, "people_slope": -3.3,
              "people_intercept": 1057.4, "solar_gain": 4.0,
              "equip_per_person": 80.0, "base_load": 400.0,
              "occupancy": [0.0, 5.0, 5.0, 0.0, 0.0]}],
   "walls": [{"name": "ext", "area": 200.0, "slice_count": 2,
              "slice_capacity": 2.1e5, "conduction": 2.0,
              "conv_first": 8.0, "conv_last": 20.0,
              "absorb_short": 0.15, "absorb_long": 0.9, "emissivity": 0.9,
              "t_bar": 26.85, "first": {"zone": 0}, "last": "outdoor"}],
   "chiller": {"c0": 1.26, "c1": 4.98e-2, "c2": 2.49e-4, "e_max": 18.0},
   "prices": {"values": [0.1, 0.1, 0.2, 0.2, 0.1]},
   "comfort": {"working": [20.0, 24.0], "off": [16.0, 30.0]}
  }
 ],
 "storage": {"loss": 0.99, "capacity": 50.0, "exchange_max": [3.0, 3.0]},
 "topology": {"eta": 0.45, "matrices": [[[0.5, 0.5], [0.5, 0.5]]]},
 "algorithm": {"steps": )" +
         tiny_step_list() + R"(,
               "threshold": 1e-4, "max_iterations": 300, "seed": 0,
               "threads": 1}
})";
}

}  // namespace dcool::testing

#endif
