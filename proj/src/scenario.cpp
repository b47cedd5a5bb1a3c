// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#include "districtcool/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dcool {
namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& key,
                    const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw ScenarioError(path + "/" + key, "missing required field");
  }
  return j.at(key);
}

double num(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ScenarioError(path + "/" + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ScenarioError(path + "/" + key, "non-finite value");
  return d;
}

double num_or(const json& j, const std::string& key, const std::string& path,
              double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return num(j, key, path);
}

int integer(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer()) {
    throw ScenarioError(path + "/" + key, "expected an integer");
  }
  return v.get<int>();
}

std::vector<double> num_array(const json& j, const std::string& key,
                              const std::string& path, int expected_len) {
  const json& v = require(j, key, path);
  if (!v.is_array()) throw ScenarioError(path + "/" + key, "expected an array");
  if (expected_len >= 0 && static_cast<int>(v.size()) != expected_len) {
    throw ScenarioError(path + "/" + key,
                        "expected " + std::to_string(expected_len) +
                            " values, got " + std::to_string(v.size()));
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ScenarioError(path + "/" + key + "/" + std::to_string(i),
                          "expected a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

/// Temperature conversion selected by the units block.
struct Units {
  bool celsius = true;
  double to_kelvin(double t) const { return celsius ? t + kKelvinOffset : t; }
};

Units parse_units(const json& root) {
  Units u;
  if (!root.contains("units")) return u;
  const json& ju = root.at("units");
  const std::string temp = ju.value("temperature", "C");
  if (temp == "C") {
    u.celsius = true;
  } else if (temp == "K") {
    u.celsius = false;
  } else {
    throw ScenarioError("/units/temperature", "must be \"C\" or \"K\"");
  }
  if (ju.value("energy", "MJ") != "MJ") {
    throw ScenarioError("/units/energy", "only \"MJ\" is supported");
  }
  if (ju.value("time", "s") != "s") {
    throw ScenarioError("/units/time", "only \"s\" is supported");
  }
  return u;
}

Boundary parse_boundary(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "outdoor") return Boundary::outdoor();
    throw ScenarioError(path, "expected \"outdoor\" or {\"zone\": z}");
  }
  if (j.is_object() && j.contains("zone")) {
    const int z = j.at("zone").get<int>();
    if (z < 0) throw ScenarioError(path + "/zone", "zone index must be >= 0");
    return Boundary::to_zone(z);
  }
  throw ScenarioError(path, "expected \"outdoor\" or {\"zone\": z}");
}

WallSpec parse_wall(const json& j, const std::string& path, const Units& units) {
  WallSpec w;
  w.name = require(j, "name", path).get<std::string>();
  w.area = num(j, "area", path);
  if (w.area <= 0.0) throw ScenarioError(path + "/area", "must be > 0");
  w.first = parse_boundary(require(j, "first", path), path + "/first");
  w.last = parse_boundary(require(j, "last", path), path + "/last");

  const int ns = integer(j, "slice_count", path);
  if (ns < 1) throw ScenarioError(path + "/slice_count", "must be >= 1");
  const double cap = num(j, "slice_capacity", path);
  const double cond = num_or(j, "conduction", path, 0.0);
  const double conv_first = num(j, "conv_first", path);
  const double conv_last = num(j, "conv_last", path);
  const double a_s = num_or(j, "absorb_short", path, 0.0);
  const double a_l = num_or(j, "absorb_long", path, 0.0);
  const double eps = num_or(j, "emissivity", path, 0.0);
  const double t_bar = units.to_kelvin(num_or(j, "t_bar", path,
                                              units.celsius ? 26.85 : 300.0));
  const double gen = num_or(j, "generation", path, 0.0);

  w.slices.resize(ns);
  for (int s = 0; s < ns; ++s) {
    WallSliceParams& p = w.slices[s];
    p.capacity = cap;
    p.cond_prev = s > 0 ? cond : 0.0;
    p.cond_next = s < ns - 1 ? cond : 0.0;
    p.conv_prev = s == 0 ? conv_first : 0.0;
    p.conv_next = s == ns - 1 ? conv_last : 0.0;
    p.generation = gen;
    p.t_bar = t_bar;
    // radiative exchange only on outdoor-exposed faces
    const bool outdoor_face = (s == 0 && w.first.is_outdoor()) ||
                              (s == ns - 1 && w.last.is_outdoor());
    if (outdoor_face) {
      p.absorb_short = a_s;
      p.absorb_long = a_l;
      p.emissivity = eps;
    }
  }
  return w;
}

ZoneParams parse_zone(const json& j, const std::string& path, int n_t) {
  ZoneParams z;
  z.heat_capacity = num(j, "heat_capacity", path);
  z.people_slope = num(j, "people_slope", path);
  z.people_intercept = num(j, "people_intercept", path);
  z.solar_gain = num_or(j, "solar_gain", path, 0.0);
  z.equip_per_person = num_or(j, "equip_per_person", path, 0.0);
  z.base_load = num_or(j, "base_load", path, 0.0);
  z.occupancy = num_array(j, "occupancy", path, n_t + 1);
  return z;
}

ChillerSpec parse_chiller(const json& j, const std::string& path,
                          const Units& units) {
  ChillerSpec c;
  c.e_max = num(j, "e_max", path);
  if (c.e_max <= 0.0) throw ScenarioError(path + "/e_max", "must be > 0");
  if (j.contains("ng_gordon")) {
    const json& g = j.at("ng_gordon");
    const std::string p = path + "/ng_gordon";
    c.use_fit = false;
    c.ng.a1 = num(g, "a1", p);
    c.ng.a2 = num(g, "a2", p);
    c.ng.a3 = num(g, "a3", p);
    c.ng.a4 = num(g, "a4", p);
    c.ng.t_cw = units.to_kelvin(num(g, "t_cw", p));
  } else {
    c.use_fit = true;
    c.fit.c0 = num(j, "c0", path);
    c.fit.c1 = num(j, "c1", path);
    c.fit.c2 = num(j, "c2", path);
    if (c.fit.c1 < 0.0 || c.fit.c2 < 0.0) {
      throw ScenarioError(path, "c1 and c2 must be nonnegative for convexity");
    }
  }
  return c;
}

BuildingScenario parse_building(const json& j, const std::string& path,
                                const Units& units, int n_t) {
  BuildingScenario b;
  b.name = require(j, "name", path).get<std::string>();

  const json& jz = require(j, "zones", path);
  if (!jz.is_array() || jz.empty()) {
    throw ScenarioError(path + "/zones", "expected a non-empty array");
  }
  for (size_t z = 0; z < jz.size(); ++z) {
    b.zones.push_back(
        parse_zone(jz[z], path + "/zones/" + std::to_string(z), n_t));
  }

  const json& jw = require(j, "walls", path);
  if (!jw.is_array() || jw.empty()) {
    throw ScenarioError(path + "/walls", "expected a non-empty array");
  }
  for (size_t w = 0; w < jw.size(); ++w) {
    b.walls.push_back(
        parse_wall(jw[w], path + "/walls/" + std::to_string(w), units));
  }

  b.chiller = parse_chiller(require(j, "chiller", path), path + "/chiller", units);

  const auto pv = num_array(require(j, "prices", path), "values",
                            path + "/prices", n_t + 1);
  b.prices = Eigen::Map<const Vector>(pv.data(), pv.size());
  for (double p : pv) {
    if (p < 0.0) throw ScenarioError(path + "/prices/values", "must be >= 0");
  }

  const json& jc = require(j, "comfort", path);
  const auto wk = num_array(jc, "working", path + "/comfort", 2);
  const auto off = num_array(jc, "off", path + "/comfort", 2);
  b.comfort.working_lo = units.to_kelvin(wk[0]);
  b.comfort.working_hi = units.to_kelvin(wk[1]);
  b.comfort.off_lo = units.to_kelvin(off[0]);
  b.comfort.off_hi = units.to_kelvin(off[1]);
  if (b.comfort.working_lo >= b.comfort.working_hi ||
      b.comfort.off_lo >= b.comfort.off_hi) {
    throw ScenarioError(path + "/comfort", "lower bound must be below upper");
  }
  return b;
}

Scenario parse_root(const json& root) {
  Scenario sc;
  const Units units = parse_units(root);
  sc.description = root.value("description", "");

  const json& jh = require(root, "horizon", "");
  sc.n_t = integer(jh, "n_t", "/horizon");
  if (sc.n_t < 2) throw ScenarioError("/horizon/n_t", "must be >= 2");
  sc.dt = num(jh, "dt", "/horizon");
  if (sc.dt <= 0.0) throw ScenarioError("/horizon/dt", "must be > 0");

  const json& jd = require(root, "disturbances", "");
  const auto to = num_array(jd, "t_out", "/disturbances", sc.n_t + 1);
  sc.disturbances.t_out.resize(to.size());
  for (size_t i = 0; i < to.size(); ++i) {
    sc.disturbances.t_out[i] = units.to_kelvin(to[i]);
  }
  sc.disturbances.q_short = num_array(jd, "q_short", "/disturbances", sc.n_t + 1);
  sc.disturbances.q_long = num_array(jd, "q_long", "/disturbances", sc.n_t + 1);

  const json& jb = require(root, "buildings", "");
  if (!jb.is_array() || jb.empty()) {
    throw ScenarioError("/buildings", "expected a non-empty array");
  }
  for (size_t i = 0; i < jb.size(); ++i) {
    sc.buildings.push_back(parse_building(
        jb[i], "/buildings/" + std::to_string(i), units, sc.n_t));
  }

  const json& js = require(root, "storage", "");
  sc.storage.loss = num(js, "loss", "/storage");
  sc.storage.capacity = num(js, "capacity", "/storage");
  sc.storage.exchange_max = num_array(js, "exchange_max", "/storage",
                                      static_cast<int>(sc.buildings.size()));
  try {
    sc.storage.validate(static_cast<int>(sc.buildings.size()));
  } catch (const ModelError& e) {
    throw ScenarioError("/storage", e.what());
  }

  const json& jt = require(root, "topology", "");
  sc.weights.eta = num_or(jt, "eta", "/topology", 0.05);
  const json& jm = require(jt, "matrices", "/topology");
  if (!jm.is_array() || jm.empty()) {
    throw ScenarioError("/topology/matrices", "expected a non-empty array");
  }
  const int m = static_cast<int>(sc.buildings.size());
  for (size_t k = 0; k < jm.size(); ++k) {
    const json& ja = jm[k];
    const std::string pk = "/topology/matrices/" + std::to_string(k);
    if (!ja.is_array() || static_cast<int>(ja.size()) != m) {
      throw ScenarioError(pk, "expected " + std::to_string(m) + " rows");
    }
    Matrix A(m, m);
    for (int r = 0; r < m; ++r) {
      if (!ja[r].is_array() || static_cast<int>(ja[r].size()) != m) {
        throw ScenarioError(pk + "/" + std::to_string(r),
                            "expected " + std::to_string(m) + " columns");
      }
      for (int cidx = 0; cidx < m; ++cidx) {
        A(r, cidx) = ja[r][cidx].get<double>();
      }
    }
    sc.weights.matrices.push_back(std::move(A));
  }

  const json ja = root.value("algorithm", json::object());
  sc.algorithm.alpha = num_or(ja, "alpha", "/algorithm", 1.0);
  sc.algorithm.power = num_or(ja, "power", "/algorithm", 1.0);
  if (ja.contains("steps")) {
    sc.algorithm.custom_steps = num_array(ja, "steps", "/algorithm", -1);
  }
  sc.algorithm.threshold = num_or(ja, "threshold", "/algorithm", 1e-3);
  sc.algorithm.max_iterations =
      ja.contains("max_iterations") ? integer(ja, "max_iterations", "/algorithm")
                                    : 5000;
  sc.algorithm.seed = ja.contains("seed")
                          ? static_cast<unsigned>(integer(ja, "seed", "/algorithm"))
                          : 0u;
  sc.algorithm.threads =
      ja.contains("threads") ? integer(ja, "threads", "/algorithm") : 1;
  if (sc.algorithm.threshold <= 0.0) {
    throw ScenarioError("/algorithm/threshold", "must be > 0");
  }
  if (sc.algorithm.max_iterations < 1) {
    throw ScenarioError("/algorithm/max_iterations", "must be >= 1");
  }
  if (sc.algorithm.threads < 1) {
    throw ScenarioError("/algorithm/threads", "must be >= 1");
  }
  StepSizeSchedule steps{sc.algorithm.alpha, sc.algorithm.power,
                         sc.algorithm.custom_steps};
  try {
    steps.validate();
  } catch (const ModelError& e) {
    throw ScenarioError("/algorithm", e.what());
  }
  return sc;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ScenarioError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_root(root);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

ValidationReport validate_scenario(const std::string& path) {
  ValidationReport rep;
  Scenario sc;
  try {
    sc = load_scenario(path);
    rep.checks.push_back("schema");
  } catch (const ScenarioError& e) {
    rep.ok = false;
    rep.violations.push_back(e.what());
    return rep;
  }
  const WeightCheckReport w = validate_weights(sc.weights);
  const std::vector<std::string> names = {
      "weights-nonnegative-and-bounded", "weights-doubly-stochastic",
      "union-graph-strongly-connected"};
  if (w.ok) {
    for (const auto& n : names) rep.checks.push_back(n);
  } else {
    rep.ok = false;
    for (const auto& v : w.violations) {
      rep.violations.push_back("/topology/matrices: " + v);
    }
  }
  try {
    build_agents(sc);
    rep.checks.push_back("model-assembly");
  } catch (const std::exception& e) {
    rep.ok = false;
    rep.violations.push_back(std::string("/buildings: ") + e.what());
  }
  return rep;
}

std::vector<AgentProblem> build_agents(const Scenario& sc) {
  const int m = static_cast<int>(sc.buildings.size());
  std::vector<AgentProblem> agents;
  agents.reserve(m);
  const StorageTrajectory traj = storage_trajectory(sc.storage.loss, sc.n_t);

  for (int i = 0; i < m; ++i) {
    const BuildingScenario& b = sc.buildings[i];
    const int n_z = static_cast<int>(b.zones.size());

    std::vector<WallModel> walls;
    walls.reserve(b.walls.size());
    for (const auto& w : b.walls) {
      walls.push_back(assemble_wall_dynamics(w, n_z));
    }
    const BuildingThermalModel model = assemble_building_dynamics(walls, n_z);
    const DiscreteDynamics disc = discretize(model, sc.dt);

    AgentProblem ap;
    ap.index = i;
    ap.layout = GlobalLayout{m, sc.n_t};
    ap.emap = building_energy_request(model, disc, b.zones, sc.disturbances,
                                     sc.n_t);
    ap.chiller_cap = b.chiller.e_max;
    if (b.chiller.use_fit) {
      ap.fits.assign(sc.n_t - 1, b.chiller.fit);
    } else {
      const ChillerModel cm(b.chiller.ng, b.chiller.e_max, sc.dt);
      for (int t = 2; t <= sc.n_t; ++t) {
        ap.fits.push_back(cm.fit_at(sc.disturbances.t_out[t]));
      }
    }
    ap.prices = Vector(sc.n_t - 1);
    for (int t = 2; t <= sc.n_t; ++t) ap.prices(t - 2) = b.prices(t);
    ap.storage = sc.storage;
    ap.traj = traj;

    // working hours derived from occupancy: any occupied zone uses the
    // working-hours band at that breakpoint
    ap.comfort.lo = Matrix(sc.n_t, n_z);
    ap.comfort.hi = Matrix(sc.n_t, n_z);
    for (int bp = 1; bp <= sc.n_t; ++bp) {
      for (int z = 0; z < n_z; ++z) {
        const bool working = b.zones[z].occupancy[bp] > 0.0;
        ap.comfort.lo(bp - 1, z) =
            working ? b.comfort.working_lo : b.comfort.off_lo;
        ap.comfort.hi(bp - 1, z) =
            working ? b.comfort.working_hi : b.comfort.off_hi;
      }
    }
    agents.push_back(std::move(ap));
  }
  return agents;
}

}  // namespace dcool
