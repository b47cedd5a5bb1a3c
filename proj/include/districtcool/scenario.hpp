// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Scenario file schema (JSON), validation with pointer-style error paths,
// and assembly of the per-building agent problems.

#ifndef DISTRICTCOOL_SCENARIO_HPP
#define DISTRICTCOOL_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "districtcool/consensus.hpp"
#include "districtcool/plant.hpp"
#include "districtcool/problem.hpp"
#include "districtcool/thermal.hpp"

namespace dcool {

/// Scenario problems are reported with the JSON-pointer-style path of the
/// offending element.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ChillerSpec {
  bool use_fit = true;    // biquadratic coefficients given directly
  BiquadFit fit;          // when use_fit
  NgGordonParams ng;      // otherwise: refit per ambient temperature
  double e_max = 0.0;     // electric-energy cap, MJ
};

struct ComfortSpec {
  double working_lo = 0.0, working_hi = 0.0;  // K (converted from file)
  double off_lo = 0.0, off_hi = 0.0;
};

struct BuildingScenario {
  std::string name;
  std::vector<WallSpec> walls;
  std::vector<ZoneParams> zones;
  ChillerSpec chiller;
  Vector prices;  // at breakpoints 0..n_t; slot t is priced at index t
  ComfortSpec comfort;
};

struct AlgorithmParams {
  double alpha = 1.0;
  double power = 1.0;
  std::vector<double> custom_steps;
  double threshold = 1e-3;
  int max_iterations = 5000;
  unsigned seed = 0;
  int threads = 1;
};

struct Scenario {
  std::string description;
  int n_t = 0;
  double dt = 0.0;
  std::vector<BuildingScenario> buildings;
  DisturbanceProfile disturbances;
  StorageParams storage;
  WeightSchedule weights;
  AlgorithmParams algorithm;
};

/// Parses and fully validates a scenario document.  Throws ScenarioError on
/// the first problem found.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> checks;      // names of checks that passed
  std::vector<std::string> violations;  // failures with paths
};

/// Schema re-checks plus the mixing-matrix conditions; collects all
/// violations instead of stopping at the first.
ValidationReport validate_scenario(const std::string& path);

/// Assembles one immutable AgentProblem per building, with comfort masks
/// derived from the occupancy profile (occupied means working hours).
std::vector<AgentProblem> build_agents(const Scenario& sc);

}  // namespace dcool

#endif
