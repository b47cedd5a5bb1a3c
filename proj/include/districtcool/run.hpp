// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Run orchestration: executes a scenario in distributed or centralized mode
// and serializes the result artifacts for plotting and comparison.

#ifndef DISTRICTCOOL_RUN_HPP
#define DISTRICTCOOL_RUN_HPP

#include <string>
#include <vector>

#include "districtcool/scenario.hpp"

namespace dcool {

struct RunOutcome {
  bool solver_ok = false;
  std::string status;  // converged | max-iterations | optimal | <failure>
  int iterations = 0;
  double objective = 0.0;
  double disagreement = 0.0;
};

/// Runs the scenario and writes trace.csv, temperatures.csv, storage.csv,
/// cop.csv and summary.json into out_dir (created if needed).  mode is
/// "distributed" or "centralized"; both modes share the output schema.
RunOutcome run_scenario(const Scenario& sc, const std::string& mode,
                        const std::string& out_dir);

struct QuantityDiff {
  std::string name;
  double max_abs = 0.0;
  double max_rel = 0.0;
};

struct CompareReport {
  bool compatible = true;
  std::vector<std::string> mismatches;  // schema-level incompatibilities
  std::vector<QuantityDiff> diffs;
};

/// Cell-by-cell comparison of two run directories sharing the schema.
CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b);

}  // namespace dcool

#endif
