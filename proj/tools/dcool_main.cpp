// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: validate | run | compare, over the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "districtcool.h"

namespace {

constexpr size_t kReportCap = 1 << 20;

int exit_code(dc_status st) { return static_cast<int>(st); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"district cooling energy management simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", mode = "distributed";
  std::string dir_a, dir_b;
  double threshold = -1.0, alpha = -1.0, power = -1.0;
  int max_iter = -1, threads = -1;
  long long seed = -1;

  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("scenario", scenario_path, "scenario JSON path")
      ->required();

  CLI::App* run = app.add_subcommand("run", "execute a scenario");
  run->add_option("scenario", scenario_path, "scenario JSON path")->required();
  run->add_option("--mode", mode, "distributed | centralized")
      ->check(CLI::IsMember({"distributed", "centralized"}));
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--max-iter", max_iter, "iteration cap override");
  run->add_option("--threshold", threshold, "stopping threshold override");
  run->add_option("--alpha", alpha, "step-size scale override");
  run->add_option("--power", power, "step-size decay exponent override");
  run->add_option("--seed", seed, "seed recorded in the artifacts");
  run->add_option("--threads", threads, "parallel agent solves");

  CLI::App* compare = app.add_subcommand("compare", "diff two run directories");
  compare->add_option("run_a", dir_a, "first run directory")->required();
  compare->add_option("run_b", dir_b, "second run directory")->required();

  CLI11_PARSE(app, argc, argv);

  std::vector<char> report(kReportCap);

  if (validate->parsed()) {
    const dc_status st =
        dc_validate(scenario_path.c_str(), report.data(), report.size());
    std::printf("%s\n", report.data());
    return exit_code(st);
  }

  if (run->parsed()) {
    dc_status st = DC_OK;
    dc_scenario* sc = dc_scenario_load(scenario_path.c_str(), &st);
    if (!sc) {
      std::fprintf(stderr, "error: %s\n", dc_last_error());
      return exit_code(st);
    }
    const auto set = [&](const char* key, const std::string& value) {
      if (st == DC_OK) st = dc_scenario_set_option(sc, key, value.c_str());
    };
    if (max_iter >= 0) set("max_iterations", std::to_string(max_iter));
    if (threshold >= 0.0) set("threshold", std::to_string(threshold));
    if (alpha >= 0.0) set("alpha", std::to_string(alpha));
    if (power >= 0.0) set("power", std::to_string(power));
    if (seed >= 0) set("seed", std::to_string(seed));
    if (threads >= 1) set("threads", std::to_string(threads));
    if (st != DC_OK) {
      std::fprintf(stderr, "error: %s\n", dc_last_error());
      dc_scenario_free(sc);
      return exit_code(st);
    }
    st = dc_run(sc, mode.c_str(), out_dir.c_str(), report.data(),
                report.size());
    dc_scenario_free(sc);
    std::printf("%s\n", report.data());
    if (st != DC_OK) std::fprintf(stderr, "error: %s\n", dc_last_error());
    return exit_code(st);
  }

  const dc_status st =
      dc_compare(dir_a.c_str(), dir_b.c_str(), report.data(), report.size());
  std::printf("%s\n", report.data());
  return exit_code(st);
}
