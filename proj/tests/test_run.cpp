// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "districtcool/run.hpp"
#include "support.hpp"

using namespace dcool;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dcool_run_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("scenario runs end to end in both modes") {
  const Scenario sc = parse_scenario(testing::tiny_scenario_json());

  const fs::path ddir = fresh_dir("dist");
  const RunOutcome dist = run_scenario(sc, "distributed", ddir.string());
  CHECK(dist.solver_ok);
  CHECK(dist.status == "converged");
  CHECK(dist.disagreement <= 1e-2);

  const fs::path cdir = fresh_dir("cent");
  const RunOutcome cent = run_scenario(sc, "centralized", cdir.string());
  CHECK(cent.solver_ok);
  CHECK(cent.status == "optimal");

  // every artifact exists in both output directories
  for (const auto& dir : {ddir, cdir}) {
    for (const char* f : {"trace.csv", "temperatures.csv", "storage.csv",
                          "cop.csv", "summary.json"}) {
      CHECK(fs::exists(dir / f));
    }
  }

  // cooperation cannot beat the joint optimum, and should get close
  CHECK(dist.objective >= cent.objective - 1e-8);
  CHECK(dist.objective <= cent.objective * 1.001);
}

TEST_CASE("repeated runs are byte-identical") {
  const Scenario sc = parse_scenario(testing::tiny_scenario_json());
  const fs::path d1 = fresh_dir("rep1");
  const fs::path d2 = fresh_dir("rep2");
  run_scenario(sc, "distributed", d1.string());
  run_scenario(sc, "distributed", d2.string());
  for (const char* f : {"trace.csv", "temperatures.csv", "storage.csv",
                        "cop.csv", "summary.json"}) {
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
}

TEST_CASE("thread count does not change the results") {
  Scenario sc = parse_scenario(testing::tiny_scenario_json());
  const fs::path d1 = fresh_dir("thr1");
  sc.algorithm.threads = 1;
  run_scenario(sc, "distributed", d1.string());
  const fs::path d2 = fresh_dir("thr2");
  sc.algorithm.threads = 2;
  run_scenario(sc, "distributed", d2.string());
  for (const char* f : {"trace.csv", "temperatures.csv", "storage.csv",
                        "cop.csv", "summary.json"}) {
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
}

TEST_CASE("run comparison") {
  const Scenario sc = parse_scenario(testing::tiny_scenario_json());
  const fs::path d1 = fresh_dir("cmp1");
  const fs::path d2 = fresh_dir("cmp2");
  run_scenario(sc, "distributed", d1.string());
  run_scenario(sc, "distributed", d2.string());

  SUBCASE("identical runs compare equal") {
    const CompareReport rep = compare_runs(d1.string(), d2.string());
    CHECK(rep.compatible);
    for (const auto& d : rep.diffs) CHECK(d.max_abs == 0.0);
  }

  SUBCASE("modes share the schema but differ numerically") {
    const fs::path d3 = fresh_dir("cmp3");
    run_scenario(sc, "centralized", d3.string());
    const CompareReport rep = compare_runs(d1.string(), d3.string());
    CHECK(rep.compatible);
    double total = 0.0;
    for (const auto& d : rep.diffs) total += d.max_abs;
    CHECK(total > 0.0);
  }
}

TEST_CASE("unknown mode is rejected") {
  const Scenario sc = parse_scenario(testing::tiny_scenario_json());
  CHECK_THROWS(run_scenario(sc, "hybrid", fresh_dir("bad").string()));
}
