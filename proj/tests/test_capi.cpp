// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared-library C interface end to end: loading, option
// overrides, validation reports, runs, and run comparison.

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "districtcool.h"
#include "support.hpp"

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dcool_capi_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_tiny_scenario() {
  const fs::path p =
      fs::temp_directory_path() / "dcool_capi_test" / "tiny.json";
  fs::create_directories(p.parent_path());
  std::ofstream out(p);
  out << dcool::testing::tiny_scenario_json();
  return p.string();
}

}  // namespace

TEST_CASE("loading reports failures through status and last_error") {
  dc_status st = DC_OK;
  dc_scenario* sc = dc_scenario_load("/nonexistent/scenario.json", &st);
  CHECK(sc == nullptr);
  CHECK(st != DC_OK);
  CHECK(std::strlen(dc_last_error()) > 0);

  sc = dc_scenario_load(nullptr, &st);
  CHECK(sc == nullptr);
  CHECK(st == DC_ERR_IO);
}

TEST_CASE("a valid scenario loads and accepts option overrides") {
  const std::string path = write_tiny_scenario();
  dc_status st = DC_ERR_IO;
  dc_scenario* sc = dc_scenario_load(path.c_str(), &st);
  REQUIRE(sc != nullptr);
  CHECK(st == DC_OK);
  CHECK(std::strlen(dc_last_error()) == 0);

  CHECK(dc_scenario_set_option(sc, "threshold", "1e-4") == DC_OK);
  CHECK(dc_scenario_set_option(sc, "threads", "2") == DC_OK);
  CHECK(dc_scenario_set_option(sc, "threshold", "-1") == DC_ERR_VALIDATION);
  CHECK(dc_scenario_set_option(sc, "warp", "9") == DC_ERR_VALIDATION);
  CHECK(std::strlen(dc_last_error()) > 0);
  CHECK(dc_scenario_set_option(nullptr, "threshold", "1") ==
        DC_ERR_VALIDATION);
  dc_scenario_free(sc);
  dc_scenario_free(nullptr);
}

TEST_CASE("validate writes a JSON report") {
  const std::string path = write_tiny_scenario();
  std::vector<char> report(1 << 16);
  CHECK(dc_validate(path.c_str(), report.data(), report.size()) == DC_OK);
  const std::string text = report.data();
  CHECK(text.find("\"ok\": true") != std::string::npos);
  CHECK(text.find("checks") != std::string::npos);

  CHECK(dc_validate("/nonexistent.json", report.data(), report.size()) !=
        DC_OK);
}

TEST_CASE("run produces artifacts and a summary, and compare sees them") {
  const std::string path = write_tiny_scenario();
  dc_status st = DC_ERR_IO;
  dc_scenario* sc = dc_scenario_load(path.c_str(), &st);
  REQUIRE(sc != nullptr);

  const fs::path d1 = fresh_dir("run1");
  std::vector<char> summary(1 << 16);
  CHECK(dc_run(sc, "distributed", d1.string().c_str(), summary.data(),
               summary.size()) == DC_OK);
  const std::string text = summary.data();
  CHECK(text.find("\"status\": \"converged\"") != std::string::npos);
  for (const char* f : {"trace.csv", "temperatures.csv", "storage.csv",
                        "cop.csv", "summary.json"}) {
    CHECK(fs::exists(d1 / f));
  }

  // a too-small buffer is truncated but stays NUL-terminated
  char small[8];
  const fs::path d2 = fresh_dir("run2");
  CHECK(dc_run(sc, "distributed", d2.string().c_str(), small, sizeof(small)) ==
        DC_OK);
  CHECK(std::strlen(small) == sizeof(small) - 1);

  CHECK(dc_run(sc, "hybrid", fresh_dir("bad").string().c_str(),
               summary.data(), summary.size()) == DC_ERR_VALIDATION);

  std::vector<char> report(1 << 16);
  CHECK(dc_compare(d1.string().c_str(), d2.string().c_str(), report.data(),
                   report.size()) == DC_OK);
  const std::string cmp = report.data();
  CHECK(cmp.find("\"compatible\": true") != std::string::npos);

  CHECK(dc_compare(d1.string().c_str(), fresh_dir("empty").string().c_str(),
                   report.data(), report.size()) == DC_ERR_VALIDATION);
  dc_scenario_free(sc);
}
