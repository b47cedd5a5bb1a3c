// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "districtcool/scenario.hpp"

using namespace dcool;
using nlohmann::json;

namespace {

json base_scenario() {
  json j;
  j["units"] = {{"temperature", "C"}, {"energy", "MJ"}, {"time", "s"}};
  j["horizon"] = {{"n_t", 4}, {"dt", 600.0}};
  j["disturbances"] = {
      {"t_out", {27.0, 28.0, 29.0, 28.0, 27.0}},
      {"q_short", {0.0, 100.0, 200.0, 100.0, 0.0}},
      {"q_long", {400.0, 400.0, 400.0, 400.0, 400.0}},
  };
  json zone = {
      {"heat_capacity", 3.0e6}, {"people_slope", -3.3},
      {"people_intercept", 1057.4}, {"solar_gain", 3.5},
      {"equip_per_person", 80.0},  {"base_load", 400.0},
      {"occupancy", {0.0, 5.0, 5.0, 0.0, 0.0}},
  };
  json wall = {
      {"name", "ext"},       {"area", 200.0},    {"slice_count", 2},
      {"slice_capacity", 2.1e5}, {"conduction", 2.0},
      {"conv_first", 8.0},   {"conv_last", 20.0},
      {"absorb_short", 0.15}, {"absorb_long", 0.9}, {"emissivity", 0.9},
      {"t_bar", 26.85},      {"first", {{"zone", 0}}}, {"last", "outdoor"},
  };
  json building = {
      {"name", "b"},
      {"zones", json::array({zone})},
      {"walls", json::array({wall})},
      {"chiller", {{"c0", 2.46}, {"c1", 2.77e-2}, {"c2", 3.79e-5}, {"e_max", 30.0}}},
      {"prices", {{"values", {0.1, 0.1, 0.2, 0.2, 0.1}}}},
      {"comfort", {{"working", {20.0, 24.0}}, {"off", {16.0, 30.0}}}},
  };
  json b2 = building;
  b2["name"] = "c";
  j["buildings"] = json::array({building, b2});
  j["storage"] = {{"loss", 0.99}, {"capacity", 50.0}, {"exchange_max", {3.0, 3.0}}};
  j["topology"] = {{"eta", 0.45},
                   {"matrices", {{{0.5, 0.5}, {0.5, 0.5}}}}};
  j["algorithm"] = {{"alpha", 2.0}, {"power", 1.0}, {"threshold", 1e-3},
                    {"max_iterations", 100}, {"seed", 0}, {"threads", 1}};
  return j;
}

std::string path_of(const ScenarioError& e) { return e.path(); }

}  // namespace

TEST_CASE("scenario parsing and unit conversion") {
  const Scenario sc = parse_scenario(base_scenario().dump());
  CHECK(sc.n_t == 4);
  CHECK(sc.buildings.size() == 2);
  // 27 C becomes 300.15 K
  CHECK(sc.disturbances.t_out[0] == doctest::Approx(300.15));
  CHECK(sc.buildings[0].comfort.working_lo == doctest::Approx(293.15));
  CHECK(sc.buildings[0].comfort.off_hi == doctest::Approx(303.15));
  CHECK(sc.buildings[0].walls[0].slices[1].t_bar == doctest::Approx(300.0));
  CHECK(sc.weights.matrices.size() == 1);
  CHECK(sc.algorithm.alpha == 2.0);
}

TEST_CASE("kelvin inputs pass through unchanged") {
  json j = base_scenario();
  j["units"]["temperature"] = "K";
  j["disturbances"]["t_out"] = {300.0, 301.0, 302.0, 301.0, 300.0};
  for (auto& b : j["buildings"]) {
    b["comfort"]["working"] = {293.15, 297.15};
    b["comfort"]["off"] = {289.15, 303.15};
    b["walls"][0]["t_bar"] = 300.0;
  }
  const Scenario sc = parse_scenario(j.dump());
  CHECK(sc.disturbances.t_out[0] == doctest::Approx(300.0));
  CHECK(sc.buildings[0].comfort.working_lo == doctest::Approx(293.15));
}

TEST_CASE("schema errors carry pointer-style paths") {
  SUBCASE("missing horizon") {
    json j = base_scenario();
    j.erase("horizon");
    try {
      parse_scenario(j.dump());
      FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
      CHECK(path_of(e) == "/horizon");
    }
  }
  SUBCASE("wrong disturbance length") {
    json j = base_scenario();
    j["disturbances"]["t_out"] = {27.0, 28.0};
    try {
      parse_scenario(j.dump());
      FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
      CHECK(path_of(e) == "/disturbances/t_out");
    }
  }
  SUBCASE("negative price") {
    json j = base_scenario();
    j["buildings"][1]["prices"]["values"][2] = -0.1;
    try {
      parse_scenario(j.dump());
      FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
      CHECK(path_of(e) == "/buildings/1/prices/values");
    }
  }
  SUBCASE("concave chiller coefficients") {
    json j = base_scenario();
    j["buildings"][0]["chiller"]["c2"] = -1.0;
    CHECK_THROWS_AS(parse_scenario(j.dump()), ScenarioError);
  }
  SUBCASE("unsupported energy unit") {
    json j = base_scenario();
    j["units"]["energy"] = "kWh";
    try {
      parse_scenario(j.dump());
      FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
      CHECK(path_of(e) == "/units/energy");
    }
  }
  SUBCASE("matrix with wrong shape") {
    json j = base_scenario();
    j["topology"]["matrices"] = {{{1.0}}};
    try {
      parse_scenario(j.dump());
      FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
      CHECK(path_of(e) == "/topology/matrices/0");
    }
  }
  SUBCASE("invalid storage loss") {
    json j = base_scenario();
    j["storage"]["loss"] = 1.5;
    try {
      parse_scenario(j.dump());
      FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
      CHECK(path_of(e) == "/storage");
    }
  }
  SUBCASE("increasing custom step sequence") {
    json j = base_scenario();
    j["algorithm"]["steps"] = {1.0, 2.0};
    CHECK_THROWS_AS(parse_scenario(j.dump()), ScenarioError);
  }
  SUBCASE("malformed JSON text") {
    CHECK_THROWS_AS(parse_scenario("{not json"), ScenarioError);
  }
}

TEST_CASE("agent assembly from a parsed scenario") {
  const Scenario sc = parse_scenario(base_scenario().dump());
  const std::vector<AgentProblem> agents = build_agents(sc);
  REQUIRE(agents.size() == 2);
  const AgentProblem& a = agents[0];
  CHECK(a.layout.m == 2);
  CHECK(a.layout.n_t == 4);
  CHECK(a.n_x() == 10);
  CHECK(a.n_u() == 4 * 1 + 2);

  // slot prices skip the first breakpoint: slot t is priced at breakpoint t
  CHECK(a.prices(0) == doctest::Approx(0.2));  // t = 2
  CHECK(a.prices(2) == doctest::Approx(0.1));  // t = 4

  // fixed chiller coefficients are replicated across slots
  CHECK(a.fits.size() == 3);
  CHECK(a.fits[0].c0 == 2.46);
  CHECK(a.fits[2].c2 == 3.79e-5);

  // comfort follows occupancy: breakpoints 1 and 2 are working hours
  CHECK(a.comfort.lo(0, 0) == doctest::Approx(293.15));
  CHECK(a.comfort.hi(1, 0) == doctest::Approx(297.15));
  CHECK(a.comfort.lo(2, 0) == doctest::Approx(289.15));
  CHECK(a.comfort.hi(3, 0) == doctest::Approx(303.15));
}

TEST_CASE("scenario file validation") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "dcool_scenario_test";
  fs::create_directories(dir);

  SUBCASE("well-formed scenario passes every check") {
    const fs::path p = dir / "good.json";
    std::ofstream(p) << base_scenario().dump();
    const ValidationReport rep = validate_scenario(p.string());
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
    REQUIRE(rep.checks.size() == 5);
    CHECK(rep.checks[0] == "schema");
    CHECK(rep.checks[4] == "model-assembly");
  }

  SUBCASE("weight defects are collected with their location") {
    json j = base_scenario();
    j["topology"]["matrices"] = {{{0.7, 0.3}, {0.5, 0.5}}};
    j["topology"]["eta"] = 0.1;
    const fs::path p = dir / "bad_weights.json";
    std::ofstream(p) << j.dump();
    const ValidationReport rep = validate_scenario(p.string());
    CHECK(!rep.ok);
    REQUIRE(!rep.violations.empty());
    CHECK(rep.violations.front().find("/topology/matrices") == 0);
  }

  SUBCASE("missing file is reported, not thrown") {
    const ValidationReport rep = validate_scenario((dir / "nope.json").string());
    CHECK(!rep.ok);
  }
}
