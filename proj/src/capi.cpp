// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#include "districtcool.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "districtcool/run.hpp"
#include "districtcool/scenario.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

void fill_buffer(const std::string& text, char* buf, size_t cap) {
  if (!buf || cap == 0) return;
  const size_t n = std::min(text.size(), cap - 1);
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
}

}  // namespace

struct dc_scenario {
  dcool::Scenario sc;
};

extern "C" {

dc_scenario* dc_scenario_load(const char* path, dc_status* status) {
  const auto fail = [&](dc_status st, const std::string& msg) -> dc_scenario* {
    set_error(msg);
    if (status) *status = st;
    return nullptr;
  };
  if (!path) return fail(DC_ERR_IO, "path is NULL");
  try {
    auto* handle = new dc_scenario{dcool::load_scenario(path)};
    const auto wrep = dcool::validate_weights(handle->sc.weights);
    if (!wrep.ok) {
      delete handle;
      return fail(DC_ERR_VALIDATION, wrep.violations.front());
    }
    set_error("");
    if (status) *status = DC_OK;
    return handle;
  } catch (const dcool::ScenarioError& e) {
    return fail(DC_ERR_VALIDATION, e.what());
  } catch (const std::exception& e) {
    return fail(DC_ERR_IO, e.what());
  }
}

void dc_scenario_free(dc_scenario* sc) { delete sc; }

dc_status dc_scenario_set_option(dc_scenario* sc, const char* key,
                                 const char* value) {
  if (!sc || !key || !value) {
    set_error("NULL argument");
    return DC_ERR_VALIDATION;
  }
  try {
    const std::string k = key;
    dcool::AlgorithmParams& a = sc->sc.algorithm;
    if (k == "alpha") {
      a.alpha = std::stod(value);
    } else if (k == "power") {
      a.power = std::stod(value);
    } else if (k == "threshold") {
      a.threshold = std::stod(value);
    } else if (k == "max_iterations") {
      a.max_iterations = std::stoi(value);
    } else if (k == "seed") {
      a.seed = static_cast<unsigned>(std::stoul(value));
    } else if (k == "threads") {
      a.threads = std::stoi(value);
    } else {
      set_error("unknown option: " + k);
      return DC_ERR_VALIDATION;
    }
    dcool::StepSizeSchedule steps{a.alpha, a.power, a.custom_steps};
    steps.validate();
    if (a.threshold <= 0.0 || a.max_iterations < 1 || a.threads < 1) {
      throw dcool::ModelError("option out of range");
    }
    set_error("");
    return DC_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DC_ERR_VALIDATION;
  }
}

dc_status dc_validate(const char* path, char* report_json, size_t capacity) {
  if (!path) {
    set_error("path is NULL");
    return DC_ERR_IO;
  }
  try {
    const dcool::ValidationReport rep = dcool::validate_scenario(path);
    nlohmann::ordered_json j;
    j["ok"] = rep.ok;
    j["checks"] = rep.checks;
    j["violations"] = rep.violations;
    fill_buffer(j.dump(2), report_json, capacity);
    set_error(rep.ok ? "" : rep.violations.front());
    return rep.ok ? DC_OK : DC_ERR_VALIDATION;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DC_ERR_IO;
  }
}

dc_status dc_run(dc_scenario* sc, const char* mode, const char* out_dir,
                 char* summary_json, size_t capacity) {
  if (!sc || !mode || !out_dir) {
    set_error("NULL argument");
    return DC_ERR_VALIDATION;
  }
  try {
    const dcool::RunOutcome outcome =
        dcool::run_scenario(sc->sc, mode, out_dir);
    std::ifstream in(std::string(out_dir) + "/summary.json");
    std::stringstream ss;
    ss << in.rdbuf();
    fill_buffer(ss.str(), summary_json, capacity);
    if (!outcome.solver_ok) {
      set_error(outcome.status);
      return DC_ERR_SOLVER;
    }
    set_error("");
    return DC_OK;
  } catch (const dcool::ModelError& e) {
    set_error(e.what());
    return DC_ERR_VALIDATION;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DC_ERR_IO;
  }
}

dc_status dc_compare(const char* dir_a, const char* dir_b, char* report_json,
                     size_t capacity) {
  if (!dir_a || !dir_b) {
    set_error("NULL argument");
    return DC_ERR_IO;
  }
  try {
    const dcool::CompareReport rep = dcool::compare_runs(dir_a, dir_b);
    nlohmann::ordered_json j;
    j["compatible"] = rep.compatible;
    j["mismatches"] = rep.mismatches;
    j["diffs"] = nlohmann::ordered_json::array();
    for (const auto& d : rep.diffs) {
      j["diffs"].push_back({{"name", d.name},
                            {"max_abs", d.max_abs},
                            {"max_rel", d.max_rel}});
    }
    fill_buffer(j.dump(2), report_json, capacity);
    set_error(rep.compatible ? "" : "runs are not comparable");
    return rep.compatible ? DC_OK : DC_ERR_VALIDATION;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DC_ERR_IO;
  }
}

const char* dc_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
