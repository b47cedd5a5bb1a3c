// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#include "districtcool/run.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "districtcool/csv.hpp"

namespace dcool {
namespace {

using nlohmann::ordered_json;

void write_profiles(const std::string& out_dir, const Scenario& sc,
                    const std::vector<AgentProblem>& agents, const Vector& x,
                    const std::vector<Vector>& u) {
  const int m = static_cast<int>(agents.size());
  const int n_t = sc.n_t;

  CsvTable temps;
  temps.header = {"breakpoint", "time_hours"};
  for (int i = 0; i < m; ++i) {
    for (int z = 0; z < agents[i].emap.n_zones; ++z) {
      temps.header.push_back("T_" + sc.buildings[i].name + "_zone" +
                             std::to_string(z) + "_C");
    }
  }
  for (int b = 1; b <= n_t; ++b) {
    std::vector<double> row = {static_cast<double>(b), b * sc.dt / 3600.0};
    for (int i = 0; i < m; ++i) {
      for (int z = 0; z < agents[i].emap.n_zones; ++z) {
        row.push_back(kelvin_to_celsius(u[i](agents[i].emap.temp_index(b, z))));
      }
    }
    temps.rows.push_back(std::move(row));
  }
  write_csv(out_dir + "/temperatures.csv", temps);

  CsvTable storage;
  storage.header = {"slot"};
  for (int i = 0; i < m; ++i) {
    storage.header.push_back("exchange_" + sc.buildings[i].name + "_MJ");
  }
  storage.header.push_back("storage_level_MJ");
  const Vector levels = agents[0].storage_levels(x);
  for (int t = 1; t <= n_t; ++t) {
    std::vector<double> row = {static_cast<double>(t)};
    for (int i = 0; i < m; ++i) {
      row.push_back(x(agents[0].layout.exchange_index(i, t)));
    }
    row.push_back(levels(t - 1));
    storage.rows.push_back(std::move(row));
  }
  write_csv(out_dir + "/storage.csv", storage);

  CsvTable cop;
  cop.header = {"slot"};
  for (int i = 0; i < m; ++i) {
    const std::string& n = sc.buildings[i].name;
    cop.header.push_back("request_" + n + "_MJ");
    cop.header.push_back("cooling_" + n + "_MJ");
    cop.header.push_back("electric_" + n + "_MJ");
    cop.header.push_back("cop_" + n);
  }
  for (int t = 2; t <= n_t; ++t) {
    std::vector<double> row = {static_cast<double>(t)};
    for (int i = 0; i < m; ++i) {
      const double eb = agents[i].emap.total_energy(u[i], t);
      const double ec = agents[i].net_cooling(x, u[i], t);
      const double ee = chiller_electric(ec, agents[i].fits[t - 2]);
      row.push_back(eb);
      row.push_back(ec);
      row.push_back(ee);
      row.push_back(ee > 0.0 ? ec / ee : 0.0);
    }
    cop.rows.push_back(std::move(row));
  }
  write_csv(out_dir + "/cop.csv", cop);
}

void write_summary(const std::string& out_dir, const Scenario& sc,
                   const std::string& mode, const RunOutcome& outcome,
                   const std::vector<double>& per_building) {
  ordered_json j;
  j["mode"] = mode;
  j["status"] = outcome.status;
  j["solver_ok"] = outcome.solver_ok;
  j["iterations"] = outcome.iterations;
  j["objective_total"] = outcome.objective;
  j["objective_per_building"] = per_building;
  j["disagreement"] = outcome.disagreement;
  j["n_buildings"] = sc.buildings.size();
  j["n_t"] = sc.n_t;
  j["threshold"] = sc.algorithm.threshold;
  j["alpha"] = sc.algorithm.alpha;
  j["power"] = sc.algorithm.power;
  j["seed"] = sc.algorithm.seed;
  std::ofstream out(out_dir + "/summary.json");
  out << j.dump(2) << "\n";
}

RunOutcome run_distributed(const Scenario& sc, const std::string& out_dir,
                           const std::vector<AgentProblem>& agents) {
  ConsensusOptions opts;
  opts.threshold = sc.algorithm.threshold;
  opts.max_iterations = sc.algorithm.max_iterations;
  opts.n_threads = sc.algorithm.threads;
  const StepSizeSchedule steps{sc.algorithm.alpha, sc.algorithm.power,
                               sc.algorithm.custom_steps};

  RunOutcome outcome;
  std::vector<IterationRecord> trace;
  try {
    ConsensusResult res = run_consensus(agents, sc.weights, steps, opts);
    trace = std::move(res.trace);
    outcome.solver_ok = true;
    outcome.status = res.converged ? "converged" : "max-iterations";
    outcome.iterations = res.iterations;
    outcome.disagreement = res.state.disagreement();

    const int m = static_cast<int>(agents.size());
    Vector x_mean = Vector::Zero(agents[0].n_x());
    for (const auto& xi : res.state.x) x_mean += xi;
    x_mean /= m;
    // report each building's best response to the agreed exchanges; the
    // averaged estimate is feasible, so the local re-optimization is too
    std::vector<Vector> u_best = res.state.u;
    std::vector<double> per_building;
    for (int i = 0; i < m; ++i) {
      const InnerResult inner = solve_inner(agents[i], x_mean, opts.solver);
      if (inner.feasible) u_best[i] = inner.u;
      per_building.push_back(agents[i].evaluate_objective(x_mean, u_best[i]));
      outcome.objective += per_building.back();
    }
    write_profiles(out_dir, sc, agents, x_mean, u_best);
    write_summary(out_dir, sc, "distributed", outcome, per_building);
  } catch (const std::exception& e) {
    outcome.solver_ok = false;
    outcome.status = e.what();
    write_summary(out_dir, sc, "distributed", outcome, {});
  }

  CsvTable tr;
  tr.header = {"k", "c", "disagreement"};
  const int m = static_cast<int>(agents.size());
  for (int i = 0; i < m; ++i) tr.header.push_back("objective_" + sc.buildings[i].name);
  for (int i = 0; i < m; ++i) tr.header.push_back("step_" + sc.buildings[i].name);
  for (const auto& rec : trace) {
    std::vector<double> row = {static_cast<double>(rec.k), rec.c,
                               rec.disagreement};
    for (int i = 0; i < m; ++i) row.push_back(rec.objectives(i));
    for (int i = 0; i < m; ++i) row.push_back(rec.step_norms(i));
    tr.rows.push_back(std::move(row));
  }
  write_csv(out_dir + "/trace.csv", tr);
  return outcome;
}

RunOutcome run_centralized(const Scenario& sc, const std::string& out_dir,
                           const std::vector<AgentProblem>& agents) {
  RunOutcome outcome;
  const int m = static_cast<int>(agents.size());
  CsvTable tr;
  tr.header = {"k", "c", "disagreement"};
  for (int i = 0; i < m; ++i) tr.header.push_back("objective_" + sc.buildings[i].name);
  for (int i = 0; i < m; ++i) tr.header.push_back("step_" + sc.buildings[i].name);
  try {
    SolverOptions sopts;
    CentralResult res = solve_centralized(agents, sopts);
    if (res.report.status != SolveStatus::kOptimal) {
      throw SolverError("centralized solve did not reach optimality");
    }
    outcome.solver_ok = true;
    outcome.status = "optimal";
    outcome.iterations = res.report.iterations;
    outcome.objective = res.objective;
    outcome.disagreement = 0.0;
    std::vector<double> per_building;
    for (int i = 0; i < m; ++i) {
      per_building.push_back(agents[i].evaluate_objective(res.x, res.u[i]));
    }
    std::vector<double> row = {0.0, 0.0, 0.0};
    for (int i = 0; i < m; ++i) row.push_back(per_building[i]);
    for (int i = 0; i < m; ++i) row.push_back(0.0);
    tr.rows.push_back(std::move(row));
    write_profiles(out_dir, sc, agents, res.x, res.u);
    write_summary(out_dir, sc, "centralized", outcome, per_building);
  } catch (const std::exception& e) {
    outcome.solver_ok = false;
    outcome.status = e.what();
    write_summary(out_dir, sc, "centralized", outcome, {});
  }
  write_csv(out_dir + "/trace.csv", tr);
  return outcome;
}

}  // namespace

RunOutcome run_scenario(const Scenario& sc, const std::string& mode,
                        const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::vector<AgentProblem> agents = build_agents(sc);
  if (mode == "distributed") return run_distributed(sc, out_dir, agents);
  if (mode == "centralized") return run_centralized(sc, out_dir, agents);
  throw ModelError("unknown mode: " + mode);
}

CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b) {
  CompareReport rep;
  const std::vector<std::string> files = {"trace.csv", "temperatures.csv",
                                          "storage.csv", "cop.csv"};
  for (const auto& f : files) {
    const std::string pa = dir_a + "/" + f, pb = dir_b + "/" + f;
    if (!std::filesystem::exists(pa) || !std::filesystem::exists(pb)) {
      rep.compatible = false;
      rep.mismatches.push_back(f + ": missing in one run");
      continue;
    }
    const CsvTable a = read_csv(pa), b = read_csv(pb);
    if (a.header != b.header) {
      rep.compatible = false;
      rep.mismatches.push_back(f + ": headers differ");
      continue;
    }
    QuantityDiff d;
    d.name = f;
    if (f == "trace.csv" && a.rows.size() != b.rows.size()) {
      // iteration counts may legitimately differ; report sizes instead
      d.max_abs = std::abs(static_cast<double>(a.rows.size()) -
                           static_cast<double>(b.rows.size()));
      d.max_rel = d.max_abs / std::max<double>(1, b.rows.size());
      rep.diffs.push_back(d);
      continue;
    }
    if (a.rows.size() != b.rows.size()) {
      rep.compatible = false;
      rep.mismatches.push_back(f + ": row counts differ");
      continue;
    }
    for (size_t r = 0; r < a.rows.size(); ++r) {
      for (size_t c = 0; c < a.rows[r].size(); ++c) {
        const double va = a.rows[r][c], vb = b.rows[r][c];
        const double ad = std::abs(va - vb);
        d.max_abs = std::max(d.max_abs, ad);
        d.max_rel = std::max(
            d.max_rel, ad / std::max(1e-12, std::max(std::abs(va), std::abs(vb))));
      }
    }
    rep.diffs.push_back(d);
  }

  const std::string sa = dir_a + "/summary.json", sb = dir_b + "/summary.json";
  if (std::filesystem::exists(sa) && std::filesystem::exists(sb)) {
    std::ifstream fa(sa), fb(sb);
    nlohmann::json ja, jb;
    fa >> ja;
    fb >> jb;
    QuantityDiff d;
    d.name = "objective_total";
    const double va = ja.value("objective_total", 0.0);
    const double vb = jb.value("objective_total", 0.0);
    d.max_abs = std::abs(va - vb);
    d.max_rel = d.max_abs / std::max(1e-12, std::max(std::abs(va), std::abs(vb)));
    rep.diffs.push_back(d);
  } else {
    rep.compatible = false;
    rep.mismatches.push_back("summary.json: missing in one run");
  }
  return rep;
}

}  // namespace dcool
