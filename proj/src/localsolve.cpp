// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Entry points wrapping the interior-point solver for the proximal step,
// the inner minimization g_i and the centralized oracle.

#include <cmath>

#include "districtcool/consensus.hpp"

namespace dcool {

Vector default_start(const AgentProblem& agent) {
  const int nx = agent.n_x();
  Vector z = Vector::Zero(nx + agent.n_u());
  const EnergyRequestMap& em = agent.emap;
  for (int b = 1; b <= agent.layout.n_t; ++b) {
    for (int zz = 0; zz < em.n_zones; ++zz) {
      z(nx + em.temp_index(b, zz)) =
          0.5 * (agent.comfort.lo(b - 1, zz) + agent.comfort.hi(b - 1, zz));
    }
  }
  z.segment(nx + em.state_offset(), em.n_state).setConstant(300.0);
  return z;
}

ProxResult solve_proximal_subproblem(const AgentProblem& agent,
                                     const Vector& x_avg, double c,
                                     const SolverOptions& opts,
                                     WarmStart* warm, const Vector* z_init) {
  const ConvexProgram prog = agent.proximal_program(x_avg, c);
  Vector z;
  if (z_init) {
    z = *z_init;
  } else {
    z = default_start(agent);
    z.head(agent.n_x()) = x_avg;
  }
  ProxResult res;
  res.report = IpmSolver(opts).solve(prog, z, warm);
  if (res.report.status != SolveStatus::kOptimal && warm && warm->valid) {
    // a stale warm start (from a solve with a different proximal weight) can
    // derail the interior-point iteration; retry from scratch
    warm->valid = false;
    z = default_start(agent);
    z.head(agent.n_x()) = x_avg;
    res.report = IpmSolver(opts).solve(prog, z, warm);
  }
  res.x = z.head(agent.n_x());
  res.u = z.tail(agent.n_u());
  return res;
}

InnerResult solve_inner(const AgentProblem& agent, const Vector& x,
                        const SolverOptions& opts) {
  InnerResult res;
  if (agent.x_only_violation(x) > opts.kkt_tol) {
    res.feasible = false;
    return res;
  }
  const ConvexProgram prog = agent.inner_program(x);
  Vector u = default_start(agent).tail(agent.n_u());
  res.report = IpmSolver(opts).solve(prog, u);
  if (res.report.status == SolveStatus::kOptimal) {
    res.feasible = true;
    res.value = prog.objective(u);
    res.u = u;
  } else {
    res.feasible = false;
  }
  return res;
}

CentralResult solve_centralized(const std::vector<AgentProblem>& agents,
                                const SolverOptions& opts) {
  const ConvexProgram prog = centralized_program(agents);
  const int nx = agents[0].n_x();
  Vector z = Vector::Zero(prog.n);
  int off = nx;
  for (const auto& a : agents) {
    z.segment(off, a.n_u()) = default_start(a).tail(a.n_u());
    off += a.n_u();
  }
  CentralResult res;
  res.report = IpmSolver(opts).solve(prog, z);
  res.x = z.head(nx);
  res.objective = 0.0;
  off = nx;
  for (const auto& a : agents) {
    res.u.push_back(z.segment(off, a.n_u()));
    res.objective += a.evaluate_objective(res.x, res.u.back());
    off += a.n_u();
  }
  return res;
}

}  // namespace dcool
