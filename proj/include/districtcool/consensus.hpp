// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Synchronous proximal-consensus iteration over a (possibly time-varying)
// communication graph, plus the per-agent and centralized solve entry points.

#ifndef DISTRICTCOOL_CONSENSUS_HPP
#define DISTRICTCOOL_CONSENSUS_HPP

#include <string>
#include <vector>

#include "districtcool/problem.hpp"
#include "districtcool/solver.hpp"

namespace dcool {

/// Periodic sequence of mixing matrices A(k); entry (i, j) is the weight
/// agent i places on agent j's estimate.
struct WeightSchedule {
  std::vector<Matrix> matrices;
  double eta = 0.05;  // uniform lower bound on nonzero entries

  int m() const { return matrices.empty() ? 0 : static_cast<int>(matrices[0].rows()); }
  int period() const { return static_cast<int>(matrices.size()); }
  const Matrix& at(int k) const { return matrices[k % matrices.size()]; }
};

struct WeightCheckReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks double stochasticity (sums within 1e-12), nonnegativity, the
/// uniform lower bound on nonzero and diagonal entries, and strong
/// connectivity of the union graph over one period.
WeightCheckReport validate_weights(const WeightSchedule& sched);

/// Symmetric doubly stochastic weights from an undirected adjacency matrix
/// (Metropolis rule).  Self-loops are implied.
Matrix metropolis_weights(const Matrix& adjacency);

/// c(k) = alpha / (k+1)^power with power in (1/2, 1], or an explicit
/// non-increasing positive sequence (extended by its last value).
struct StepSizeSchedule {
  double alpha = 1.0;
  double power = 1.0;
  std::vector<double> custom;

  double at(int k) const;
  void validate() const;
};

struct ConsensusOptions {
  double threshold = 1e-3;  // stopping threshold on per-agent x change
  int max_iterations = 5000;
  int n_threads = 1;
  SolverOptions solver;
};

struct IterationRecord {
  int k = 0;
  double c = 0.0;
  double disagreement = 0.0;
  Vector objectives;  // per agent, f_i at (x_i, u_i)
  Vector step_norms;  // per agent, inf-norm change of x_i
};

struct ConsensusState {
  int k = 0;
  std::vector<Vector> x;  // per-agent estimates of the global vector
  std::vector<Vector> u;  // per-agent local decisions
  std::vector<WarmStart> warm;

  double disagreement() const;  // max over pairs of |x_i - x_j|_inf
};

struct ConsensusResult {
  ConsensusState state;
  std::vector<IterationRecord> trace;
  bool converged = false;
  int iterations = 0;
};

/// Selfish initialization: each agent minimizes its own objective over V_i
/// (with a vanishing pull toward the origin selecting one minimizer).
/// Feasibility of every agent's point is asserted.
ConsensusState initialize(const std::vector<AgentProblem>& agents,
                          const ConsensusOptions& opts);

/// One mixing step: returns the weighted averages for every agent at k.
std::vector<Vector> average_estimates(const WeightSchedule& sched, int k,
                                      const std::vector<Vector>& x);

/// One synchronous iteration: all reads of x(k) precede all writes of
/// x(k+1); agents are solved independently (optionally in parallel) and the
/// result does not depend on the execution order.
void iterate(ConsensusState& state, const std::vector<AgentProblem>& agents,
             const WeightSchedule& sched, const StepSizeSchedule& steps,
             const ConsensusOptions& opts, IterationRecord* record);

/// Full loop with the stopping rule: every agent's x change has inf-norm
/// below the threshold, or the iteration cap is hit.
ConsensusResult run_consensus(const std::vector<AgentProblem>& agents,
                              const WeightSchedule& sched,
                              const StepSizeSchedule& steps,
                              const ConsensusOptions& opts);

// --- per-agent and centralized solves ---

struct ProxResult {
  Vector x, u;
  SolverReport report;
};

/// Algorithm step: argmin over V_i of f_i(x, u) + |x_avg - x|^2 / (2c),
/// with the deterministic tie-break regularization on u.
ProxResult solve_proximal_subproblem(const AgentProblem& agent,
                                     const Vector& x_avg, double c,
                                     const SolverOptions& opts,
                                     WarmStart* warm = nullptr,
                                     const Vector* z_init = nullptr);

struct InnerResult {
  bool feasible = false;  // x in X_i and U_i(x) nonempty
  double value = 0.0;     // g_i(x) when feasible
  Vector u;
  SolverReport report;
};

/// g_i(x) = min over u in U_i(x) of f_i(x, u).
InnerResult solve_inner(const AgentProblem& agent, const Vector& x,
                        const SolverOptions& opts);

struct CentralResult {
  Vector x;
  std::vector<Vector> u;
  double objective = 0.0;  // sum of f_i, without regularization terms
  SolverReport report;
};

/// Minimizes sum_i f_i over the joint feasible set; the consensus oracle.
CentralResult solve_centralized(const std::vector<AgentProblem>& agents,
                                const SolverOptions& opts);

/// Reasonable interior starting point for an agent's stacked [x, u] vector.
Vector default_start(const AgentProblem& agent);

}  // namespace dcool

#endif
