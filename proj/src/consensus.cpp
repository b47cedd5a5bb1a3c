// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#include "districtcool/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

namespace dcool {
namespace {

constexpr double kStochasticTol = 1e-12;

void check_strong_connectivity(const Matrix& u_graph,
                               WeightCheckReport& rep) {
  const int m = static_cast<int>(u_graph.rows());
  // strong connectivity == node 0 reaches everyone in the graph and in its
  // transpose
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<bool> seen(m, false);
    std::vector<int> stack = {0};
    seen[0] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < m; ++w) {
        const double a = pass == 0 ? u_graph(w, v) : u_graph(v, w);
        if (a > 0.0 && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    for (int v = 0; v < m; ++v) {
      if (!seen[v]) {
        rep.ok = false;
        rep.violations.push_back(
            "union graph over one period is not strongly connected (agent " +
            std::to_string(v) + " unreachable)");
        return;
      }
    }
  }
}

}  // namespace

WeightCheckReport validate_weights(const WeightSchedule& sched) {
  WeightCheckReport rep;
  if (sched.matrices.empty()) {
    rep.ok = false;
    rep.violations.push_back("empty weight schedule");
    return rep;
  }
  const int m = sched.m();
  const auto fail = [&](int k, const std::string& what) {
    rep.ok = false;
    rep.violations.push_back("A(" + std::to_string(k) + "): " + what);
  };
  Matrix u_graph = Matrix::Zero(m, m);
  for (int k = 0; k < sched.period(); ++k) {
    const Matrix& A = sched.matrices[k];
    if (A.rows() != m || A.cols() != m) {
      fail(k, "matrix is not " + std::to_string(m) + "x" + std::to_string(m));
      continue;
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (A(i, j) < 0.0) {
          fail(k, "negative entry at (" + std::to_string(i) + "," +
                      std::to_string(j) + ")");
        } else if (A(i, j) > 0.0 && A(i, j) < sched.eta) {
          fail(k, "nonzero entry below the lower bound at (" +
                      std::to_string(i) + "," + std::to_string(j) + ")");
        }
      }
      if (A(i, i) < sched.eta) {
        fail(k, "self-weight below the lower bound at agent " +
                    std::to_string(i));
      }
      if (std::abs(A.row(i).sum() - 1.0) > kStochasticTol) {
        fail(k, "row " + std::to_string(i) + " sum differs from 1");
      }
      if (std::abs(A.col(i).sum() - 1.0) > kStochasticTol) {
        fail(k, "column " + std::to_string(i) + " sum differs from 1");
      }
    }
    u_graph += A;
  }
  if (rep.ok) check_strong_connectivity(u_graph, rep);
  return rep;
}

Matrix metropolis_weights(const Matrix& adjacency) {
  const int m = static_cast<int>(adjacency.rows());
  if (adjacency.cols() != m) throw ModelError("adjacency must be square");
  if (!adjacency.isApprox(adjacency.transpose())) {
    throw ModelError("adjacency must be symmetric");
  }
  Eigen::VectorXi deg = Eigen::VectorXi::Zero(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i != j && adjacency(i, j) > 0.0) ++deg(i);
    }
  }
  Matrix W = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i != j && adjacency(i, j) > 0.0) {
        W(i, j) = 1.0 / (1.0 + std::max(deg(i), deg(j)));
      }
    }
    W(i, i) = 1.0 - W.row(i).sum();
  }
  return W;
}

double StepSizeSchedule::at(int k) const {
  if (!custom.empty()) {
    return k < static_cast<int>(custom.size()) ? custom[k] : custom.back();
  }
  return alpha / std::pow(k + 1.0, power);
}

void StepSizeSchedule::validate() const {
  if (!custom.empty()) {
    double prev = kInf;
    for (double c : custom) {
      if (!(c > 0.0)) throw ModelError("step sizes must be positive");
      if (c > prev) throw ModelError("step sizes must be non-increasing");
      prev = c;
    }
    return;
  }
  if (!(alpha > 0.0)) throw ModelError("step-size alpha must be positive");
  if (!(power > 0.5 && power <= 1.0)) {
    throw ModelError("step-size power must lie in (1/2, 1]");
  }
}

double ConsensusState::disagreement() const {
  double d = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = i + 1; j < x.size(); ++j) {
      d = std::max(d, (x[i] - x[j]).cwiseAbs().maxCoeff());
    }
  }
  return d;
}

std::vector<Vector> average_estimates(const WeightSchedule& sched, int k,
                                      const std::vector<Vector>& x) {
  const Matrix& A = sched.at(k);
  const int m = static_cast<int>(x.size());
  if (A.rows() != m) throw ModelError("weight matrix size mismatch");
  std::vector<Vector> avg(m);
  for (int i = 0; i < m; ++i) {
    Vector v = Vector::Zero(x[0].size());
    for (int j = 0; j < m; ++j) {
      if (A(i, j) != 0.0) v += A(i, j) * x[j];
    }
    avg[i] = std::move(v);
  }
  return avg;
}

namespace {

/// Runs fn(i) for every agent, optionally on multiple threads.  Results are
/// independent per agent, so the outcome does not depend on scheduling.
void for_each_agent(int m, int n_threads, const std::function<void(int)>& fn) {
  if (n_threads <= 1 || m <= 1) {
    for (int i = 0; i < m; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(m);
  std::vector<std::thread> pool;
  const int workers = std::min(n_threads, m);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < m; i += workers) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (int i = 0; i < m; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
}

}  // namespace

ConsensusState initialize(const std::vector<AgentProblem>& agents,
                          const ConsensusOptions& opts) {
  const int m = static_cast<int>(agents.size());
  ConsensusState st;
  st.x.resize(m);
  st.u.resize(m);
  st.warm.resize(m);
  const Vector origin = Vector::Zero(agents[0].n_x());
  // a vanishing proximal pull toward the origin makes the selfish argmin
  // unique without visibly changing its objective
  const double selfish_c = 1e6;
  for_each_agent(m, opts.n_threads, [&](int i) {
    ProxResult res = solve_proximal_subproblem(agents[i], origin, selfish_c,
                                               opts.solver, &st.warm[i]);
    if (res.report.status != SolveStatus::kOptimal) {
      throw SolverError("selfish initialization failed for agent " +
                        std::to_string(i));
    }
    const double viol =
        agents[i].constraint_residuals(res.x, res.u).max_residual();
    if (viol > 1e-6) {
      throw SolverError("selfish initialization infeasible for agent " +
                        std::to_string(i));
    }
    st.x[i] = std::move(res.x);
    st.u[i] = std::move(res.u);
  });
  return st;
}

void iterate(ConsensusState& state, const std::vector<AgentProblem>& agents,
             const WeightSchedule& sched, const StepSizeSchedule& steps,
             const ConsensusOptions& opts, IterationRecord* record) {
  const int m = static_cast<int>(agents.size());
  const double c = steps.at(state.k);
  // barrier semantics: all averages are formed before any estimate changes
  const std::vector<Vector> avg = average_estimates(sched, state.k, state.x);
  std::vector<Vector> new_x(m), new_u(m);
  for_each_agent(m, opts.n_threads, [&](int i) {
    ProxResult res = solve_proximal_subproblem(agents[i], avg[i], c,
                                               opts.solver, &state.warm[i]);
    if (res.report.status != SolveStatus::kOptimal) {
      // rare near-degenerate active sets can stall the interior-point
      // iteration at the target tolerance; accept a slightly looser solve
      // before giving up (the step-size decay washes out the extra error)
      SolverOptions relaxed = opts.solver;
      relaxed.kkt_tol = std::max(1e4 * opts.solver.kkt_tol, 1e-6);
      state.warm[i].valid = false;
      res = solve_proximal_subproblem(agents[i], avg[i], c, relaxed,
                                      &state.warm[i]);
      if (res.report.status != SolveStatus::kOptimal) {
        throw SolverError("proximal subproblem failed for agent " +
                          std::to_string(i) + " at iteration " +
                          std::to_string(state.k));
      }
    }
    new_x[i] = std::move(res.x);
    new_u[i] = std::move(res.u);
  });
  if (record) {
    record->k = state.k;
    record->c = c;
    record->objectives = Vector(m);
    record->step_norms = Vector(m);
    for (int i = 0; i < m; ++i) {
      record->objectives(i) = agents[i].evaluate_objective(new_x[i], new_u[i]);
      record->step_norms(i) = (new_x[i] - state.x[i]).cwiseAbs().maxCoeff();
    }
  }
  state.x = std::move(new_x);
  state.u = std::move(new_u);
  state.k += 1;
  if (record) record->disagreement = state.disagreement();
}

ConsensusResult run_consensus(const std::vector<AgentProblem>& agents,
                              const WeightSchedule& sched,
                              const StepSizeSchedule& steps,
                              const ConsensusOptions& opts) {
  const WeightCheckReport wrep = validate_weights(sched);
  if (!wrep.ok) {
    throw ModelError("invalid weight schedule: " + wrep.violations.front());
  }
  steps.validate();

  ConsensusResult res;
  res.state = initialize(agents, opts);
  const int m = static_cast<int>(agents.size());
  while (res.state.k < opts.max_iterations) {
    IterationRecord rec;
    iterate(res.state, agents, sched, steps, opts, &rec);
    res.trace.push_back(rec);
    bool all_small = true;
    for (int i = 0; i < m; ++i) {
      if (!(rec.step_norms(i) < opts.threshold)) all_small = false;
    }
    if (all_small) {
      res.converged = true;
      break;
    }
  }
  res.iterations = res.state.k;
  return res;
}

}  // namespace dcool
