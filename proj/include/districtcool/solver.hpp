// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Structured smooth convex programs (diagonal quadratic + weighted even
// quartics of affine forms) and a primal-dual interior-point solver.

#ifndef DISTRICTCOOL_SOLVER_HPP
#define DISTRICTCOOL_SOLVER_HPP

#include <limits>
#include <vector>

#include "districtcool/common.hpp"
#include "districtcool/plant.hpp"

namespace dcool {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Affine functional a'z + b with a stored as one contiguous segment plus
/// at most one extra coefficient.
struct LinearTerm {
  int offset = 0;
  Vector seg;
  int extra_index = -1;
  double extra_value = 0.0;
  double b = 0.0;

  double value(const Vector& z) const {
    double v = b + seg.dot(z.segment(offset, seg.size()));
    if (extra_index >= 0) v += extra_value * z(extra_index);
    return v;
  }
  void add_scaled(Vector& out, double w) const {
    out.segment(offset, seg.size()) += w * seg;
    if (extra_index >= 0) out(extra_index) += w * extra_value;
  }
};

/// min  0.5 z'diag(Q)z + q'z + cst + sum_ch w_ch * quartic_ch(a_ch'z + b_ch)
/// s.t. lo <= z <= hi
///      quartic_ch(a_ch'z + b_ch) <= cap_ch     (channels with finite cap)
///      t'z + t0 <= 0                           (affine inequalities)
///      Aeq z = beq
struct ConvexProgram {
  struct Channel {
    LinearTerm a;
    BiquadFit q;
    double weight = 0.0;  // objective weight (may be 0)
    double cap = kInf;    // inequality bound on the quartic value
  };

  int n = 0;
  Vector quad_diag;
  Vector lin;
  double constant = 0.0;
  std::vector<Channel> channels;
  std::vector<LinearTerm> affine_ineq;
  Vector lo, hi;
  Matrix Aeq;  // 0 x n when absent
  Vector beq;

  static ConvexProgram make(int n);

  double objective(const Vector& z) const;
  Vector gradient(const Vector& z) const;

  /// Largest violation over all constraint families (0 when feasible).
  double max_violation(const Vector& z) const;
};

enum class SolveStatus { kOptimal, kMaxIter, kInfeasible, kNumerical };

struct SolverReport {
  SolveStatus status = SolveStatus::kNumerical;
  double kkt = kInf;         // max of stationarity/feasibility/complementarity
  double primal_violation = kInf;
  int iterations = 0;
};

struct SolverOptions {
  double kkt_tol = 1e-8;
  int max_iter = 200;
  double fraction_to_boundary = 0.995;
};

/// Dual state kept between solves for warm starting.
struct WarmStart {
  Vector z;
  Vector lambda;  // stacked multipliers in solver-internal order
  bool valid = false;
};

class IpmSolver {
 public:
  explicit IpmSolver(SolverOptions opts = {}) : opts_(opts) {}

  /// Solves the program from z0 (not required to be feasible).  On success z
  /// holds the minimizer.  When warm is non-null it is both consumed and
  /// refreshed.
  SolverReport solve(const ConvexProgram& prog, Vector& z,
                     WarmStart* warm = nullptr) const;

  const SolverOptions& options() const { return opts_; }

 private:
  SolverOptions opts_;
};

/// Compares analytic gradients of the objective and every constraint against
/// central finite differences at sampled interior points.
struct GradientCheckReport {
  double max_rel_error = 0.0;
  std::string worst;  // description of the worst component
  bool ok(double tol = 1e-5) const { return max_rel_error <= tol; }
};

GradientCheckReport check_gradients(const ConvexProgram& prog,
                                    const Vector& interior_point,
                                    int n_points = 20, unsigned seed = 7);

}  // namespace dcool

#endif
