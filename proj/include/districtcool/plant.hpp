// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0
//
// Chiller electric-energy model (entropy-balance form plus its convex
// biquadratic fit) and the lossy shared thermal storage.

#ifndef DISTRICTCOOL_PLANT_HPP
#define DISTRICTCOOL_PLANT_HPP

#include <map>
#include <vector>

#include "districtcool/common.hpp"

namespace dcool {

struct NgGordonParams {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
  double t_cw = 0.0;  // regulated cooling-water temperature, K
};

/// Electric energy (MJ) for cooling request e_cool (MJ) at ambient t_out (K).
/// Throws SolverError when e_cool is at or beyond the model pole.
double ng_gordon_electric(double e_cool, double t_out, const NgGordonParams& p,
                          double dt);

/// Convex even-quartic relation E_e = c2 Ec^4 + c1 Ec^2 + c0.
struct BiquadFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

double chiller_electric(double e_cool, const BiquadFit& fit);

/// Weighted least-squares even-quartic regression through
/// (e_cool, e_electric) samples.  Returns the unclamped normal-equation
/// solution.
BiquadFit fit_even_quartic(const std::vector<double>& e_cool,
                           const std::vector<double>& e_electric,
                           const std::vector<double>& weights);

/// Weighted least-squares fit of the quartic surrogate against the full
/// model at ambient t_out.  Anchors (zero request, max-COP point) carry
/// heavy weight so the fit reproduces them within 1%; c1 and c2 are
/// clamped nonnegative.
BiquadFit fit_biquadratic(double t_out, const NgGordonParams& p, double dt,
                          int grid_size = 50);

/// One building's chiller: either fixed per-horizon coefficients or
/// ambient-dependent refits cached by temperature.
class ChillerModel {
 public:
  ChillerModel(BiquadFit fixed, double e_max)
      : fixed_(fixed), e_max_(e_max), has_ng_(false) {}
  ChillerModel(NgGordonParams ng, double e_max, double dt)
      : ng_(ng), e_max_(e_max), dt_(dt), has_ng_(true) {}

  /// Coefficients for a slot at ambient temperature t_out.
  const BiquadFit& fit_at(double t_out) const;
  double e_max() const { return e_max_; }
  bool ambient_dependent() const { return has_ng_; }
  const NgGordonParams& ng_params() const { return ng_; }

  /// Precompute fits for all ambient breakpoints (call before parallel use).
  void warm_cache(const std::vector<double>& t_out_values) const;

 private:
  BiquadFit fixed_{};
  NgGordonParams ng_{};
  double e_max_ = 0.0;
  double dt_ = 0.0;
  bool has_ng_ = false;
  mutable std::map<double, BiquadFit> cache_;
};

struct StorageParams {
  double loss = 0.0;                 // ARX coefficient a, in (0,1)
  double capacity = 0.0;             // MJ
  std::vector<double> exchange_max;  // per-building symmetric limit, MJ

  void validate(int n_buildings) const;
};

/// Affine map from (E_storage(1), total exchanges) to the level trajectory
/// for t = 1..n_t+1, including the post-horizon level that accounts for the
/// last slot's exchanges:
///   E(t) = loss^(t-1) E(1) - sum_{tau<t} loss^(t-1-tau) etot(tau).
struct StorageTrajectory {
  Vector init_coeff;  // length n_t+1, loss powers
  Matrix exch_coeff;  // (n_t+1) x n_t, applied to per-slot total exchanges

  Vector levels(double e_init, const Vector& total_exchanges) const {
    return init_coeff * e_init + exch_coeff * total_exchanges;
  }
};

StorageTrajectory storage_trajectory(double loss, int n_t);

}  // namespace dcool

#endif
