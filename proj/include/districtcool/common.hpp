// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DISTRICTCOOL_COMMON_HPP
#define DISTRICTCOOL_COMMON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace dcool {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kStefanBoltzmann = 5.67e-8;  // W/(m^2 K^4)
inline constexpr double kKelvinOffset = 273.15;

inline double celsius_to_kelvin(double c) { return c + kKelvinOffset; }
inline double kelvin_to_celsius(double k) { return k - kKelvinOffset; }

/// Error for invalid model data or scenario inconsistencies.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Error for numerical failures (solver breakdown, singular systems).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dcool

#endif
