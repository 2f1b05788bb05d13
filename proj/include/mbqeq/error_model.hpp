// Copyright 2026 The mbqeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string_view>

#include "mbqeq/quantum_core.hpp"
#include "mbqeq/tomography.hpp"
#include "mbqeq/wavepacket.hpp"

namespace mbqeq {

constexpr int kNumPhysicalParams = 10;
constexpr int kNumParams = kNumPhysicalParams + kNumBases;

/// The 26 model parameters. Field order matches the flat vector layout used
/// by the optimizer: ten physical parameters followed by the sixteen
/// probability offsets in canonical basis order.
struct ErrorParams {
  double r_corr = 1.0;
  double theta_22 = 0.0;
  double p = 0.5;
  double p_a = 0.5;
  double p_b = 0.5;
  double theta_plus_a = 0.0;
  double theta_l_a = 0.0;
  double theta_plus_b = 0.0;
  double theta_l_b = 0.0;
  double eta = 0.0;
  RealVector16 delta{};

  static ErrorParams ideal() { return {}; }

  std::array<double, kNumParams> to_vector() const;
  static ErrorParams from_vector(const std::array<double, kNumParams>& v);

  MeasurementErrors measurement_errors() const {
    return {theta_plus_a, theta_l_a, theta_plus_b, theta_l_b, p_a, p_b};
  }
};

/// Names of the physical parameters, in vector order.
constexpr std::array<std::string_view, kNumPhysicalParams> kPhysicalParamNames = {
    "r_corr", "theta_22", "p", "p_a", "p_b",
    "theta_plus_a", "theta_l_a", "theta_plus_b", "theta_l_b", "eta"};

struct ParamBox {
  std::array<double, kNumParams> lower;
  std::array<double, kNumParams> upper;
};

/// Fit box. delta_nu is confined to [-sigma_nu, sigma_nu].
ParamBox param_bounds(const RealVector16& sigma);

/// Throws DomainError naming the first parameter outside its box.
void check_bounds(const ErrorParams& params, const RealVector16& sigma);

/// The four observable phase-error combinations theta'_A + theta'_B.
struct NetPhaseReport {
  double plus_plus;
  double plus_l;
  double l_plus;
  double l_l;

  std::array<double, 4> radians() const { return {plus_plus, plus_l, l_plus, l_l}; }
  std::array<double, 4> degrees() const;
};

NetPhaseReport net_phases(const ErrorParams& params);

/// Moves along theta_22 -> theta_22 - t, theta'_A -> theta'_A + a,
/// theta'_B -> theta'_B + (t - a), which leaves rho_sim unchanged at
/// r_corr = 1. Picks the t bringing theta_22 closest to 0 with every phase in
/// its box, then a as close to t / 2 as the box allows.
ErrorParams canonical_phase_gauge(const ErrorParams& params);

/// sqrt(p)|11> + exp(i theta22) sqrt(1-p)|22>.
PureState2Q build_source_state(double p, double theta_22);

struct SimulationOptions {
  /// Geometry used when the wavepacket stage runs; only its widths and
  /// amplitudes are replaced per evaluation.
  WavepacketConfig geometry = WavepacketConfig::defaults();
  /// Run the grid pipeline even at r_corr = 1.
  bool force_grid = false;
};

/// Source density matrix before depolarization: the pure state at r_corr = 1
/// (unless forced onto the grid), the wavepacket effective state otherwise.
DensityMatrix source_density(const ErrorParams& params, const SimulationOptions& opts = {});

/// rho_sim: source -> depolarize(eta) -> errored analyzers + delta -> ideal
/// linear inversion. Hermitian, trace 1 + (sum of the four time-bin deltas),
/// possibly non-positive. Throws DomainError on bound violations.
DensityMatrix simulate_density(const ErrorParams& params, const RealVector16& sigma,
                               const SimulationOptions& opts = {});

/// simulate_density with a one-entry cache of the wavepacket decomposition,
/// so consecutive evaluations at the same r_corr skip the grid pipeline.
/// Not thread-safe; use one instance per thread.
class Simulator {
 public:
  explicit Simulator(SimulationOptions opts = {}) : opts_(std::move(opts)) {}

  DensityMatrix operator()(const ErrorParams& params, const RealVector16& sigma);
  DensityMatrix source(const ErrorParams& params);

  const SimulationOptions& options() const { return opts_; }

 private:
  SimulationOptions opts_;
  std::optional<WavepacketBasis> basis_;
  double basis_r_corr_ = 0.0;
};

}  // namespace mbqeq
