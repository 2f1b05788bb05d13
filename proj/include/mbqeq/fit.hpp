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

#include <cstdint>
#include <string>
#include <vector>

#include "mbqeq/error_model.hpp"
#include "mbqeq/powell.hpp"

namespace mbqeq {

struct FitOptions {
  PowellOptions powell;
  /// The grid pipeline stays on at r_corr = 1 so the r_corr direction is live.
  SimulationOptions simulation{WavepacketConfig::defaults(), true};
  /// Skip the delta stage even when sigma is nonzero.
  bool skip_stage2 = false;
  /// Re-express the stage-1 optimum in canonical_phase_gauge and polish it
  /// from there.
  bool fix_phase_gauge = true;
};

struct OptimizationResult {
  ErrorParams params;
  /// Trace distance at the start, after stage 1 and at the end.
  double initial_cost = 0.0;
  double stage1_cost = 0.0;
  double final_cost = 0.0;
  long n_evals = 0;
  bool converged = false;
  bool stage2_ran = false;
  /// Outer iterations of both stages, numbered consecutively.
  std::vector<TrajectoryPoint> trajectory;
};

/// Trace distance D(rho_exp, rho_sim(params)) under the fit's simulation options.
double fit_cost(const DensityMatrix& rho_exp, const ErrorParams& params, const RealVector16& sigma,
                const FitOptions& options = {});

/// Two-stage fit. Stage 1 minimizes the trace distance over the ten physical
/// parameters with delta = 0, starting from `initial` (the ideal point by
/// default). Stage 2 then fits the sixteen delta_nu in [-sigma_nu, sigma_nu]
/// with the physical parameters frozen; it is skipped when every sigma_nu is 0.
OptimizationResult fit_error_model(const DensityMatrix& rho_exp, const RealVector16& sigma,
                                   const FitOptions& options = {},
                                   const ErrorParams& initial = ErrorParams::ideal());

/// Draws every physical parameter uniformly inside its box, in vector order,
/// from SplitMix64(seed). delta stays 0 so stage 2 always starts from the
/// stage-1 optimum.
ErrorParams random_initial_params(std::uint64_t seed);

struct ParamStatistics {
  std::string name;
  double min;
  double q1;
  double median;
  double q3;
  double max;
};

struct StabilityReport {
  int n_runs = 0;
  std::uint64_t seed = 0;
  /// Physical parameters, net phase sums, then the final cost.
  std::vector<ParamStatistics> statistics;
  /// Per-run results in run order.
  std::vector<OptimizationResult> runs;

  const ParamStatistics& stats(const std::string& name) const;
};

/// Quartiles by linear interpolation between order statistics.
ParamStatistics summarize(std::string name, std::vector<double> values);

/// Repeats fit_error_model from n_runs random starting points. Run i starts
/// from random_initial_params(s_i) where s_i is the i-th output of
/// SplitMix64(seed). Runs are spread over `threads` workers (0 = hardware
/// concurrency); the report does not depend on the worker count.
/// Throws DomainError when n_runs < 2.
StabilityReport stability_scan(const DensityMatrix& rho_exp, const RealVector16& sigma,
                               const FitOptions& options, int n_runs, std::uint64_t seed,
                               int threads = 1);

/// Worker count from MBQEQ_THREADS (unset or 0 = hardware concurrency).
int threads_from_environment();

}  // namespace mbqeq
