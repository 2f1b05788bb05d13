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

#include <functional>
#include <span>
#include <vector>

namespace mbqeq {

using Objective = std::function<double(std::span<const double>)>;

struct PowellOptions {
  /// Stop when 2 (f_start - f_end) <= ftol (|f_start| + |f_end|) over a sweep.
  double ftol = 1e-8;
  /// Absolute step tolerance of each line search.
  double xtol = 1e-8;
  int max_iter = 200;
  /// 0 means unlimited.
  long max_evals = 0;
};

struct TrajectoryPoint {
  int iteration;
  double cost;
};

struct PowellResult {
  std::vector<double> x;
  double fun = 0.0;
  long n_evals = 0;
  int n_iter = 0;
  bool converged = false;
  /// Cost after each outer sweep; entry 0 is the starting point.
  std::vector<TrajectoryPoint> trajectory;
};

/// Powell's conjugate-direction method restricted to the box
/// [lower, upper]. Each line search is a bounded Brent minimization over the
/// feasible segment of the current direction, and a step is kept only when
/// it does not raise the cost, so the trajectory is non-increasing.
/// Throws DomainError when x0 lies outside the box or a bound is not finite,
/// NumericalError when the objective returns a non-finite value.
PowellResult powell_minimize(const Objective& objective, std::vector<double> x0,
                             const std::vector<double>& lower, const std::vector<double>& upper,
                             const PowellOptions& options = {});

}  // namespace mbqeq
