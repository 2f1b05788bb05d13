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

#include <string>
#include <utility>
#include <vector>

#include "mbqeq/tomography.hpp"

namespace mbqeq {

/// Detector constants. Rates and dark counts are per-pulse probabilities.
struct DetectorContext {
  double alpha_a = 0.60;
  double alpha_b = 0.27;
  double dark_a = 2e-9;
  double dark_b = 2e-9;
  /// Hz.
  double rep_rate = 500e6;
  /// Seconds.
  double dead_time = 80e-9;

  static DetectorContext from_record(const CoincidenceRecord& rec);
  void validate() const;
};

struct CoincidenceRates {
  double r_max;
  double r_min;
};

/// Multi-pair Poisson model of the fringe maximum and minimum:
///   R_min = (mu a_A / 4 + d_A)(mu a_B / 4 + d_B)
///   R_max = mu a_A a_B / 8 + R_min
CoincidenceRates coincidence_rates(double mu, const DetectorContext& ctx);

/// (R_max - R_min) / (R_max + R_min). Throws DomainError on a zero denominator.
double visibility(double r_max, double r_min);
inline double visibility(const CoincidenceRates& r) { return visibility(r.r_max, r.r_min); }

/// (mean(n_11, n_22) - mean(n_12, n_21)) / (sum of both means).
/// Throws DataError when all four time-bin counts are zero.
double visibility_from_counts(const CoincidenceRecord& rec);

/// Solves V(mu) = v_prime by bisection on [1e-6, 10] to 1e-9 in mu. The
/// bracket widens by decades (up to [1e-12, 1e6]) when it holds no root, and a
/// warning is appended to `warnings` if given. Throws DataError when no
/// bracket works or v_prime is outside (0, 1).
double estimate_mu(double v_prime, const DetectorContext& ctx,
                   std::vector<std::string>* warnings = nullptr);

/// Werner-state depolarization weight 1 - V'. Throws DomainError outside [0, 1].
double eta_from_visibility(double v_prime);

/// mu xi f exp(-mu xi f t_d / 2), in counts per second.
double single_count_rate(double mu, double xi, const DetectorContext& ctx);

/// Least-squares xi over (mu, rate) points: log-spaced scan of [1e-6, 1]
/// followed by a bounded Brent refinement. Throws DataError on empty input.
double fit_xi(const std::vector<std::pair<double, double>>& points, const DetectorContext& ctx);

}  // namespace mbqeq
