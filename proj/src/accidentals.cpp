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

#include "mbqeq/accidentals.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

#include "mbqeq/errors.hpp"

namespace mbqeq {

namespace {

constexpr double kMuLow = 1e-6;
constexpr double kMuHigh = 10.0;
constexpr double kMuTolerance = 1e-9;

}  // namespace

DetectorContext DetectorContext::from_record(const CoincidenceRecord& rec) {
  return {rec.alpha_a, rec.alpha_b, rec.dark_a, rec.dark_b, rec.rep_rate, rec.dead_time};
}

void DetectorContext::validate() const {
  if (!(alpha_a > 0.0 && alpha_a <= 1.0) || !(alpha_b > 0.0 && alpha_b <= 1.0)) {
    throw DomainError("detection efficiencies must lie in (0, 1]");
  }
  if (!(dark_a >= 0.0) || !(dark_b >= 0.0)) {
    throw DomainError("dark-count probabilities must be non-negative");
  }
  if (!(rep_rate > 0.0)) {
    throw DomainError("repetition rate must be positive");
  }
}

CoincidenceRates coincidence_rates(double mu, const DetectorContext& ctx) {
  if (!(mu >= 0.0)) {
    throw DomainError("mean pair number must be non-negative");
  }
  double single_a = mu * ctx.alpha_a / 4.0 + ctx.dark_a;
  double single_b = mu * ctx.alpha_b / 4.0 + ctx.dark_b;
  double r_min = single_a * single_b;
  return {mu * ctx.alpha_a * ctx.alpha_b / 8.0 + r_min, r_min};
}

double visibility(double r_max, double r_min) {
  double denom = r_max + r_min;
  if (!(denom != 0.0)) {
    throw DomainError("visibility undefined for zero total rate");
  }
  return (r_max - r_min) / denom;
}

double visibility_from_counts(const CoincidenceRecord& rec) {
  double n_max = 0.5 * static_cast<double>(rec.counts[basis_index("11")] + rec.counts[basis_index("22")]);
  double n_min = 0.5 * static_cast<double>(rec.counts[basis_index("12")] + rec.counts[basis_index("21")]);
  if (n_max + n_min == 0.0) {
    throw DataError("time-bin counts are all zero; visibility undefined");
  }
  return (n_max - n_min) / (n_max + n_min);
}

double estimate_mu(double v_prime, const DetectorContext& ctx, std::vector<std::string>* warnings) {
  ctx.validate();
  if (!(v_prime > 0.0 && v_prime < 1.0)) {
    throw DataError("visibility must lie strictly inside (0, 1) to estimate mu");
  }
  auto g = [&](double mu) { return visibility(coincidence_rates(mu, ctx)) - v_prime; };
  double lo = kMuLow;
  double hi = kMuHigh;
  bool widened = false;
  // V(mu) decreases, so g(lo) > 0 > g(hi) brackets the root.
  while (g(lo) < 0.0 && lo > 1e-12) {
    lo /= 10.0;
    widened = true;
  }
  while (g(hi) > 0.0 && hi < 1e6) {
    hi *= 10.0;
    widened = true;
  }
  double g_lo = g(lo);
  double g_hi = g(hi);
  if (!(g_lo >= 0.0 && g_hi <= 0.0)) {
    throw DataError("visibility is inconsistent with the detector model; no root for mu");
  }
  if (widened && warnings != nullptr) {
    warnings->push_back("mu bracket widened to [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
  }
  while (hi - lo > kMuTolerance) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double eta_from_visibility(double v_prime) {
  if (!(v_prime >= 0.0 && v_prime <= 1.0)) {
    throw DomainError("visibility must lie in [0, 1]");
  }
  return 1.0 - v_prime;
}

double single_count_rate(double mu, double xi, const DetectorContext& ctx) {
  double r = mu * xi * ctx.rep_rate;
  return r * std::exp(-r * ctx.dead_time / 2.0);
}

double fit_xi(const std::vector<std::pair<double, double>>& points, const DetectorContext& ctx) {
  if (points.empty()) {
    throw DataError("no single-count points to fit");
  }
  ctx.validate();
  auto residual = [&](double log_xi) {
    double xi = std::exp(log_xi);
    double sum = 0.0;
    for (const auto& [mu, rate] : points) {
      double d = single_count_rate(mu, xi, ctx) - rate;
      sum += d * d;
    }
    return sum;
  };
  // The model is not monotonic in xi, so scan before refining.
  const double log_lo = std::log(1e-6);
  const double log_hi = 0.0;
  const int steps = 400;
  double best = log_lo;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    double x = log_lo + (log_hi - log_lo) * i / steps;
    double v = residual(x);
    if (v < best_val) {
      best_val = v;
      best = x;
    }
  }
  double step = (log_hi - log_lo) / steps;
  std::uintmax_t iters = 200;
  auto [x, fx] = boost::math::tools::brent_find_minima(
      residual, std::max(log_lo, best - step), std::min(log_hi, best + step),
      std::numeric_limits<double>::digits / 2, iters);
  (void)fx;
  return std::exp(x);
}

}  // namespace mbqeq
