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

#include "mbqeq/powell.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "mbqeq/errors.hpp"

namespace mbqeq {

namespace {

class CountedObjective {
 public:
  CountedObjective(const Objective& f, const std::vector<double>& lower,
                   const std::vector<double>& upper)
      : f_(f), lower_(lower), upper_(upper) {}

  double operator()(std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = std::clamp(x[i], lower_[i], upper_[i]);
    }
    ++evals_;
    double v = f_(std::span<const double>(x));
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "objective returned a non-finite value at x = [";
      for (std::size_t i = 0; i < x.size(); ++i) msg << (i ? ", " : "") << x[i];
      msg << "]";
      throw NumericalError(msg.str());
    }
    return v;
  }

  long evals() const { return evals_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

 private:
  const Objective& f_;
  const std::vector<double>& lower_;
  const std::vector<double>& upper_;
  long evals_ = 0;
};

// Feasible step range [lo, hi] of x + t d inside the box.
std::pair<double, double> feasible_segment(const std::vector<double>& x, const std::vector<double>& d,
                                           const std::vector<double>& lower,
                                           const std::vector<double>& upper) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (d[i] == 0.0) continue;
    any = true;
    double a = (lower[i] - x[i]) / d[i];
    double b = (upper[i] - x[i]) / d[i];
    lo = std::max(lo, std::min(a, b));
    hi = std::min(hi, std::max(a, b));
  }
  if (!any || !(hi > lo)) return {0.0, 0.0};
  return {std::min(lo, 0.0), std::max(hi, 0.0)};
}

int brent_bits(double xtol) {
  // Boost's absolute floor is 2^(1-bits) / 4; cap at half the mantissa.
  int bits = static_cast<int>(std::ceil(1.0 - std::log2(4.0 * xtol)));
  return std::clamp(bits, 8, std::numeric_limits<double>::digits / 2);
}

// Minimizes along d from x. On improvement updates x and fval and returns the
// step taken; otherwise returns an all-zero step.
std::vector<double> line_search(CountedObjective& f, std::vector<double>& x, double& fval,
                                const std::vector<double>& d, int bits) {
  std::vector<double> step(x.size(), 0.0);
  auto [lo, hi] = feasible_segment(x, d, f.lower(), f.upper());
  if (hi - lo <= 0.0) return step;
  std::vector<double> trial(x.size());
  auto along = [&](double t) {
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + t * d[i];
    return f(trial);
  };
  std::uintmax_t max_iter = 200;
  auto [t_best, f_best] = boost::math::tools::brent_find_minima(along, lo, hi, bits, max_iter);
  if (!(f_best < fval)) return step;
  for (std::size_t i = 0; i < x.size(); ++i) {
    trial[i] = x[i] + t_best * d[i];
  }
  // Evaluate once more at the clamped point so x and fval stay consistent.
  double f_check = f(trial);
  if (!(f_check < fval)) return step;
  for (std::size_t i = 0; i < x.size(); ++i) {
    step[i] = trial[i] - x[i];
    x[i] = trial[i];
  }
  fval = f_check;
  return step;
}

}  // namespace

PowellResult powell_minimize(const Objective& objective, std::vector<double> x0,
                             const std::vector<double>& lower, const std::vector<double>& upper,
                             const PowellOptions& options) {
  const std::size_t n = x0.size();
  if (lower.size() != n || upper.size() != n) {
    throw DomainError("bounds and starting point have different dimensions");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || lower[i] > upper[i]) {
      throw DomainError("every coordinate needs a finite, ordered bound pair");
    }
    if (!(x0[i] >= lower[i] && x0[i] <= upper[i])) {
      throw DomainError("starting point lies outside the bounds");
    }
  }

  CountedObjective f(objective, lower, upper);
  const int bits = brent_bits(options.xtol);

  std::vector<std::vector<double>> directions(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) directions[i][i] = 1.0;

  PowellResult result;
  std::vector<double> x = x0;
  double fval = f(x);
  result.trajectory.push_back({0, fval});

  int iter = 0;
  while (true) {
    const double f_start = fval;
    const std::vector<double> x_start = x;
    std::size_t big_index = 0;
    double big_drop = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double before = fval;
      line_search(f, x, fval, directions[i], bits);
      if (before - fval > big_drop) {
        big_drop = before - fval;
        big_index = i;
      }
    }
    ++iter;
    result.trajectory.push_back({iter, fval});

    if (2.0 * (f_start - fval) <= options.ftol * (std::abs(f_start) + std::abs(fval)) + 1e-20) {
      result.converged = true;
      break;
    }
    if (iter >= options.max_iter) break;
    if (options.max_evals > 0 && f.evals() >= options.max_evals) break;

    std::vector<double> d(n);
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = x[i] - x_start[i];
      moved = moved || d[i] != 0.0;
    }
    if (!moved) continue;

    auto [lo, hi] = feasible_segment(x, d, lower, upper);
    (void)lo;
    std::vector<double> x_ext(n);
    double scale = std::min(hi, 1.0);
    for (std::size_t i = 0; i < n; ++i) x_ext[i] = x[i] + scale * d[i];
    double f_ext = f(x_ext);
    if (f_start > f_ext) {
      double t = 2.0 * (f_start + f_ext - 2.0 * fval);
      double tmp = f_start - fval - big_drop;
      t *= tmp * tmp;
      tmp = f_start - f_ext;
      t -= big_drop * tmp * tmp;
      if (t < 0.0) {
        std::vector<double> step = line_search(f, x, fval, d, bits);
        bool nonzero = std::any_of(step.begin(), step.end(), [](double v) { return v != 0.0; });
        if (nonzero) {
          directions[big_index] = directions[n - 1];
          directions[n - 1] = step;
        }
      }
    }
  }

  result.x = x;
  result.fun = fval;
  result.n_evals = f.evals();
  result.n_iter = iter;
  return result;
}

}  // namespace mbqeq
