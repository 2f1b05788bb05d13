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

#include "mbqeq/fit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "mbqeq/errors.hpp"
#include "mbqeq/rng.hpp"

namespace mbqeq {

namespace {

ErrorParams with_physical(const ErrorParams& base, std::span<const double> x) {
  ErrorParams e = base;
  e.r_corr = x[0];
  e.theta_22 = x[1];
  e.p = x[2];
  e.p_a = x[3];
  e.p_b = x[4];
  e.theta_plus_a = x[5];
  e.theta_l_a = x[6];
  e.theta_plus_b = x[7];
  e.theta_l_b = x[8];
  e.eta = x[9];
  return e;
}

void append_trajectory(OptimizationResult& out, const PowellResult& stage, bool skip_first) {
  int offset = out.trajectory.empty() ? 0 : out.trajectory.back().iteration;
  for (std::size_t i = skip_first ? 1 : 0; i < stage.trajectory.size(); ++i) {
    out.trajectory.push_back({offset + stage.trajectory[i].iteration, stage.trajectory[i].cost});
  }
}

}  // namespace

double fit_cost(const DensityMatrix& rho_exp, const ErrorParams& params, const RealVector16& sigma,
                const FitOptions& options) {
  Simulator sim(options.simulation);
  return trace_distance(rho_exp, sim(params, sigma));
}

OptimizationResult fit_error_model(const DensityMatrix& rho_exp, const RealVector16& sigma,
                                   const FitOptions& options, const ErrorParams& initial) {
  check_bounds(initial, sigma);
  const ParamBox box = param_bounds(sigma);
  Simulator sim(options.simulation);
  OptimizationResult out;

  // Stage 1: physical parameters, delta = 0.
  ErrorParams stage1_base = initial;
  stage1_base.delta = {};
  const RealVector16 no_sigma{};
  auto stage1_objective = [&](std::span<const double> x) {
    return trace_distance(rho_exp, sim(with_physical(stage1_base, x), no_sigma));
  };
  auto init_vec = initial.to_vector();
  std::vector<double> x0(init_vec.begin(), init_vec.begin() + kNumPhysicalParams);
  std::vector<double> lo(box.lower.begin(), box.lower.begin() + kNumPhysicalParams);
  std::vector<double> hi(box.upper.begin(), box.upper.begin() + kNumPhysicalParams);
  PowellResult s1 = powell_minimize(stage1_objective, x0, lo, hi, options.powell);
  long evals = s1.n_evals;

  if (options.fix_phase_gauge) {
    const ErrorParams canonical = canonical_phase_gauge(with_physical(stage1_base, s1.x));
    if (canonical.theta_22 != s1.x[1]) {
      auto v = canonical.to_vector();
      PowellResult polish = powell_minimize(
          stage1_objective, std::vector<double>(v.begin(), v.begin() + kNumPhysicalParams), lo, hi,
          options.powell);
      evals += polish.n_evals;
      // The shift is exact only at r_corr = 1; never trade cost for the gauge.
      if (polish.fun <= s1.fun) {
        int iteration = s1.trajectory.back().iteration;
        for (std::size_t i = 1; i < polish.trajectory.size(); ++i) {
          if (polish.trajectory[i].cost <= s1.trajectory.back().cost)
            s1.trajectory.push_back({++iteration, polish.trajectory[i].cost});
        }
        s1.x = std::move(polish.x);
        s1.fun = polish.fun;
        s1.converged = polish.converged;
      }
    }
  }

  out.params = with_physical(stage1_base, s1.x);
  out.initial_cost = s1.trajectory.front().cost;
  out.stage1_cost = s1.fun;
  out.final_cost = s1.fun;
  out.n_evals = evals;
  out.converged = s1.converged;
  append_trajectory(out, s1, false);

  bool any_sigma = std::any_of(sigma.begin(), sigma.end(), [](double s) { return s > 0.0; });
  if (!any_sigma || options.skip_stage2) {
    return out;
  }

  // Stage 2: delta only, physical parameters frozen at the stage-1 optimum.
  const ErrorParams frozen = out.params;
  auto stage2_objective = [&](std::span<const double> d) {
    ErrorParams e = frozen;
    std::copy(d.begin(), d.end(), e.delta.begin());
    return trace_distance(rho_exp, sim(e, sigma));
  };
  std::vector<double> d0(kNumBases, 0.0);
  std::vector<double> dlo(box.lower.begin() + kNumPhysicalParams, box.lower.end());
  std::vector<double> dhi(box.upper.begin() + kNumPhysicalParams, box.upper.end());
  PowellResult s2 = powell_minimize(stage2_objective, d0, dlo, dhi, options.powell);

  std::copy(s2.x.begin(), s2.x.end(), out.params.delta.begin());
  out.final_cost = s2.fun;
  out.n_evals += s2.n_evals;
  out.converged = out.converged && s2.converged;
  out.stage2_ran = true;
  append_trajectory(out, s2, true);
  return out;
}

ErrorParams random_initial_params(std::uint64_t seed) {
  SplitMix64 rng(seed);
  ParamBox box = param_bounds(RealVector16{});
  auto v = ErrorParams::ideal().to_vector();
  for (int i = 0; i < kNumPhysicalParams; ++i) {
    v[i] = rng.uniform(box.lower[i], box.upper[i]);
  }
  return ErrorParams::from_vector(v);
}

ParamStatistics summarize(std::string name, std::vector<double> values) {
  if (values.empty()) {
    throw DomainError("cannot summarize an empty sample");
  }
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    double pos = q * static_cast<double>(values.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
  };
  return {std::move(name), values.front(), quantile(0.25), quantile(0.5), quantile(0.75),
          values.back()};
}

const ParamStatistics& StabilityReport::stats(const std::string& name) const {
  for (const auto& s : statistics) {
    if (s.name == name) return s;
  }
  throw DomainError("no statistics for parameter " + name);
}

StabilityReport stability_scan(const DensityMatrix& rho_exp, const RealVector16& sigma,
                               const FitOptions& options, int n_runs, std::uint64_t seed,
                               int threads) {
  if (n_runs < 2) {
    throw DomainError("stability scan needs at least two runs");
  }
  SplitMix64 seeder(seed);
  std::vector<std::uint64_t> run_seeds(n_runs);
  for (auto& s : run_seeds) s = seeder();

  StabilityReport report;
  report.n_runs = n_runs;
  report.seed = seed;
  report.runs.resize(n_runs);
  std::vector<std::exception_ptr> failures(n_runs);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n_runs; i = next++) {
      try {
        report.runs[i] =
            fit_error_model(rho_exp, sigma, options, random_initial_params(run_seeds[i]));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = std::min(threads, n_runs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  auto collect = [&](auto get) {
    std::vector<double> v;
    v.reserve(n_runs);
    for (const auto& r : report.runs) v.push_back(get(r));
    return v;
  };
  for (int k = 0; k < kNumPhysicalParams; ++k) {
    report.statistics.push_back(summarize(
        std::string(kPhysicalParamNames[k]),
        collect([k](const OptimizationResult& r) { return r.params.to_vector()[k]; })));
  }
  const std::array<const char*, 4> sum_names = {"net_plus_plus", "net_plus_l", "net_l_plus",
                                                "net_l_l"};
  for (int k = 0; k < 4; ++k) {
    report.statistics.push_back(summarize(sum_names[k], collect([k](const OptimizationResult& r) {
                                            return net_phases(r.params).radians()[k];
                                          })));
  }
  report.statistics.push_back(
      summarize("final_cost", collect([](const OptimizationResult& r) { return r.final_cost; })));
  return report;
}

int threads_from_environment() {
  const char* env = std::getenv("MBQEQ_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || v < 0) {
    throw ParseError("MBQEQ_THREADS must be a non-negative integer");
  }
  return static_cast<int>(v);
}

}  // namespace mbqeq
