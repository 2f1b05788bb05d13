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

#include "mbqeq/error_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mbqeq/errors.hpp"

namespace mbqeq {

namespace {

constexpr double kBoundSlack = 1e-12;
constexpr double kHalfPi = std::numbers::pi / 2.0;

DensityMatrix propagate(const DensityMatrix& source, const ErrorParams& params) {
  DensityMatrix mixed = depolarize(source, params.eta);
  ProjectorSet projectors = build_projectors(basis_pairs(params.measurement_errors()));
  return linear_qst(measure_probs(mixed, projectors, params.delta));
}

}  // namespace

std::array<double, kNumParams> ErrorParams::to_vector() const {
  std::array<double, kNumParams> v = {r_corr, theta_22, p, p_a, p_b,
                                      theta_plus_a, theta_l_a, theta_plus_b, theta_l_b, eta};
  for (int nu = 0; nu < kNumBases; ++nu) v[kNumPhysicalParams + nu] = delta[nu];
  return v;
}

ErrorParams ErrorParams::from_vector(const std::array<double, kNumParams>& v) {
  ErrorParams e;
  e.r_corr = v[0];
  e.theta_22 = v[1];
  e.p = v[2];
  e.p_a = v[3];
  e.p_b = v[4];
  e.theta_plus_a = v[5];
  e.theta_l_a = v[6];
  e.theta_plus_b = v[7];
  e.theta_l_b = v[8];
  e.eta = v[9];
  for (int nu = 0; nu < kNumBases; ++nu) e.delta[nu] = v[kNumPhysicalParams + nu];
  return e;
}

ParamBox param_bounds(const RealVector16& sigma) {
  ParamBox box;
  const std::array<double, kNumPhysicalParams> lo = {1.0, -kHalfPi, 0.2, 0.2, 0.2,
                                                     -kHalfPi, -kHalfPi, -kHalfPi, -kHalfPi, 0.0};
  const std::array<double, kNumPhysicalParams> hi = {3.0, kHalfPi, 0.8, 0.8, 0.8,
                                                     kHalfPi, kHalfPi, kHalfPi, kHalfPi, 1.0};
  for (int i = 0; i < kNumPhysicalParams; ++i) {
    box.lower[i] = lo[i];
    box.upper[i] = hi[i];
  }
  for (int nu = 0; nu < kNumBases; ++nu) {
    if (!(sigma[nu] >= 0.0)) {
      throw DomainError("statistical widths sigma must be non-negative");
    }
    box.lower[kNumPhysicalParams + nu] = -sigma[nu];
    box.upper[kNumPhysicalParams + nu] = sigma[nu];
  }
  return box;
}

void check_bounds(const ErrorParams& params, const RealVector16& sigma) {
  ParamBox box = param_bounds(sigma);
  auto v = params.to_vector();
  for (int i = 0; i < kNumParams; ++i) {
    if (!std::isfinite(v[i]) || v[i] < box.lower[i] - kBoundSlack ||
        v[i] > box.upper[i] + kBoundSlack) {
      std::string name = i < kNumPhysicalParams
                             ? std::string(kPhysicalParamNames[i])
                             : "delta[" + std::string(kBasisLabels[i - kNumPhysicalParams]) + "]";
      throw DomainError("parameter " + name + " = " + std::to_string(v[i]) + " is outside [" +
                        std::to_string(box.lower[i]) + ", " + std::to_string(box.upper[i]) + "]");
    }
  }
}

std::array<double, 4> NetPhaseReport::degrees() const {
  auto r = radians();
  for (auto& x : r) x *= 180.0 / std::numbers::pi;
  return r;
}

NetPhaseReport net_phases(const ErrorParams& e) {
  return {e.theta_plus_a + e.theta_plus_b, e.theta_plus_a + e.theta_l_b,
          e.theta_l_a + e.theta_plus_b, e.theta_l_a + e.theta_l_b};
}

ErrorParams canonical_phase_gauge(const ErrorParams& e) {
  // Admissible shifts of each side's pair of phases.
  const double a_lo = -kHalfPi - std::min(e.theta_plus_a, e.theta_l_a);
  const double a_hi = kHalfPi - std::max(e.theta_plus_a, e.theta_l_a);
  const double b_lo = -kHalfPi - std::min(e.theta_plus_b, e.theta_l_b);
  const double b_hi = kHalfPi - std::max(e.theta_plus_b, e.theta_l_b);
  if (a_lo > a_hi || b_lo > b_hi) return e;
  const double t_lo = std::max(a_lo + b_lo, e.theta_22 - kHalfPi);
  const double t_hi = std::min(a_hi + b_hi, e.theta_22 + kHalfPi);
  if (t_lo > t_hi) return e;
  const double t = std::clamp(e.theta_22, t_lo, t_hi);
  const double a = std::clamp(t / 2.0, std::max(a_lo, t - b_hi), std::min(a_hi, t - b_lo));
  ErrorParams g = e;
  g.theta_22 -= t;
  g.theta_plus_a += a;
  g.theta_l_a += a;
  g.theta_plus_b += t - a;
  g.theta_l_b += t - a;
  return g;
}

PureState2Q build_source_state(double p, double theta_22) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("time-bin weight p must lie strictly inside (0, 1)");
  }
  Vector4c v = Vector4c::Zero();
  v(ket_index(1, 1)) = std::sqrt(p);
  v(ket_index(2, 2)) = std::polar(std::sqrt(1.0 - p), theta_22);
  return PureState2Q::normalized(v);
}

DensityMatrix source_density(const ErrorParams& params, const SimulationOptions& opts) {
  if (params.r_corr == 1.0 && !opts.force_grid) {
    return DensityMatrix::from_pure(build_source_state(params.p, params.theta_22));
  }
  WavepacketConfig cfg = opts.geometry.with_source(params.r_corr, params.p, params.theta_22);
  return simulate_wavepacket(cfg).rho;
}

DensityMatrix simulate_density(const ErrorParams& params, const RealVector16& sigma,
                               const SimulationOptions& opts) {
  check_bounds(params, sigma);
  return propagate(source_density(params, opts), params);
}

DensityMatrix Simulator::source(const ErrorParams& params) {
  if (params.r_corr == 1.0 && !opts_.force_grid) {
    return DensityMatrix::from_pure(build_source_state(params.p, params.theta_22));
  }
  if (!basis_ || basis_r_corr_ != params.r_corr) {
    basis_.emplace(opts_.geometry.with_source(params.r_corr, 0.5, 0.0));
    basis_r_corr_ = params.r_corr;
  }
  return basis_->state(params.p, params.theta_22).rho;
}

DensityMatrix Simulator::operator()(const ErrorParams& params, const RealVector16& sigma) {
  check_bounds(params, sigma);
  return propagate(source(params), params);
}

}  // namespace mbqeq
