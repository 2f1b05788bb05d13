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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "mbqeq/errors.hpp"
#include "mbqeq/io.hpp"
#include "test_util.hpp"

namespace mbqeq {
namespace {

constexpr double kPi = std::numbers::pi;

ErrorParams reference_params() {
  ErrorParams p;
  p.r_corr = 2.2;
  p.theta_22 = 0.001;
  p.p = 0.52;
  p.p_a = 0.47;
  p.p_b = 0.47;
  // Net sums (0.05, -0.33, -0.20, -0.58).
  p.theta_plus_a = 0.0;
  p.theta_plus_b = 0.05;
  p.theta_l_a = -0.25;
  p.theta_l_b = -0.33;
  p.eta = 0.45;
  return p;
}

TEST(ErrorModel, VectorRoundTrip) {
  SplitMix64 rng(1);
  ErrorParams p = testing::random_params(rng);
  p.delta[7] = 0.003;
  ErrorParams q = ErrorParams::from_vector(p.to_vector());
  EXPECT_EQ(p.to_vector(), q.to_vector());
  EXPECT_EQ(p.to_vector()[0], p.r_corr);
  EXPECT_EQ(p.to_vector()[9], p.eta);
  EXPECT_EQ(p.to_vector()[kNumPhysicalParams + 7], 0.003);
}

TEST(ErrorModel, Bounds) {
  RealVector16 sigma{};
  sigma[2] = 0.01;
  ParamBox box = param_bounds(sigma);
  EXPECT_EQ(box.lower[0], 1.0);
  EXPECT_EQ(box.upper[0], 3.0);
  for (int k : {1, 5, 6, 7, 8}) {
    EXPECT_DOUBLE_EQ(box.lower[k], -kPi / 2);
    EXPECT_DOUBLE_EQ(box.upper[k], kPi / 2);
  }
  for (int k : {2, 3, 4}) {
    EXPECT_EQ(box.lower[k], 0.2);
    EXPECT_EQ(box.upper[k], 0.8);
  }
  EXPECT_EQ(box.lower[9], 0.0);
  EXPECT_EQ(box.upper[9], 1.0);
  EXPECT_EQ(box.lower[kNumPhysicalParams + 2], -0.01);
  EXPECT_EQ(box.upper[kNumPhysicalParams + 2], 0.01);
  EXPECT_EQ(box.upper[kNumPhysicalParams + 3], 0.0);
}

TEST(ErrorModel, CheckBoundsNamesParameter) {
  ErrorParams p;
  p.eta = 1.2;
  try {
    check_bounds(p, RealVector16{});
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("eta"), std::string::npos);
  }
  p = ErrorParams{};
  p.delta[10] = 1e-3;
  try {
    check_bounds(p, RealVector16{});
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("++"), std::string::npos);
  }
  EXPECT_THROW(simulate_density(p, RealVector16{}), DomainError);
}

TEST(ErrorModel, NetPhaseSums) {
  NetPhaseReport r = net_phases(reference_params());
  EXPECT_NEAR(r.plus_plus, 0.05, 1e-15);
  EXPECT_NEAR(r.plus_l, -0.33, 1e-15);
  EXPECT_NEAR(r.l_plus, -0.20, 1e-15);
  EXPECT_NEAR(r.l_l, -0.58, 1e-15);
  EXPECT_NEAR(r.degrees()[3], -0.58 * 180.0 / kPi, 1e-12);
}

TEST(ErrorModel, SourceStateExamples) {
  PureState2Q bell = build_source_state(0.5, 0.0);
  EXPECT_NEAR(std::abs(bell.amplitudes().dot(bell_state().amplitudes())), 1.0, 1e-15);
  PureState2Q skew = build_source_state(0.8, 0.0);
  EXPECT_NEAR(skew[0].real(), std::sqrt(0.8), 1e-15);
  EXPECT_NEAR(skew[3].real(), std::sqrt(0.2), 1e-15);
  DensityMatrix rho = DensityMatrix::from_pure(build_source_state(0.5, kPi / 4));
  EXPECT_NEAR(std::arg(rho(0, 3)), -kPi / 4, 1e-15);
  EXPECT_THROW(build_source_state(1.0, 0.0), DomainError);
}

TEST(ErrorModel, IdealPointMatchesBell) {
  EXPECT_LE(trace_distance(simulate_density(ErrorParams::ideal(), {}), ideal_density()), 1e-3);
  SimulationOptions grid{WavepacketConfig::defaults(), true};
  EXPECT_LE(trace_distance(simulate_density(ErrorParams::ideal(), {}, grid), ideal_density()), 1e-3);
}

TEST(ErrorModel, FullDepolarization) {
  ErrorParams p;
  p.eta = 1.0;
  EXPECT_LT(max_abs_diff(simulate_density(p, {}).matrix(), Matrix4c::Identity() * 0.25), 1e-9);
}

TEST(ErrorModel, FastPathAgreesWithGrid) {
  SplitMix64 rng(30);
  SimulationOptions grid{WavepacketConfig::defaults(), true};
  for (int trial = 0; trial < 5; ++trial) {
    ErrorParams p = testing::random_params(rng);
    p.r_corr = 1.0;
    EXPECT_LE(trace_distance(simulate_density(p, {}), simulate_density(p, {}, grid)), 1e-3);
  }
}

TEST(ErrorModel, AffineInEta) {
  SplitMix64 rng(31);
  ErrorParams p = testing::random_params(rng);
  auto at = [&](double eta) {
    ErrorParams q = p;
    q.eta = eta;
    return simulate_density(q, {}).matrix();
  };
  Matrix4c a = at(0.1), b = at(0.4), c = at(0.7);
  EXPECT_LT(max_abs_diff(b, 0.5 * (a + c)), 1e-10);
}

TEST(ErrorModel, AnalyzerGaugeInvariance) {
  SplitMix64 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    ErrorParams p = testing::random_params(rng);
    p.r_corr = 1.0;
    p.theta_plus_a *= 0.5;
    p.theta_l_a *= 0.5;
    p.theta_plus_b *= 0.5;
    p.theta_l_b *= 0.5;
    ErrorParams q = p;
    const double c = rng.uniform(-0.7, 0.7);
    q.theta_plus_a += c;
    q.theta_l_a += c;
    q.theta_plus_b -= c;
    q.theta_l_b -= c;
    EXPECT_LT(max_abs_diff(simulate_density(p, {}).matrix(), simulate_density(q, {}).matrix()),
              1e-10);
  }
}

TEST(ErrorModel, SourcePhaseTradesAgainstCommonNetPhase) {
  // Only theta_22 + (net sum) reaches any projector, so this direction is flat.
  SplitMix64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    ErrorParams p = testing::random_params(rng);
    p.r_corr = 1.0;
    p.theta_22 *= 0.5;
    p.theta_plus_a *= 0.5;
    p.theta_l_a *= 0.5;
    p.theta_plus_b *= 0.5;
    p.theta_l_b *= 0.5;
    ErrorParams q = p;
    const double c = rng.uniform(-0.7, 0.7);
    q.theta_22 += c;
    for (double* th : {&q.theta_plus_a, &q.theta_l_a, &q.theta_plus_b, &q.theta_l_b}) *th -= c / 2;
    EXPECT_LT(max_abs_diff(simulate_density(p, {}).matrix(), simulate_density(q, {}).matrix()),
              1e-10);
  }
}

TEST(ErrorModel, GaugeBreakingBoundedByLeakage) {
  // Leakage into |12>, |21> carries coherences that see individual phases.
  SimulationOptions grid{WavepacketConfig::defaults(), true};
  for (double r : {1.0, 2.0, 3.0}) {
    ErrorParams p;
    p.r_corr = r;
    p.theta_plus_a = 0.3;
    p.theta_l_a = -0.2;
    ErrorParams q = p;
    q.theta_plus_a += 0.4;
    q.theta_l_a += 0.4;
    q.theta_plus_b -= 0.4;
    q.theta_l_b -= 0.4;
    const Matrix4c g = simulate_wavepacket(WavepacketConfig::defaults(r, 0.5, 0.0)).gram;
    const double leak = g(1, 1).real() + g(2, 2).real();
    const double diff =
        max_abs_diff(simulate_density(p, {}, grid).matrix(), simulate_density(q, {}, grid).matrix());
    EXPECT_LE(diff, 2.0 * std::sqrt(leak) + 1e-10) << "r_corr=" << r;
  }
}

TEST(ErrorModel, HermitianUnitTraceWithoutDelta) {
  SplitMix64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    DensityMatrix rho = simulate_density(testing::random_params(rng), {});
    EXPECT_NEAR(rho.trace(), 1.0, 1e-10);
  }
}

TEST(ErrorModel, DeltaShiftsTraceByTimeBinEntries) {
  SplitMix64 rng(35);
  RealVector16 sigma;
  sigma.fill(0.02);
  ErrorParams p = testing::random_params(rng);
  for (auto& d : p.delta) d = rng.uniform(-0.02, 0.02);
  double expected = 1.0;
  for (int nu : kTimeBinBases) expected += p.delta[nu];
  EXPECT_NEAR(simulate_density(p, sigma).trace(), expected, 1e-10);
}

TEST(ErrorModel, SimulatorMatchesFreeFunction) {
  SplitMix64 rng(36);
  SimulationOptions grid{WavepacketConfig::defaults(), true};
  Simulator sim(grid);
  for (int trial = 0; trial < 6; ++trial) {
    ErrorParams p = testing::random_params(rng);
    if (trial % 2) p.r_corr = 1.0;
    EXPECT_LT(max_abs_diff(sim(p, {}).matrix(), simulate_density(p, {}, grid).matrix()), 1e-12);
    // Second call hits the cached basis.
    EXPECT_LT(max_abs_diff(sim(p, {}).matrix(), simulate_density(p, {}, grid).matrix()), 1e-12);
  }
}

TEST(ErrorModel, ReferenceGolden) {
  const io::Json doc = io::read_json_file(MBQEQ_TEST_DATA_DIR "/reference_rho_sim.json");
  const ErrorParams stored = io::params_from_json(doc);
  EXPECT_EQ(stored.to_vector(), reference_params().to_vector());
  const Matrix4c golden = io::matrix_from_json(doc["rho"], "rho");
  const DensityMatrix rho = simulate_density(reference_params(), {});
  EXPECT_LT(max_abs_diff(rho.matrix(), golden), 1e-10);
  EXPECT_NEAR(rho.trace(), 1.0, 1e-10);
}

TEST(ErrorModel, CanonicalGaugeKeepsStateAndZeroesTheta22) {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    ErrorParams e = testing::random_params(rng);
    e.r_corr = 1.0;
    const ErrorParams g = canonical_phase_gauge(e);
    check_bounds(g, RealVector16{});
    const auto before = net_phases(e).radians();
    const auto after = net_phases(g).radians();
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(g.theta_22 + after[k], e.theta_22 + before[k], 1e-12);
    }
    EXPECT_LT(trace_distance(simulate_density(e, RealVector16{}), simulate_density(g, RealVector16{})),
              1e-12);
    EXPECT_LE(std::abs(g.theta_22), std::abs(e.theta_22) + 1e-15);
  }
}

TEST(ErrorModel, CanonicalGaugeReachesZeroWhenRoomAllows) {
  ErrorParams e;
  e.theta_22 = 0.6;
  e.theta_plus_a = 0.1;
  e.theta_l_b = -0.2;
  const ErrorParams g = canonical_phase_gauge(e);
  EXPECT_EQ(g.theta_22, 0.0);
  EXPECT_NEAR(g.theta_plus_a, 0.4, 1e-15);
  EXPECT_NEAR(g.theta_l_a, 0.3, 1e-15);
  EXPECT_NEAR(g.theta_plus_b, 0.3, 1e-15);
  EXPECT_NEAR(g.theta_l_b, 0.1, 1e-15);
  EXPECT_EQ(canonical_phase_gauge(g).to_vector(), g.to_vector());
}

TEST(ErrorModel, CanonicalGaugeStopsAtPhaseBounds) {
  const double half_pi = std::numbers::pi / 2;
  ErrorParams e;
  e.theta_22 = 1.2;
  e.theta_plus_a = e.theta_plus_b = 1.0;
  const ErrorParams g = canonical_phase_gauge(e);
  EXPECT_NEAR(g.theta_plus_a, half_pi, 1e-12);
  EXPECT_NEAR(g.theta_plus_b, half_pi, 1e-12);
  EXPECT_NEAR(g.theta_22, 1.2 - 2 * (half_pi - 1.0), 1e-12);
  check_bounds(g, RealVector16{});
}

}  // namespace
}  // namespace mbqeq
