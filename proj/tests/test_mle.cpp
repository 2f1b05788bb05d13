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
#include "mbqeq/mle.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "mbqeq/errors.hpp"
#include "test_util.hpp"

namespace mbqeq {
namespace {

MleParams random_t(SplitMix64& rng) {
  MleParams t;
  for (auto& v : t) v = rng.normal();
  return t;
}

void expect_physical(const DensityMatrix& rho) {
  EXPECT_NEAR(rho.trace(), 1.0, 1e-10);
  EXPECT_LT(hermitian_asymmetry(rho.matrix()), 1e-12);
  EXPECT_GE(min_eigenvalue(rho), -1e-10);
}

// Non-PSD linear reconstruction from shot-noise-like perturbations of a
// nearly pure state.
DensityMatrix non_psd_linear(SplitMix64& rng) {
  while (true) {
    DensityMatrix rho = depolarize(DensityMatrix::from_pure(testing::random_pure(rng)), 0.02);
    RealVector16 s = measure_probs(rho, ideal_projectors());
    for (auto& v : s) v += rng.uniform(-0.03, 0.03);
    DensityMatrix lin = linear_qst(s);
    lin = DensityMatrix(lin.matrix() / lin.trace());
    if (min_eigenvalue(lin) < -1e-3) return lin;
  }
}

TEST(Mle, ParametrizationExamples) {
  MleParams t{};
  t[0] = 1.0;
  Matrix4c expect = Matrix4c::Zero();
  expect(0, 0) = 1.0;
  EXPECT_LT(max_abs_diff(t_to_rho(t).matrix(), expect), 1e-15);
  MleParams d{};
  d[0] = d[1] = d[2] = d[3] = 1.0;
  EXPECT_LT(max_abs_diff(t_to_rho(d).matrix(), Matrix4c::Identity() * 0.25), 1e-15);
  EXPECT_THROW(t_to_rho(MleParams{}), DomainError);
}

TEST(Mle, ParameterPlacement) {
  MleParams t{};
  for (int k = 0; k < 16; ++k) t[k] = k + 1.0;
  Matrix4c T = t_matrix(t);
  EXPECT_EQ(T(0, 0), Complex(1.0));
  EXPECT_EQ(T(3, 3), Complex(4.0));
  EXPECT_EQ(T(1, 0), Complex(5.0, 6.0));
  EXPECT_EQ(T(2, 1), Complex(7.0, 8.0));
  EXPECT_EQ(T(3, 2), Complex(9.0, 10.0));
  EXPECT_EQ(T(2, 0), Complex(11.0, 12.0));
  EXPECT_EQ(T(3, 1), Complex(13.0, 14.0));
  EXPECT_EQ(T(3, 0), Complex(15.0, 16.0));
  EXPECT_EQ(T(0, 1), Complex(0.0));
  EXPECT_EQ(t_params(T), t);
}

TEST(Mle, RandomParametersGivePhysicalStates) {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    DensityMatrix rho = t_to_rho(random_t(rng));
    EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
    EXPECT_GE(min_eigenvalue(rho), -1e-12);
  }
}

TEST(Mle, CountLikelihood) {
  SplitMix64 rng(2);
  MleParams t = random_t(rng);
  RealVector16 p = measure_probs(t_to_rho(t), ideal_projectors());
  // I/4 has p = 1/4 on every projector, so N = 4000 gives exact counts.
  MleParams mixed{};
  mixed[0] = mixed[1] = mixed[2] = mixed[3] = 1.0;
  std::array<std::int64_t, kNumBases> exact;
  exact.fill(1000);
  EXPECT_NEAR(likelihood_counts(mixed, exact, 4000.0), 0.0, 1e-20);
  std::array<std::int64_t, kNumBases> counts{};
  const double n = 1e6;
  for (int nu = 0; nu < kNumBases; ++nu) counts[nu] = std::llround(n * p[nu]);
  std::array<std::int64_t, kNumBases> doubled = counts;
  for (auto& c : doubled) c *= 2;
  for (auto& c : counts) c += 37;
  for (int nu = 0; nu < kNumBases; ++nu) doubled[nu] = 2 * counts[nu];
  EXPECT_NEAR(likelihood_counts(t, doubled, 2 * n), 2.0 * likelihood_counts(t, counts, n), 1e-6);
  std::array<std::int64_t, kNumBases> zero{};
  for (int nu = 0; nu < kNumBases; ++nu) zero[nu] = std::llround(n * p[nu]);
  const double base = likelihood_counts(t, zero, n);
  zero[4] = 0;
  EXPECT_NEAR(likelihood_counts(t, zero, n) - base, n * p[4] / 2.0, 1e-3 * n * p[4]);
}

TEST(Mle, ProbabilityLikelihoodFiniteDifference) {
  SplitMix64 rng(3);
  MleParams t = random_t(rng);
  RealVector16 s = measure_probs(t_to_rho(t), ideal_projectors());
  EXPECT_NEAR(likelihood_probs(t, s), 0.0, 1e-15);
  for (double eps : {1e-3, 1e-4}) {
    RealVector16 u = s;
    u[7] += eps;
    EXPECT_NEAR(likelihood_probs(t, u), eps * eps / (2.0 * s[7]), 1e-12);
  }
  RealVector16 neg = s;
  neg[2] = -0.01;
  const double v = likelihood_probs(t, neg);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 0.0);
}

TEST(Mle, InitialGuessReproducesFullRankState) {
  SplitMix64 rng(4);
  DensityMatrix rho = testing::random_density(rng);
  EXPECT_LT(max_abs_diff(t_to_rho(mle_initial_guess(rho)).matrix(), rho.matrix()), 1e-9);
  DensityMatrix lin = non_psd_linear(rng);
  expect_physical(t_to_rho(mle_initial_guess(lin)));
}

TEST(Mle, RecoversPhysicalStateFromExactProbabilities) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    DensityMatrix rho = testing::random_density(rng);
    MleResult r = mle_fit_probs(measure_probs(rho, ideal_projectors()));
    EXPECT_LE(trace_distance(r.rho, rho), 1e-4);
    expect_physical(r.rho);
  }
}

TEST(Mle, BellProbabilities) {
  MleResult r = mle_fit_probs(measure_probs(ideal_density(), ideal_projectors()));
  EXPECT_GE(fidelity_pure(bell_state(), r.rho), 0.9999);
  expect_physical(r.rho);
}

TEST(Mle, NonPsdInputBecomesPhysical) {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    DensityMatrix lin = non_psd_linear(rng);
    MleResult r = mle_project(lin);
    expect_physical(r.rho);
    EXPECT_LE(r.likelihood, r.initial_likelihood);
  }
}

TEST(Mle, StaysWithinPerturbationScale) {
  SplitMix64 rng(7);
  for (double eps : {1e-3, 1e-2}) {
    for (int trial = 0; trial < 3; ++trial) {
      DensityMatrix rho = testing::random_density(rng);
      RealVector16 s = measure_probs(rho, ideal_projectors());
      for (auto& v : s) v += rng.uniform(-eps, eps);
      DensityMatrix perturbed = linear_qst(s);
      MleResult r = mle_fit_probs(s);
      EXPECT_LE(trace_distance(r.rho, rho), trace_distance(perturbed, rho) + 1e-9);
    }
  }
}

TEST(Mle, CountFitUsesTimeBinTotal) {
  CoincidenceRecord rec;
  RealVector16 p = measure_probs(depolarize(ideal_density(), 0.1), ideal_projectors());
  for (int nu = 0; nu < kNumBases; ++nu) rec.counts[nu] = std::llround(20000 * p[nu]);
  MleResult r = mle_fit_counts(rec);
  EXPECT_EQ(r.total, normalization_constant(rec));
  expect_physical(r.rho);
  EXPECT_NEAR(fidelity_pure(bell_state(), r.rho), 1.0 - 0.075, 2e-3);
}

}  // namespace
}  // namespace mbqeq
