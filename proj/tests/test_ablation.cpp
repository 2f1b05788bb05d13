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
#include "mbqeq/ablation.hpp"

#include "gtest/gtest.h"
#include "mbqeq/errors.hpp"
#include "test_util.hpp"

namespace mbqeq {
namespace {

const RealVector16 kNoSigma{};

TEST(Ablation, SourceNamesRoundTrip) {
  for (ErrorSource s : kAllSources) EXPECT_EQ(parse_source(source_name(s)), s);
  EXPECT_THROW(parse_source("theta22"), ParseError);
  EXPECT_THROW(parse_source(""), ParseError);
}

TEST(Ablation, ResetTouchesOnlyItsGroup) {
  ErrorParams e;
  e.r_corr = 2.0;
  e.theta_22 = 0.1;
  e.p_a = 0.45;
  e.p_b = 0.48;
  e.theta_plus_b = 0.2;
  e.theta_l_a = -0.1;
  e.eta = 0.3;
  ErrorParams r = reset_source(e, ErrorSource::PAB);
  EXPECT_EQ(r.p_a, 0.5);
  EXPECT_EQ(r.p_b, 0.5);
  EXPECT_EQ(r.r_corr, 2.0);
  EXPECT_EQ(r.eta, 0.3);
  r = reset_source(e, ErrorSource::ThetaNet);
  EXPECT_EQ(r.theta_plus_b, 0.0);
  EXPECT_EQ(r.theta_l_a, 0.0);
  EXPECT_EQ(r.theta_22, 0.1);
  r = reset_source(e, ErrorSource::All);
  EXPECT_EQ(r.to_vector(), ErrorParams::ideal().to_vector());
}

TEST(Ablation, AbsentSourceIsNoOp) {
  ErrorParams e;
  e.eta = 0.2;
  e.p = 0.52;
  const DensityMatrix rho = simulate_density(e, kNoSigma);
  AblationOutcome out = ablate_source(rho, e, kNoSigma, ErrorSource::Theta22);
  EXPECT_LT(out.entry.delta_rho_norm, 1e-12);
  EXPECT_LT((out.predicted.matrix() - rho.matrix()).norm(), 1e-12);
}

TEST(Ablation, RemovingTheOnlyErrorRestoresBell) {
  ErrorParams e;
  e.eta = 0.2;
  const DensityMatrix rho = simulate_density(e, kNoSigma);
  AblationOutcome eta = ablate_source(rho, e, kNoSigma, ErrorSource::Eta);
  EXPECT_GE(eta.entry.predicted_fidelity, 0.999);
  AblationOutcome all = ablate_source(rho, e, kNoSigma, ErrorSource::All);
  EXPECT_NEAR(all.entry.predicted_fidelity, eta.entry.predicted_fidelity, 1e-6);
}

TEST(Ablation, DominantSourceRanksFirst) {
  ErrorParams e;
  e.eta = 0.3;
  e.p = 0.51;
  e.theta_plus_a = 0.02;
  const DensityMatrix rho = simulate_density(e, kNoSigma);
  AblationReport report = ablation_report(rho, e, kNoSigma);
  ASSERT_EQ(report.entries.size(), kAllSources.size());
  EXPECT_EQ(report.top_source(), ErrorSource::Eta);
  for (std::size_t i = 1; i < report.entries.size(); ++i) {
    EXPECT_GE(report.entries[i - 1].predicted_fidelity, report.entries[i].predicted_fidelity);
  }
}

TEST(Ablation, IdealParamsLeaveBaseline) {
  SplitMix64 rng(11);
  const DensityMatrix rho = testing::random_density(rng);
  AblationReport report = ablation_report(rho, ErrorParams::ideal(), kNoSigma);
  for (const auto& entry : report.entries) {
    EXPECT_NEAR(entry.predicted_fidelity, report.baseline_fidelity, 1e-6) << source_name(entry.source);
    EXPECT_LT(entry.delta_rho_norm, 1e-12);
  }
}

TEST(Ablation, PropertiesOnRandomFits) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    ErrorParams e = testing::random_params(rng);
    const DensityMatrix rho = testing::random_density(rng);
    Simulator sim;
    for (ErrorSource s : kAllSources) {
      const Matrix4c d = sim(e, kNoSigma).matrix() - sim(reset_source(e, s), kNoSigma).matrix();
      EXPECT_LT(std::abs(d.trace()), 1e-12) << source_name(s);
      AblationOutcome out = ablate_source(rho, e, kNoSigma, s);
      EXPECT_LE(out.entry.predicted_fidelity, 1.0 + 1e-9);
      EXPECT_GE(out.entry.predicted_fidelity, -1e-9);
      EXPECT_LT((out.predicted.matrix() - out.predicted.matrix().adjoint()).norm(), 1e-14);
    }
  }
}

}  // namespace
}  // namespace mbqeq
