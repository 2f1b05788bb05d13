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

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "mbqeq/error_model.hpp"
#include "mbqeq/mle.hpp"

namespace mbqeq {

/// Error-source groups that are reset together.
enum class ErrorSource { RCorr, Theta22, P, PAB, ThetaNet, Eta, Delta, All };

constexpr std::array<ErrorSource, 8> kAllSources = {
    ErrorSource::RCorr, ErrorSource::Theta22, ErrorSource::P,     ErrorSource::PAB,
    ErrorSource::ThetaNet, ErrorSource::Eta, ErrorSource::Delta, ErrorSource::All};

std::string_view source_name(ErrorSource s);
/// Throws ParseError on an unknown label.
ErrorSource parse_source(std::string_view label);

/// `fitted` with the parameters of `source` set to their ideal values.
ErrorParams reset_source(const ErrorParams& fitted, ErrorSource source);

struct AblationEntry {
  ErrorSource source;
  double predicted_fidelity;
  /// Trace norm of rho_sim(fitted) - rho_sim(reset).
  double delta_rho_norm;
};

struct AblationOutcome {
  /// rho_exp - delta rho (Hermitian part).
  DensityMatrix predicted;
  /// MLE projection of `predicted` through the probability likelihood.
  DensityMatrix predicted_mle;
  AblationEntry entry;
};

struct AblationOptions {
  SimulationOptions simulation{WavepacketConfig::defaults(), true};
  MleOptions mle;
};

AblationOutcome ablate_source(const DensityMatrix& rho_exp, const ErrorParams& fitted,
                              const RealVector16& sigma, ErrorSource source,
                              const AblationOptions& options = {});

struct AblationReport {
  /// F(Phi, MLE(rho_exp)).
  double baseline_fidelity;
  /// One entry per source group plus All, by predicted fidelity descending.
  std::vector<AblationEntry> entries;

  /// Highest-ranked individual source (All excluded).
  ErrorSource top_source() const;
};

AblationReport ablation_report(const DensityMatrix& rho_exp, const ErrorParams& fitted,
                               const RealVector16& sigma, const AblationOptions& options = {});

}  // namespace mbqeq
