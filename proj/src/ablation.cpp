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

#include <algorithm>
#include <string>

#include "mbqeq/errors.hpp"

namespace mbqeq {

std::string_view source_name(ErrorSource s) {
  switch (s) {
    case ErrorSource::RCorr: return "r_corr";
    case ErrorSource::Theta22: return "theta_22";
    case ErrorSource::P: return "p";
    case ErrorSource::PAB: return "p_ab";
    case ErrorSource::ThetaNet: return "theta_net";
    case ErrorSource::Eta: return "eta";
    case ErrorSource::Delta: return "delta";
    case ErrorSource::All: return "all";
  }
  return "unknown";
}

ErrorSource parse_source(std::string_view label) {
  for (ErrorSource s : kAllSources) {
    if (source_name(s) == label) return s;
  }
  throw ParseError("unknown error source '" + std::string(label) + "'");
}

ErrorParams reset_source(const ErrorParams& fitted, ErrorSource source) {
  const ErrorParams ideal = ErrorParams::ideal();
  ErrorParams e = fitted;
  switch (source) {
    case ErrorSource::RCorr:
      e.r_corr = ideal.r_corr;
      break;
    case ErrorSource::Theta22:
      e.theta_22 = ideal.theta_22;
      break;
    case ErrorSource::P:
      e.p = ideal.p;
      break;
    case ErrorSource::PAB:
      e.p_a = ideal.p_a;
      e.p_b = ideal.p_b;
      break;
    case ErrorSource::ThetaNet:
      e.theta_plus_a = ideal.theta_plus_a;
      e.theta_l_a = ideal.theta_l_a;
      e.theta_plus_b = ideal.theta_plus_b;
      e.theta_l_b = ideal.theta_l_b;
      break;
    case ErrorSource::Eta:
      e.eta = ideal.eta;
      break;
    case ErrorSource::Delta:
      e.delta = ideal.delta;
      break;
    case ErrorSource::All:
      e = ideal;
      break;
  }
  return e;
}

AblationOutcome ablate_source(const DensityMatrix& rho_exp, const ErrorParams& fitted,
                              const RealVector16& sigma, ErrorSource source,
                              const AblationOptions& options) {
  Simulator sim(options.simulation);
  DensityMatrix full = sim(fitted, sigma);
  DensityMatrix reduced = sim(reset_source(fitted, source), sigma);
  Matrix4c delta_rho = full.matrix() - reduced.matrix();
  Matrix4c shifted = rho_exp.matrix() - delta_rho;
  DensityMatrix predicted((shifted + shifted.adjoint()) * 0.5);
  MleResult mle = mle_project(predicted, options.mle);
  AblationEntry entry{source, fidelity_pure(bell_state(), mle.rho), trace_norm(delta_rho)};
  return {predicted, mle.rho, entry};
}

AblationReport ablation_report(const DensityMatrix& rho_exp, const ErrorParams& fitted,
                               const RealVector16& sigma, const AblationOptions& options) {
  AblationReport report;
  report.baseline_fidelity = fidelity_pure(bell_state(), mle_project(rho_exp, options.mle).rho);
  for (ErrorSource s : kAllSources) {
    report.entries.push_back(ablate_source(rho_exp, fitted, sigma, s, options).entry);
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const AblationEntry& a, const AblationEntry& b) {
                     return a.predicted_fidelity > b.predicted_fidelity;
                   });
  return report;
}

ErrorSource AblationReport::top_source() const {
  for (const auto& e : entries) {
    if (e.source != ErrorSource::All) return e.source;
  }
  throw DomainError("ablation report has no individual sources");
}

}  // namespace mbqeq
