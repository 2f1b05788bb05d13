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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mbqeq/ablation.hpp"
#include "mbqeq/accidentals.hpp"
#include "mbqeq/error_model.hpp"
#include "mbqeq/fit.hpp"
#include "mbqeq/quantum_core.hpp"
#include "mbqeq/tomography.hpp"
#include "mbqeq/wavepacket.hpp"

namespace mbqeq::io {

/// Insertion-ordered so emitted documents keep a fixed key order.
using Json = nlohmann::ordered_json;

/// Rounds to 12 significant digits; every float written goes through this.
double round12(double v);

Json read_json_file(const std::filesystem::path& path);
/// Two-space indented dump with trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Density matrices: {"rho": 4x4 nested [re, im] pairs, row-major}.
Json matrix_json(const Matrix4c& m);
Matrix4c matrix_from_json(const Json& j, std::string_view field);
Json density_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& doc);

Json eigen_json(const EigenReport& report);

// Count files: {"order": [16 labels], "counts": [16 ints], "alpha": [a, b],
// "dark": [a, b], "rep_rate_hz": f, "dead_time_s": t}.
Json record_json(const CoincidenceRecord& rec);
CoincidenceRecord record_from_json(const Json& doc);
/// Two-column `label,count` text (an optional header row is skipped) plus
/// the detector metadata keys of the JSON format.
CoincidenceRecord record_from_csv(std::string_view text, const Json& metadata);
/// Dispatches on extension. A .csv file reads its metadata from the sidecar
/// `<stem>.meta.json` next to it.
CoincidenceRecord load_counts(const std::filesystem::path& path);

// Error parameters as flat JSON with the ErrorParams field names.
Json params_json(const ErrorParams& params);
ErrorParams params_from_json(const Json& doc);
Json net_phase_json(const NetPhaseReport& report);

/// Optimizer and pipeline settings read from a config document:
/// {"ftol", "xtol", "max_iter", "max_evals", "n_runs", "seed", "skip_stage2",
///  "wavepacket": {...}, "detector": {...}, "single_counts": [[mu, rate], ...]}.
struct RunConfig {
  PowellOptions powell;
  int n_runs = 100;
  std::optional<std::uint64_t> seed;
  bool skip_stage2 = false;
  WavepacketConfig geometry = WavepacketConfig::defaults();
  DetectorContext detector;
  std::vector<std::pair<double, double>> single_counts;
};

RunConfig config_from_json(const Json& doc);
Json config_json(const RunConfig& cfg);

Json wavepacket_json(const WavepacketConfig& cfg);
WavepacketConfig wavepacket_from_json(const Json& doc, WavepacketConfig base);
/// {"space": "k" | "real", "n": N, "magnitude": N x N}.
Json grid_json(const WavepacketGrid& grid);

Json trajectory_json(const std::vector<TrajectoryPoint>& trajectory);

/// Fit report: before/after trace distances, parameters, net phases,
/// trajectory and residual rho_exp - rho_sim.
Json fit_report_json(const OptimizationResult& result, const DensityMatrix& rho_exp,
                     const DensityMatrix& rho_sim);
Json stability_json(const StabilityReport& report);
Json ablation_json(const AblationReport& report);

/// {"v_prime", "mu", "eta_exp", "xi_fit"}; xi_fit is null without points.
Json accidentals_json(const CoincidenceRecord& rec, const DetectorContext& ctx,
                      const std::vector<std::pair<double, double>>& single_counts,
                      std::vector<std::string>* warnings = nullptr);

// Plot data (CSV). Rendering is left to external tools.
std::string matrix_csv(const DensityMatrix& rho);
std::string ablation_csv(const AblationReport& report);
std::string stability_csv(const StabilityReport& report);

/// Synthetic experiment: error-model probabilities with delta = 0, expected
/// counts total * s'_nu (the four time-bin means sum to total), one Poisson
/// draw per basis in canonical order from SplitMix64(seed).
CoincidenceRecord synthesize_counts(const ErrorParams& params, std::int64_t total,
                                    std::uint64_t seed, const DetectorContext& ctx,
                                    const SimulationOptions& sim = {});

}  // namespace mbqeq::io
