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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "mbqeq/ablation.hpp"
#include "mbqeq/accidentals.hpp"
#include "mbqeq/errors.hpp"
#include "mbqeq/fit.hpp"
#include "mbqeq/io.hpp"
#include "mbqeq/mle.hpp"
#include "mbqeq/tomography.hpp"

namespace fs = std::filesystem;
using mbqeq::io::Json;

namespace {

struct CommonArgs {
  std::string input;
  std::string output;
  std::string config;
  std::optional<std::uint64_t> seed;
  bool emit_plots = false;
};

/// Either raw counts or a density matrix with optional per-basis sigma.
struct Input {
  std::optional<mbqeq::CoincidenceRecord> record;
  mbqeq::DensityMatrix rho = mbqeq::DensityMatrix::maximally_mixed();
  mbqeq::RealVector16 sigma{};
};

Input load_input(const std::string& path) {
  if (!fs::exists(path)) throw mbqeq::ParseError("input file '" + path + "' does not exist");
  Input in;
  if (fs::path(path).extension() == ".csv") {
    in.record = mbqeq::io::load_counts(path);
  } else {
    const Json doc = mbqeq::io::read_json_file(path);
    if (doc.is_object() && doc.contains("counts")) {
      try {
        in.record = mbqeq::io::record_from_json(doc);
      } catch (const mbqeq::ParseError& e) {
        throw mbqeq::ParseError(path + ": " + e.what());
      }
    } else {
      try {
        in.rho = mbqeq::io::density_from_json(doc);
      } catch (const mbqeq::ParseError& e) {
        throw mbqeq::ParseError(path + ": " + e.what());
      }
      if (auto it = doc.find("sigma"); it != doc.end()) {
        if (!it->is_array() || it->size() != mbqeq::kNumBases)
          throw mbqeq::ParseError(path + ": field 'sigma' must be an array of 16 numbers");
        for (int nu = 0; nu < mbqeq::kNumBases; ++nu) in.sigma[nu] = (*it)[nu].get<double>();
      }
      return in;
    }
  }
  const mbqeq::ProbVector probs = mbqeq::normalize_counts(*in.record);
  in.rho = mbqeq::linear_qst(probs);
  in.sigma = probs.sigma;
  return in;
}

mbqeq::io::RunConfig load_config(const CommonArgs& args) {
  mbqeq::io::RunConfig cfg;
  if (!args.config.empty()) {
    if (!fs::exists(args.config))
      throw mbqeq::ParseError("config file '" + args.config + "' does not exist");
    try {
      cfg = mbqeq::io::config_from_json(mbqeq::io::read_json_file(args.config));
    } catch (const mbqeq::ParseError& e) {
      throw mbqeq::ParseError(args.config + ": " + e.what());
    }
  }
  if (args.seed) cfg.seed = args.seed;
  return cfg;
}

std::uint64_t require_seed(const mbqeq::io::RunConfig& cfg, const char* command) {
  if (!cfg.seed) throw mbqeq::ParseError(std::string(command) + " requires --seed or a config seed");
  return *cfg.seed;
}

void emit(const CommonArgs& args, const Json& doc) {
  if (args.output.empty() || args.output == "-") {
    std::cout << doc.dump(2) << "\n";
  } else {
    mbqeq::io::write_json_file(args.output, doc);
  }
}

/// CSV plot data lands beside the output as <stem>.<kind>.csv.
void emit_plot(const CommonArgs& args, const std::string& kind, const std::string& csv) {
  if (!args.emit_plots) return;
  if (args.output.empty() || args.output == "-")
    throw mbqeq::ParseError("--emit-plots requires --output");
  fs::path p(args.output);
  p.replace_extension("." + kind + ".csv");
  mbqeq::io::write_text_file(p, csv);
}

mbqeq::FitOptions fit_options(const mbqeq::io::RunConfig& cfg) {
  mbqeq::FitOptions opts;
  opts.powell = cfg.powell;
  opts.simulation.geometry = cfg.geometry;
  opts.skip_stage2 = cfg.skip_stage2;
  return opts;
}

mbqeq::DetectorContext detector_for(const Input& in, const mbqeq::io::RunConfig& cfg) {
  return in.record ? mbqeq::DetectorContext::from_record(*in.record) : cfg.detector;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int run_reconstruct(const CommonArgs& args) {
  const auto cfg = load_config(args);
  const mbqeq::CoincidenceRecord rec = mbqeq::io::load_counts(args.input);
  const mbqeq::DensityMatrix rho = mbqeq::linear_qst(mbqeq::normalize_counts(rec));
  Json doc = mbqeq::io::density_json(rho);
  doc["fidelity"] = mbqeq::io::round12(mbqeq::fidelity_pure(mbqeq::bell_state(), rho));
  doc["eigen"] = mbqeq::io::eigen_json(mbqeq::eigendecompose(rho));
  std::vector<std::string> warnings;
  const Json acc = mbqeq::io::accidentals_json(rec, mbqeq::DetectorContext::from_record(rec),
                                               cfg.single_counts, &warnings);
  print_warnings(warnings);
  if (!args.output.empty() && args.output != "-") {
    fs::path side(args.output);
    side.replace_extension(".accidentals.json");
    mbqeq::io::write_json_file(side, acc);
  } else {
    doc["accidentals"] = acc;
  }
  emit(args, doc);
  emit_plot(args, "matrix", mbqeq::io::matrix_csv(rho));
  return 0;
}

int run_quantify(const CommonArgs& args, bool timing) {
  const auto cfg = load_config(args);
  const Input in = load_input(args.input);
  const auto opts = fit_options(cfg);
  const auto start = std::chrono::steady_clock::now();
  const mbqeq::OptimizationResult result = mbqeq::fit_error_model(in.rho, in.sigma, opts);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  mbqeq::Simulator sim(opts.simulation);
  const mbqeq::DensityMatrix rho_sim = sim(result.params, in.sigma);
  Json doc = mbqeq::io::fit_report_json(result, in.rho, rho_sim);
  if (in.record) {
    std::vector<std::string> warnings;
    doc["accidentals"] = mbqeq::io::accidentals_json(*in.record, detector_for(in, cfg),
                                                     cfg.single_counts, &warnings);
    print_warnings(warnings);
  }
  if (timing) doc["wall_time_s"] = mbqeq::io::round12(wall);
  std::cerr << "fit: trace distance " << result.initial_cost << " -> " << result.final_cost
            << " in " << wall << " s\n";
  if (!result.converged) std::cerr << "warning: optimizer stopped before convergence\n";
  emit(args, doc);
  emit_plot(args, "residual",
            mbqeq::io::matrix_csv(mbqeq::DensityMatrix(in.rho.matrix() - rho_sim.matrix())));
  return 0;
}

int run_synth(const CommonArgs& args, std::int64_t total) {
  const auto cfg = load_config(args);
  const std::uint64_t seed = require_seed(cfg, "synth");
  if (!fs::exists(args.input)) throw mbqeq::ParseError("input file '" + args.input + "' does not exist");
  const mbqeq::ErrorParams params = mbqeq::io::params_from_json(mbqeq::io::read_json_file(args.input));
  mbqeq::SimulationOptions sim;
  sim.geometry = cfg.geometry;
  const auto rec = mbqeq::io::synthesize_counts(params, total, seed, cfg.detector, sim);
  emit(args, mbqeq::io::record_json(rec));
  return 0;
}

int run_ablate(const CommonArgs& args, const std::string& params_path) {
  const auto cfg = load_config(args);
  const Input in = load_input(args.input);
  if (!fs::exists(params_path))
    throw mbqeq::ParseError("params file '" + params_path + "' does not exist");
  const mbqeq::ErrorParams fitted = mbqeq::io::params_from_json(mbqeq::io::read_json_file(params_path));
  mbqeq::AblationOptions opts;
  opts.simulation.geometry = cfg.geometry;
  const mbqeq::AblationReport report = mbqeq::ablation_report(in.rho, fitted, in.sigma, opts);
  emit(args, mbqeq::io::ablation_json(report));
  emit_plot(args, "ablation", mbqeq::io::ablation_csv(report));
  return 0;
}

int run_stability(const CommonArgs& args, std::optional<int> runs) {
  auto cfg = load_config(args);
  const std::uint64_t seed = require_seed(cfg, "stability");
  if (runs) cfg.n_runs = *runs;
  if (cfg.n_runs < 2) throw mbqeq::ParseError("stability needs at least 2 runs");
  const Input in = load_input(args.input);
  const mbqeq::StabilityReport report = mbqeq::stability_scan(
      in.rho, in.sigma, fit_options(cfg), cfg.n_runs, seed, mbqeq::threads_from_environment());
  emit(args, mbqeq::io::stability_json(report));
  emit_plot(args, "stability", mbqeq::io::stability_csv(report));
  return 0;
}

int run_mle(const CommonArgs& args) {
  load_config(args);
  const Input in = load_input(args.input);
  const mbqeq::MleResult res =
      in.record ? mbqeq::mle_fit_counts(*in.record) : mbqeq::mle_project(in.rho);
  Json doc = mbqeq::io::density_json(res.rho);
  doc["fidelity_before"] = mbqeq::io::round12(mbqeq::fidelity_pure(mbqeq::bell_state(), in.rho));
  doc["fidelity"] = mbqeq::io::round12(mbqeq::fidelity_pure(mbqeq::bell_state(), res.rho));
  doc["min_eigenvalue_before"] = mbqeq::io::round12(mbqeq::min_eigenvalue(in.rho));
  doc["min_eigenvalue"] = mbqeq::io::round12(mbqeq::min_eigenvalue(res.rho));
  doc["log_likelihood"] = mbqeq::io::round12(res.likelihood);
  doc["n_evals"] = res.n_evals;
  emit(args, doc);
  emit_plot(args, "matrix", mbqeq::io::matrix_csv(res.rho));
  return 0;
}

int run_accidentals(const CommonArgs& args) {
  const auto cfg = load_config(args);
  const mbqeq::CoincidenceRecord rec = mbqeq::io::load_counts(args.input);
  std::vector<std::string> warnings;
  const Json doc = mbqeq::io::accidentals_json(rec, mbqeq::DetectorContext::from_record(rec),
                                               cfg.single_counts, &warnings);
  print_warnings(warnings);
  emit(args, doc);
  return 0;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_output = false) {
  cmd->add_option("--input,-i", args.input, "Input file")->required();
  auto* out = cmd->add_option("--output,-o", args.output, "Output JSON file (stdout if omitted)");
  if (needs_output) out->required();
  cmd->add_option("--config,-c", args.config, "Config JSON file");
  cmd->add_option("--seed", args.seed, "PRNG seed");
  cmd->add_flag("--emit-plots", args.emit_plots, "Write CSV plot data beside the output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-based quantum error quantification for time-bin entangled photons"};
  app.require_subcommand(1);
  CommonArgs args;

  auto* reconstruct = app.add_subcommand("reconstruct", "Linear tomography from a count file");
  add_common(reconstruct, args);

  bool timing = false;
  auto* quantify = app.add_subcommand("quantify", "Fit the error model to counts or a matrix");
  add_common(quantify, args);
  quantify->add_flag("--timing", timing, "Include wall time in the report");

  std::int64_t total = 0;
  auto* synth = app.add_subcommand("synth", "Draw synthetic counts from error parameters");
  add_common(synth, args);
  synth->add_option("--total", total, "Expected time-bin coincidence total")
      ->required()
      ->check(CLI::PositiveNumber);

  std::string params_path;
  auto* ablate = app.add_subcommand("ablate", "Rank error sources by predicted fidelity gain");
  add_common(ablate, args);
  ablate->add_option("--params", params_path, "Fitted parameters or fit report")->required();

  std::optional<int> runs;
  auto* stability = app.add_subcommand("stability", "Repeat the fit from random starting points");
  add_common(stability, args);
  stability->add_option("--runs", runs, "Number of restarts (default 100)");

  auto* mle = app.add_subcommand("mle", "Maximum-likelihood physical state");
  add_common(mle, args);

  auto* accidentals = app.add_subcommand("accidentals", "Visibility, mu and eta from counts");
  add_common(accidentals, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*reconstruct) return run_reconstruct(args);
    if (*quantify) return run_quantify(args, timing);
    if (*synth) return run_synth(args, total);
    if (*ablate) return run_ablate(args, params_path);
    if (*stability) return run_stability(args, runs);
    if (*mle) return run_mle(args);
    if (*accidentals) return run_accidentals(args);
  } catch (const mbqeq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
