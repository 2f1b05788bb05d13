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

#include "mbqeq/io.hpp"

#include <algorithm>
#include <initializer_list>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mbqeq/errors.hpp"
#include "mbqeq/rng.hpp"

namespace mbqeq::io {
namespace {

const Json& require(const Json& doc, std::string_view key) {
  if (!doc.is_object()) throw ParseError("expected a JSON object");
  auto it = doc.find(std::string(key));
  if (it == doc.end()) throw ParseError("missing field '" + std::string(key) + "'");
  return *it;
}

double get_number(const Json& j, std::string_view field) {
  if (!j.is_number()) throw ParseError("field '" + std::string(field) + "' must be a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError("field '" + std::string(field) + "' is not finite");
  return v;
}

double number_field(const Json& doc, std::string_view key) {
  return get_number(require(doc, key), key);
}

void reject_unknown(const Json& doc, std::initializer_list<std::string_view> known,
                    std::string_view context) {
  for (const auto& item : doc.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw ParseError("unknown " + std::string(context) + " field '" + item.key() + "'");
  }
}

double optional_number(const Json& doc, std::string_view key, double fallback) {
  auto it = doc.find(std::string(key));
  return it == doc.end() ? fallback : get_number(*it, key);
}

std::pair<double, double> number_pair(const Json& doc, std::string_view key) {
  const Json& j = require(doc, key);
  if (!j.is_array() || j.size() != 2)
    throw ParseError("field '" + std::string(key) + "' must be a two-element array");
  return {get_number(j[0], key), get_number(j[1], key)};
}

Json num(double v) { return round12(v); }

Json real_array(const RealVector16& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", round12(v));
  return buf;
}

}  // namespace

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return std::strtod(buf, nullptr);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ParseError("write failed for '" + path.string() + "'");
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

Json matrix_json(const Matrix4c& m) {
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 4; ++j) row.push_back(Json::array({num(m(i, j).real()), num(m(i, j).imag())}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix4c matrix_from_json(const Json& j, std::string_view field) {
  const std::string f(field);
  if (!j.is_array() || j.size() != 4) throw ParseError("field '" + f + "' must be a 4x4 array");
  Matrix4c m;
  for (int i = 0; i < 4; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || row.size() != 4)
      throw ParseError("field '" + f + "' row " + std::to_string(i) + " must have 4 entries");
    for (int k = 0; k < 4; ++k) {
      const Json& e = row[k];
      const std::string where = f + "[" + std::to_string(i) + "][" + std::to_string(k) + "]";
      if (e.is_number()) {
        m(i, k) = Complex(get_number(e, where), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(i, k) = Complex(get_number(e[0], where), get_number(e[1], where));
      } else {
        throw ParseError("field '" + where + "' must be [re, im]");
      }
    }
  }
  return m;
}

Json density_json(const DensityMatrix& rho) {
  Json doc;
  doc["rho"] = matrix_json(rho.matrix());
  return doc;
}

DensityMatrix density_from_json(const Json& doc) {
  Matrix4c m = matrix_from_json(require(doc, "rho"), "rho");
  try {
    return DensityMatrix(m);
  } catch (const ValidationError& e) {
    throw ParseError(std::string("field 'rho': ") + e.what());
  }
}

Json eigen_json(const EigenReport& report) {
  Json doc;
  Json values = Json::array();
  for (double v : report.values) values.push_back(num(v));
  doc["values"] = std::move(values);
  Json vectors = Json::array();
  for (const Vector4c& v : report.vectors) {
    Json vec = Json::array();
    for (int i = 0; i < 4; ++i) vec.push_back(Json::array({num(v(i).real()), num(v(i).imag())}));
    vectors.push_back(std::move(vec));
  }
  doc["vectors"] = std::move(vectors);
  return doc;
}

Json record_json(const CoincidenceRecord& rec) {
  Json doc;
  Json order = Json::array();
  Json counts = Json::array();
  for (int nu = 0; nu < kNumBases; ++nu) {
    order.push_back(std::string(kBasisLabels[nu]));
    counts.push_back(rec.counts[nu]);
  }
  doc["order"] = std::move(order);
  doc["counts"] = std::move(counts);
  doc["alpha"] = Json::array({num(rec.alpha_a), num(rec.alpha_b)});
  doc["dark"] = Json::array({num(rec.dark_a), num(rec.dark_b)});
  doc["rep_rate_hz"] = num(rec.rep_rate);
  doc["dead_time_s"] = num(rec.dead_time);
  return doc;
}

namespace {

void read_metadata(const Json& doc, CoincidenceRecord& rec) {
  std::tie(rec.alpha_a, rec.alpha_b) = number_pair(doc, "alpha");
  std::tie(rec.dark_a, rec.dark_b) = number_pair(doc, "dark");
  rec.rep_rate = number_field(doc, "rep_rate_hz");
  rec.dead_time = number_field(doc, "dead_time_s");
}

std::int64_t count_value(const Json& j, std::string_view label) {
  if (!j.is_number_integer())
    throw ParseError("count for basis '" + std::string(label) + "' must be an integer");
  return j.get<std::int64_t>();
}

void finish_record(CoincidenceRecord& rec, const std::array<bool, kNumBases>& seen) {
  for (int nu = 0; nu < kNumBases; ++nu)
    if (!seen[nu]) throw ParseError("missing basis label '" + std::string(kBasisLabels[nu]) + "'");
  rec.validate();
}

}  // namespace

CoincidenceRecord record_from_json(const Json& doc) {
  const Json& order = require(doc, "order");
  const Json& counts = require(doc, "counts");
  if (!order.is_array() || !counts.is_array() || order.size() != counts.size())
    throw ParseError("fields 'order' and 'counts' must be arrays of equal length");
  CoincidenceRecord rec;
  std::array<bool, kNumBases> seen{};
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!order[i].is_string()) throw ParseError("order[" + std::to_string(i) + "] must be a string");
    const std::string label = order[i].get<std::string>();
    const int nu = basis_index(label);
    if (nu < 0) throw ParseError("unknown basis label '" + label + "'");
    if (seen[nu]) throw ParseError("duplicate basis label '" + label + "'");
    seen[nu] = true;
    rec.counts[nu] = count_value(counts[i], label);
  }
  read_metadata(doc, rec);
  finish_record(rec, seen);
  return rec;
}

CoincidenceRecord record_from_csv(std::string_view text, const Json& metadata) {
  CoincidenceRecord rec;
  std::array<bool, kNumBases> seen{};
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    const std::string where = "line " + std::to_string(line_no);
    if (comma == std::string::npos) throw ParseError(where + ": expected 'label,count'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\"");
      const auto e = s.find_last_not_of(" \t\"");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string label = trim(line.substr(0, comma));
    const std::string value = trim(line.substr(comma + 1));
    const int nu = basis_index(label);
    if (nu < 0) {
      if (line_no == 1) continue;  // header row
      throw ParseError(where + ": unknown basis label '" + label + "'");
    }
    if (seen[nu]) throw ParseError(where + ": duplicate basis label '" + label + "'");
    char* end = nullptr;
    const long long n = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || *end != '\0')
      throw ParseError(where + ": count for basis '" + label + "' is not an integer");
    rec.counts[nu] = n;
    seen[nu] = true;
  }
  read_metadata(metadata, rec);
  finish_record(rec, seen);
  return rec;
}

CoincidenceRecord load_counts(const std::filesystem::path& path) {
  if (path.extension() == ".csv") {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::filesystem::path meta = path;
    meta.replace_extension(".meta.json");
    try {
      return record_from_csv(ss.str(), read_json_file(meta));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
  }
  try {
    return record_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Json params_json(const ErrorParams& params) {
  Json doc;
  doc["r_corr"] = num(params.r_corr);
  doc["theta_22"] = num(params.theta_22);
  doc["p"] = num(params.p);
  doc["p_a"] = num(params.p_a);
  doc["p_b"] = num(params.p_b);
  doc["theta_plus_a"] = num(params.theta_plus_a);
  doc["theta_l_a"] = num(params.theta_l_a);
  doc["theta_plus_b"] = num(params.theta_plus_b);
  doc["theta_l_b"] = num(params.theta_l_b);
  doc["eta"] = num(params.eta);
  doc["delta"] = real_array(params.delta);
  return doc;
}

ErrorParams params_from_json(const Json& doc) {
  // Fit reports nest the parameters under "params".
  const Json& src = doc.contains("params") ? doc["params"] : doc;
  ErrorParams p;
  p.r_corr = optional_number(src, "r_corr", p.r_corr);
  p.theta_22 = optional_number(src, "theta_22", p.theta_22);
  p.p = optional_number(src, "p", p.p);
  p.p_a = optional_number(src, "p_a", p.p_a);
  p.p_b = optional_number(src, "p_b", p.p_b);
  p.theta_plus_a = optional_number(src, "theta_plus_a", p.theta_plus_a);
  p.theta_l_a = optional_number(src, "theta_l_a", p.theta_l_a);
  p.theta_plus_b = optional_number(src, "theta_plus_b", p.theta_plus_b);
  p.theta_l_b = optional_number(src, "theta_l_b", p.theta_l_b);
  p.eta = optional_number(src, "eta", p.eta);
  if (auto it = src.find("delta"); it != src.end()) {
    if (!it->is_array() || it->size() != kNumBases)
      throw ParseError("field 'delta' must be an array of 16 numbers");
    for (int nu = 0; nu < kNumBases; ++nu) p.delta[nu] = get_number((*it)[nu], "delta");
  }
  return p;
}

Json net_phase_json(const NetPhaseReport& report) {
  static constexpr std::array<const char*, 4> kKeys = {"plus_plus", "plus_l", "l_plus", "l_l"};
  const auto rad = report.radians();
  const auto deg = report.degrees();
  Json r, d;
  for (int k = 0; k < 4; ++k) {
    r[kKeys[k]] = num(rad[k]);
    d[kKeys[k]] = num(deg[k]);
  }
  Json doc;
  doc["radians"] = std::move(r);
  doc["degrees"] = std::move(d);
  return doc;
}

Json wavepacket_json(const WavepacketConfig& cfg) {
  Json doc;
  doc["n_grid"] = cfg.n_grid;
  doc["length"] = num(cfg.length);
  doc["kbar_a"] = num(cfg.kbar_a);
  doc["kbar_b"] = num(cfg.kbar_b);
  doc["xbar_1"] = num(cfg.xbar_1);
  doc["xbar_2"] = num(cfg.xbar_2);
  doc["sigma_short"] = num(cfg.sigma_short);
  doc["tilt"] = num(cfg.tilt);
  return doc;
}

WavepacketConfig wavepacket_from_json(const Json& doc, WavepacketConfig base) {
  if (!doc.is_object()) throw ParseError("field 'wavepacket' must be an object");
  reject_unknown(doc,
                 {"n_grid", "length", "kbar_a", "kbar_b", "xbar_1", "xbar_2", "sigma_short", "tilt"},
                 "wavepacket");
  const double r_corr = base.r_corr();
  if (auto it = doc.find("n_grid"); it != doc.end()) {
    if (!it->is_number_integer()) throw ParseError("field 'wavepacket.n_grid' must be an integer");
    base.n_grid = it->get<int>();
  }
  base.length = optional_number(doc, "length", base.length);
  base.kbar_a = optional_number(doc, "kbar_a", base.kbar_a);
  base.kbar_b = optional_number(doc, "kbar_b", base.kbar_b);
  base.xbar_1 = optional_number(doc, "xbar_1", base.xbar_1);
  base.xbar_2 = optional_number(doc, "xbar_2", base.xbar_2);
  base.sigma_short = optional_number(doc, "sigma_short", base.sigma_short);
  base.sigma_long = r_corr * base.sigma_short;
  base.tilt = optional_number(doc, "tilt", base.tilt);
  try {
    base.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("field 'wavepacket': ") + e.what());
  }
  return base;
}

RunConfig config_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  reject_unknown(doc,
                 {"ftol", "xtol", "max_iter", "max_evals", "n_runs", "seed", "skip_stage2",
                  "wavepacket", "detector", "single_counts"},
                 "config");
  RunConfig cfg;
  cfg.powell.ftol = optional_number(doc, "ftol", cfg.powell.ftol);
  cfg.powell.xtol = optional_number(doc, "xtol", cfg.powell.xtol);
  if (cfg.powell.ftol <= 0 || cfg.powell.xtol <= 0) throw ParseError("tolerances must be positive");
  auto int_field = [&](std::string_view key, long fallback, long min) {
    auto it = doc.find(std::string(key));
    if (it == doc.end()) return fallback;
    if (!it->is_number_integer() || it->get<long>() < min)
      throw ParseError("field '" + std::string(key) + "' must be an integer >= " + std::to_string(min));
    return it->get<long>();
  };
  cfg.powell.max_iter = static_cast<int>(int_field("max_iter", cfg.powell.max_iter, 1));
  cfg.powell.max_evals = int_field("max_evals", cfg.powell.max_evals, 0);
  cfg.n_runs = static_cast<int>(int_field("n_runs", cfg.n_runs, 2));
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw ParseError("field 'seed' must be a non-negative integer");
    cfg.seed = it->get<std::uint64_t>();
  }
  if (auto it = doc.find("skip_stage2"); it != doc.end()) {
    if (!it->is_boolean()) throw ParseError("field 'skip_stage2' must be a boolean");
    cfg.skip_stage2 = it->get<bool>();
  }
  if (auto it = doc.find("wavepacket"); it != doc.end())
    cfg.geometry = wavepacket_from_json(*it, cfg.geometry);
  if (auto it = doc.find("detector"); it != doc.end()) {
    const Json& d = *it;
    if (!d.is_object()) throw ParseError("field 'detector' must be an object");
    reject_unknown(d, {"alpha", "dark", "rep_rate_hz", "dead_time_s"}, "detector");
    if (d.contains("alpha")) std::tie(cfg.detector.alpha_a, cfg.detector.alpha_b) = number_pair(d, "alpha");
    if (d.contains("dark")) std::tie(cfg.detector.dark_a, cfg.detector.dark_b) = number_pair(d, "dark");
    cfg.detector.rep_rate = optional_number(d, "rep_rate_hz", cfg.detector.rep_rate);
    cfg.detector.dead_time = optional_number(d, "dead_time_s", cfg.detector.dead_time);
    try {
      cfg.detector.validate();
    } catch (const Error& e) {
      throw ParseError(std::string("field 'detector': ") + e.what());
    }
  }
  if (auto it = doc.find("single_counts"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("field 'single_counts' must be an array of [mu, rate]");
    for (const Json& pt : *it) {
      if (!pt.is_array() || pt.size() != 2)
        throw ParseError("field 'single_counts' entries must be [mu, rate]");
      cfg.single_counts.emplace_back(get_number(pt[0], "single_counts"),
                                     get_number(pt[1], "single_counts"));
    }
  }
  return cfg;
}

Json config_json(const RunConfig& cfg) {
  Json doc;
  doc["ftol"] = num(cfg.powell.ftol);
  doc["xtol"] = num(cfg.powell.xtol);
  doc["max_iter"] = cfg.powell.max_iter;
  doc["max_evals"] = cfg.powell.max_evals;
  doc["n_runs"] = cfg.n_runs;
  if (cfg.seed) doc["seed"] = *cfg.seed;
  doc["skip_stage2"] = cfg.skip_stage2;
  doc["wavepacket"] = wavepacket_json(cfg.geometry);
  const DetectorContext& d = cfg.detector;
  doc["detector"] = {{"alpha", Json::array({num(d.alpha_a), num(d.alpha_b)})},
                     {"dark", Json::array({num(d.dark_a), num(d.dark_b)})},
                     {"rep_rate_hz", num(d.rep_rate)},
                     {"dead_time_s", num(d.dead_time)}};
  Json points = Json::array();
  for (auto [mu, rate] : cfg.single_counts) points.push_back(Json::array({num(mu), num(rate)}));
  doc["single_counts"] = std::move(points);
  return doc;
}

Json grid_json(const WavepacketGrid& grid) {
  Json doc;
  doc["space"] = grid.space == GridSpace::K ? "k" : "real";
  doc["n"] = grid.n;
  Json rows = Json::array();
  for (int i = 0; i < grid.n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < grid.n; ++j) row.push_back(num(std::abs(grid.at(i, j))));
    rows.push_back(std::move(row));
  }
  doc["magnitude"] = std::move(rows);
  return doc;
}

Json trajectory_json(const std::vector<TrajectoryPoint>& trajectory) {
  Json arr = Json::array();
  for (const auto& pt : trajectory) arr.push_back(Json::array({pt.iteration, num(pt.cost)}));
  return arr;
}

Json fit_report_json(const OptimizationResult& result, const DensityMatrix& rho_exp,
                     const DensityMatrix& rho_sim) {
  Json doc;
  Json td;
  td["before"] = num(result.initial_cost);
  td["stage1"] = num(result.stage1_cost);
  td["after"] = num(result.final_cost);
  doc["trace_distance"] = std::move(td);
  doc["final_cost"] = num(result.final_cost);
  doc["converged"] = result.converged;
  doc["stage2_ran"] = result.stage2_ran;
  doc["n_evals"] = result.n_evals;
  doc["params"] = params_json(result.params);
  doc["net_phases"] = net_phase_json(net_phases(result.params));
  doc["fidelity_exp"] = num(fidelity_pure(bell_state(), rho_exp));
  doc["fidelity_sim"] = num(fidelity_pure(bell_state(), rho_sim));
  doc["residual"] = matrix_json(rho_exp.matrix() - rho_sim.matrix());
  doc["trajectory"] = trajectory_json(result.trajectory);
  return doc;
}

Json stability_json(const StabilityReport& report) {
  Json doc;
  doc["n_runs"] = report.n_runs;
  doc["seed"] = report.seed;
  Json stats = Json::array();
  for (const auto& s : report.statistics) {
    Json e;
    e["name"] = s.name;
    e["min"] = num(s.min);
    e["q1"] = num(s.q1);
    e["median"] = num(s.median);
    e["q3"] = num(s.q3);
    e["max"] = num(s.max);
    stats.push_back(std::move(e));
  }
  doc["statistics"] = std::move(stats);
  Json runs = Json::array();
  for (const auto& r : report.runs) {
    Json e;
    e["final_cost"] = num(r.final_cost);
    e["n_evals"] = r.n_evals;
    e["params"] = params_json(r.params);
    runs.push_back(std::move(e));
  }
  doc["runs"] = std::move(runs);
  return doc;
}

Json ablation_json(const AblationReport& report) {
  Json doc;
  doc["baseline_fidelity"] = num(report.baseline_fidelity);
  doc["top_source"] = std::string(source_name(report.top_source()));
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    Json j;
    j["source"] = std::string(source_name(e.source));
    j["predicted_fidelity"] = num(e.predicted_fidelity);
    j["gain"] = num(e.predicted_fidelity - report.baseline_fidelity);
    j["delta_rho_norm"] = num(e.delta_rho_norm);
    entries.push_back(std::move(j));
  }
  doc["entries"] = std::move(entries);
  return doc;
}

Json accidentals_json(const CoincidenceRecord& rec, const DetectorContext& ctx,
                      const std::vector<std::pair<double, double>>& single_counts,
                      std::vector<std::string>* warnings) {
  Json doc;
  const double v = visibility_from_counts(rec);
  doc["v_prime"] = num(v);
  if (v > 0.0 && v < 1.0) {
    doc["mu"] = num(estimate_mu(v, ctx, warnings));
  } else {
    // V' = 1 has no finite-mu preimage; V' = 0 none at all.
    doc["mu"] = nullptr;
    if (warnings) warnings->push_back("visibility outside (0, 1); mu not estimated");
  }
  doc["eta_exp"] = num(eta_from_visibility(v));
  if (single_counts.empty()) {
    doc["xi_fit"] = nullptr;
  } else {
    doc["xi_fit"] = num(fit_xi(single_counts, ctx));
  }
  return doc;
}

std::string matrix_csv(const DensityMatrix& rho) {
  std::string out = "row,col,re,im\n";
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      out += std::to_string(i) + "," + std::to_string(j) + "," + fmt12(rho(i, j).real()) + "," +
             fmt12(rho(i, j).imag()) + "\n";
    }
  return out;
}

std::string ablation_csv(const AblationReport& report) {
  std::string out = "source,predicted_fidelity,gain\n";
  out += "baseline," + fmt12(report.baseline_fidelity) + ",0\n";
  for (const auto& e : report.entries)
    out += std::string(source_name(e.source)) + "," + fmt12(e.predicted_fidelity) + "," +
           fmt12(e.predicted_fidelity - report.baseline_fidelity) + "\n";
  return out;
}

std::string stability_csv(const StabilityReport& report) {
  std::string out = "name,min,q1,median,q3,max\n";
  for (const auto& s : report.statistics)
    out += s.name + "," + fmt12(s.min) + "," + fmt12(s.q1) + "," + fmt12(s.median) + "," +
           fmt12(s.q3) + "," + fmt12(s.max) + "\n";
  return out;
}

CoincidenceRecord synthesize_counts(const ErrorParams& params, std::int64_t total,
                                    std::uint64_t seed, const DetectorContext& ctx,
                                    const SimulationOptions& sim) {
  if (total <= 0) throw DomainError("total_counts must be positive");
  ErrorParams p = params;
  p.delta = {};
  check_bounds(p, RealVector16{});
  ctx.validate();
  const DensityMatrix source = depolarize(source_density(p, sim), p.eta);
  const RealVector16 probs = measure_probs(source, build_projectors(basis_pairs(p.measurement_errors())));
  double time_bin = 0.0;
  for (int nu : kTimeBinBases) time_bin += probs[nu];
  if (!(time_bin > 0.0)) throw NumericalError("time-bin probabilities vanish");
  SplitMix64 rng(seed);
  CoincidenceRecord rec;
  for (int nu = 0; nu < kNumBases; ++nu) {
    const double mean = static_cast<double>(total) * std::max(probs[nu], 0.0) / time_bin;
    rec.counts[nu] = rng.poisson(mean);
  }
  rec.alpha_a = ctx.alpha_a;
  rec.alpha_b = ctx.alpha_b;
  rec.dark_a = ctx.dark_a;
  rec.dark_b = ctx.dark_b;
  rec.rep_rate = ctx.rep_rate;
  rec.dead_time = ctx.dead_time;
  return rec;
}

}  // namespace mbqeq::io
