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

#include "mbqeq/wavepacket.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "mbqeq/errors.hpp"

namespace mbqeq {

namespace {

constexpr double kAlphaNormTolerance = 1e-12;
constexpr double kMinCapturedProbability = 0.5;
// Envelope values below exp(-60) of the unit peak are dropped.
constexpr double kEnvelopeCutoff = -60.0;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Unnormalized k-space amplitude for the given alpha.
WavepacketGrid kspace_raw(const WavepacketConfig& cfg, const std::array<Complex, 4>& alpha) {
  const int n = cfg.n_grid;
  const double c = std::cos(cfg.tilt);
  const double s = std::sin(cfg.tilt);
  const double ss2 = cfg.sigma_short * cfg.sigma_short;
  const double sl2 = cfg.sigma_long * cfg.sigma_long;
  const std::array<double, 2> centers = {cfg.xbar_1, cfg.xbar_2};

  std::vector<double> k(n);
  for (int m = 0; m < n; ++m) {
    k[m] = grid_wavenumber(m, n, cfg.length);
  }
  // Per-axis center phases exp(-i k xbar_i).
  std::array<std::vector<Complex>, 2> phase;
  for (int i = 0; i < 2; ++i) {
    phase[i].resize(n);
    for (int m = 0; m < n; ++m) {
      phase[i][m] = std::polar(1.0, -k[m] * centers[i]);
    }
  }

  WavepacketGrid g{n, GridSpace::K, std::vector<Complex>(static_cast<std::size_t>(n) * n)};
  for (int a = 0; a < n; ++a) {
    double dka = k[a] - cfg.kbar_a;
    for (int b = 0; b < n; ++b) {
      double dkb = k[b] - cfg.kbar_b;
      double u = dka * c + dkb * s;
      double v = -dka * s + dkb * c;
      const double exponent = -0.5 * (ss2 * u * u + sl2 * v * v);
      if (exponent < kEnvelopeCutoff) {
        g.at(a, b) = 0.0;
        continue;
      }
      double envelope = std::exp(exponent);
      Complex sum = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          Complex w = alpha[2 * i + j];
          if (w != Complex(0.0)) {
            sum += w * phase[i][a] * phase[j][b];
          }
        }
      }
      g.at(a, b) = envelope * sum;
    }
  }
  return g;
}

WavepacketGrid symmetrize_raw(const WavepacketGrid& grid) {
  WavepacketGrid out{grid.n, grid.space, std::vector<Complex>(grid.amplitudes.size())};
  for (int a = 0; a < grid.n; ++a) {
    for (int b = 0; b < grid.n; ++b) {
      out.at(a, b) = grid.at(a, b) + grid.at(b, a);
    }
  }
  return out;
}

// One backward plan per grid size. Planning is serialized; execution on new
// arrays is thread safe.
fftw_plan backward_plan(int n) {
  static std::mutex mutex;
  static std::map<int, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  std::vector<Complex> scratch(static_cast<std::size_t>(n) * n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan =
      fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan == nullptr) throw NumericalError("FFT planning failed");
  plans.emplace(n, plan);
  return plan;
}

WavepacketGrid real_space_raw(const WavepacketGrid& grid) {
  const int n = grid.n;
  WavepacketGrid out{n, GridSpace::Real, std::vector<Complex>(grid.amplitudes.size())};
  auto* in = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(grid.amplitudes.data()));
  fftw_execute_dft(backward_plan(n), in, reinterpret_cast<fftw_complex*>(out.amplitudes.data()));
  // FFTW is unnormalized; 1/n over both axes makes the transform unitary.
  const double rescale = 1.0 / static_cast<double>(n);
  for (auto& v : out.amplitudes) v *= rescale;
  return out;
}

void normalize_in_place(WavepacketGrid& grid) {
  double total = grid.total_probability();
  if (!(total > 0.0)) {
    throw DomainError("wavepacket grid has zero norm");
  }
  double scale = 1.0 / std::sqrt(total);
  for (auto& v : grid.amplitudes) v *= scale;
}

// <y | x>; real arithmetic avoids the checked complex multiply.
Complex inner(const std::vector<Complex>& y, const std::vector<Complex>& x) {
  const double* xr = reinterpret_cast<const double*>(x.data());
  const double* yc = reinterpret_cast<const double*>(y.data());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t t = 0; t < 2 * x.size(); t += 2) {
    re += yc[t] * xr[t] + yc[t + 1] * xr[t + 1];
    im += yc[t] * xr[t + 1] - yc[t + 1] * xr[t];
  }
  return {re, im};
}

// result(ij, kl) = <y_kl | x_ij>.
Matrix4c cross_overlap(const TimeBinComponents& x, const TimeBinComponents& y) {
  Matrix4c g;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g(r, c) = inner(y.phi[c], x.phi[r]);
  return g;
}

Matrix4c self_overlap(const TimeBinComponents& x) {
  Matrix4c g;
  for (int r = 0; r < 4; ++r) {
    for (int c = r; c < 4; ++c) {
      g(r, c) = inner(x.phi[c], x.phi[r]);
      g(c, r) = std::conj(g(r, c));
    }
  }
  return g;
}

EffectiveState state_from_gram(const Matrix4c& gram) {
  double captured = gram.trace().real();
  if (!(captured >= kMinCapturedProbability)) {
    throw DomainError("wavepacket leaks too much probability outside the time-bin quadrants");
  }
  Matrix4c h = (gram + gram.adjoint()) * 0.5;
  return {h, DensityMatrix(h / captured)};
}

std::array<Complex, 4> source_alpha(double p, double theta_22) {
  return {Complex(std::sqrt(p)), 0.0, 0.0, std::polar(std::sqrt(1.0 - p), theta_22)};
}

}  // namespace

WavepacketConfig WavepacketConfig::defaults(double r_corr, double p, double theta_22) {
  WavepacketConfig cfg;
  cfg.n_grid = 128;
  cfg.length = 5.0 * std::numbers::pi;
  cfg.kbar_a = 10.0;
  cfg.kbar_b = (1547.1 / 1555.1) * cfg.kbar_a;
  cfg.xbar_1 = 3.0 * cfg.length / 4.0;
  cfg.xbar_2 = cfg.length / 4.0;
  cfg.sigma_short = (50.0 / 500.0) * std::abs(cfg.xbar_1 - cfg.xbar_2);
  cfg.tilt = -std::numbers::pi / 4.0;
  return cfg.with_source(r_corr, p, theta_22);
}

WavepacketConfig WavepacketConfig::with_source(double r_corr, double p, double theta_22) const {
  WavepacketConfig cfg = *this;
  cfg.sigma_long = r_corr * cfg.sigma_short;
  cfg.alpha = source_alpha(p, theta_22);
  return cfg;
}

void WavepacketConfig::validate() const {
  if (!is_power_of_two(n_grid) || n_grid < 4) {
    throw DomainError("wavepacket grid size must be a power of two >= 4");
  }
  if (!(length > 0.0)) {
    throw DomainError("wavepacket length must be positive");
  }
  if (!(sigma_short > 0.0) || !(sigma_long >= sigma_short)) {
    throw DomainError("wavepacket widths must satisfy sigma_long >= sigma_short > 0");
  }
  double norm = 0.0;
  for (const auto& a : alpha) norm += std::norm(a);
  if (std::abs(norm - 1.0) > kAlphaNormTolerance) {
    throw DomainError("time-bin amplitudes alpha_ij must have unit total weight");
  }
}

double WavepacketGrid::total_probability() const {
  double total = 0.0;
  for (const auto& v : amplitudes) total += std::norm(v);
  return total;
}

double grid_wavenumber(int m, int n, double length) {
  int signed_m = m < n / 2 ? m : m - n;
  return 2.0 * std::numbers::pi * signed_m / length;
}

WavepacketGrid build_kspace(const WavepacketConfig& cfg) {
  cfg.validate();
  WavepacketGrid g = kspace_raw(cfg, cfg.alpha);
  normalize_in_place(g);
  return g;
}

WavepacketGrid symmetrize(const WavepacketGrid& grid) {
  WavepacketGrid out = symmetrize_raw(grid);
  normalize_in_place(out);
  return out;
}

WavepacketGrid to_real_space(const WavepacketGrid& grid) {
  if (grid.space != GridSpace::K) {
    throw DomainError("to_real_space expects a k-space grid");
  }
  return real_space_raw(grid);
}

TimeBinComponents extract_components(const WavepacketGrid& grid) {
  if (grid.space != GridSpace::Real) {
    throw DomainError("extract_components expects a real-space grid");
  }
  const int half = grid.n / 2;
  TimeBinComponents out;
  out.half = half;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      // Time bin 1 (early) sits in the upper half of the axis.
      int row0 = i == 0 ? half : 0;
      int col0 = j == 0 ? half : 0;
      auto& v = out.phi[2 * i + j];
      v.resize(static_cast<std::size_t>(half) * half);
      for (int n = 0; n < half; ++n) {
        for (int m = 0; m < half; ++m) {
          v[static_cast<std::size_t>(n) * half + m] = grid.at(row0 + n, col0 + m);
        }
      }
    }
  }
  return out;
}

EffectiveState effective_qubit_state(const TimeBinComponents& components) {
  return state_from_gram(self_overlap(components));
}

EffectiveState simulate_wavepacket(const WavepacketConfig& cfg) {
  return effective_qubit_state(extract_components(to_real_space(symmetrize(build_kspace(cfg)))));
}

WavepacketBasis::WavepacketBasis(const WavepacketConfig& geometry) : r_corr_(geometry.r_corr()) {
  WavepacketConfig cfg = geometry;
  cfg.alpha = {1.0, 0.0, 0.0, 0.0};
  cfg.validate();
  const TimeBinComponents first =
      extract_components(real_space_raw(symmetrize_raw(kspace_raw(cfg, {1.0, 0.0, 0.0, 0.0}))));
  // Centers exactly L/2 apart make the alpha_22 packet a circular half-box
  // shift, whose quadrant q is quadrant 3 - q of the first packet.
  const double offset = std::abs(cfg.xbar_1 - cfg.xbar_2) - 0.5 * cfg.length;
  if (std::abs(offset) <= 1e-12 * cfg.length) {
    const Matrix4c g = self_overlap(first);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        overlaps_[0][0](r, c) = g(r, c);
        overlaps_[0][1](r, c) = g(r, 3 - c);
        overlaps_[1][0](r, c) = g(3 - r, c);
        overlaps_[1][1](r, c) = g(3 - r, 3 - c);
      }
    }
    return;
  }
  const TimeBinComponents second =
      extract_components(real_space_raw(symmetrize_raw(kspace_raw(cfg, {0.0, 0.0, 0.0, 1.0}))));
  overlaps_[0][0] = self_overlap(first);
  overlaps_[0][1] = cross_overlap(first, second);
  overlaps_[1][0] = cross_overlap(second, first);
  overlaps_[1][1] = self_overlap(second);
}

EffectiveState WavepacketBasis::state(double p, double theta_22) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("time-bin weight p must lie in [0, 1]");
  }
  std::array<Complex, 4> full = source_alpha(p, theta_22);
  std::array<Complex, 2> alpha = {full[0], full[3]};
  Matrix4c g = Matrix4c::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      g += overlaps_[a][b] * (alpha[a] * std::conj(alpha[b]));
    }
  }
  double total = g.trace().real();
  if (!(total > 0.0)) {
    throw DomainError("wavepacket basis produced a zero-norm state");
  }
  return state_from_gram(g / total);
}

}  // namespace mbqeq
