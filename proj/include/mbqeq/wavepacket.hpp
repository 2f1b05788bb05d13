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
#include <vector>

#include "mbqeq/quantum_core.hpp"

namespace mbqeq {

/// Geometry and amplitudes of the two-photon Gaussian wavepacket on an
/// N x N grid of side L. Index order is (photon A, photon B).
struct WavepacketConfig {
  int n_grid = 128;
  double length = 0.0;
  double kbar_a = 0.0;
  double kbar_b = 0.0;
  double xbar_1 = 0.0;
  double xbar_2 = 0.0;
  double sigma_short = 0.0;
  double sigma_long = 0.0;
  double tilt = 0.0;
  /// alpha_11, alpha_12, alpha_21, alpha_22.
  std::array<Complex, 4> alpha{};

  /// Default geometry: N = 128, L = 5 pi, kbar_A = 10,
  /// kbar_B = (1547.1 / 1555.1) kbar_A, centers 3L/4 and L/4,
  /// sigma_short = |xbar_1 - xbar_2| / 10, sigma_long = r_corr sigma_short,
  /// tilt -pi/4; alpha_11 = sqrt(p), alpha_22 = exp(i theta22) sqrt(1 - p).
  static WavepacketConfig defaults(double r_corr = 1.0, double p = 0.5, double theta_22 = 0.0);

  /// Same geometry with the widths and amplitudes of a new source state.
  WavepacketConfig with_source(double r_corr, double p, double theta_22) const;

  double r_corr() const { return sigma_long / sigma_short; }

  /// Throws DomainError on a non power-of-two grid, bad widths or
  /// unnormalized alpha.
  void validate() const;
};

enum class GridSpace { K, Real };

struct WavepacketGrid {
  int n = 0;
  GridSpace space = GridSpace::K;
  /// Row-major n x n, element (i, j) at i * n + j.
  std::vector<Complex> amplitudes;

  Complex& at(int i, int j) { return amplitudes[static_cast<std::size_t>(i) * n + j]; }
  Complex at(int i, int j) const { return amplitudes[static_cast<std::size_t>(i) * n + j]; }
  double total_probability() const;
};

/// Wavenumber of DFT bin m on a grid of n points and side length.
double grid_wavenumber(int m, int n, double length);

WavepacketGrid build_kspace(const WavepacketConfig& cfg);
/// phi(k, k') + phi(k', k), renormalized.
WavepacketGrid symmetrize(const WavepacketGrid& grid);
/// Unitary inverse 2-D DFT (kernel exp(+i k x)), so a k-space factor
/// exp(-i k xbar) lands the packet at xbar.
WavepacketGrid to_real_space(const WavepacketGrid& grid);

/// The four quadrant samples |phi_11>, |phi_12>, |phi_21>, |phi_22>, each of
/// length (N/2)^2. phi_ij reads the quadrant offset by L/2 on every axis
/// whose time-bin index is 1.
struct TimeBinComponents {
  int half = 0;
  std::array<std::vector<Complex>, 4> phi;
};

TimeBinComponents extract_components(const WavepacketGrid& grid);

struct EffectiveState {
  /// G(ij, kl) = <phi_kl | phi_ij>.
  Matrix4c gram;
  DensityMatrix rho;
};

/// Traces out the spatial degrees of freedom. Throws DomainError when the
/// captured probability Tr(G) falls below 0.5.
EffectiveState effective_qubit_state(const TimeBinComponents& components);

/// Full pipeline: k-space -> symmetrize -> real space -> components -> state.
EffectiveState simulate_wavepacket(const WavepacketConfig& cfg);

/// Pipeline output decomposed by source amplitude for the alpha_12 =
/// alpha_21 = 0 family. Every stage after build_kspace is linear up to one
/// global normalization, so the Gram matrix for any (alpha_11, alpha_22)
/// follows from the cross overlaps of the two per-amplitude component sets.
/// One instance serves every (p, theta22) at fixed geometry and r_corr.
class WavepacketBasis {
 public:
  explicit WavepacketBasis(const WavepacketConfig& geometry);

  EffectiveState state(double p, double theta_22) const;

  double r_corr() const { return r_corr_; }

 private:
  double r_corr_;
  /// overlaps_[a][b](ij, kl) = <c_b,kl | c_a,ij> for a, b in {11, 22}.
  std::array<std::array<Matrix4c, 2>, 2> overlaps_;
};

}  // namespace mbqeq
