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

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

#include "mbqeq/quantum_core.hpp"

namespace mbqeq {

enum class BasisKind { TimeBin1, TimeBin2, Plus, L };

/// One single-photon projective measurement. Superposition kinds use
/// sqrt(p)|1> + exp(-i(theta0 + phase_error)) sqrt(1-p)|2>, with theta0 = 0
/// for Plus and -pi/2 for L. Time-bin kinds ignore both fields.
struct BasisSpec {
  BasisKind kind = BasisKind::TimeBin1;
  double phase_error = 0.0;
  double intensity = 0.5;

  /// Throws DomainError on intensity outside (0, 1) or non-finite phase.
  void validate() const;
};

Vector2c single_photon_ket(const BasisSpec& spec);

/// |a> (x) |b>.
PureState2Q build_projector(const BasisSpec& a, const BasisSpec& b);

constexpr int kNumBases = 16;

/// Labels in canonical measurement order nu = 0..15:
/// {1,2,+,L}_A (x) {1,2,+,L}_B, first index slowest.
constexpr std::array<std::string_view, kNumBases> kBasisLabels = {
    "11", "12", "1+", "1L", "21", "22", "2+", "2L",
    "+1", "+2", "++", "+L", "L1", "L2", "L+", "LL"};

/// Positions of |11>, |12>, |21>, |22> in the canonical order.
constexpr std::array<int, 4> kTimeBinBases = {0, 1, 4, 5};

/// Returns the canonical index of a label such as "+L", or -1.
int basis_index(std::string_view label);

using BasisPairs = std::array<std::pair<BasisSpec, BasisSpec>, kNumBases>;
using ProjectorSet = std::array<PureState2Q, kNumBases>;
using RealVector16 = std::array<double, kNumBases>;

/// Phase and intensity imperfections of both analyzers.
struct MeasurementErrors {
  double theta_plus_a = 0.0;
  double theta_l_a = 0.0;
  double theta_plus_b = 0.0;
  double theta_l_b = 0.0;
  double p_a = 0.5;
  double p_b = 0.5;
};

BasisPairs basis_pairs(const MeasurementErrors& errors = {});
ProjectorSet build_projectors(const BasisPairs& pairs);
/// Projectors for error-free analyzers; cached.
const ProjectorSet& ideal_projectors();

using BMatrix = Eigen::Matrix<double, kNumBases, kNumBases>;

/// B(nu, mu) = <psi_nu| Gamma_mu |psi_nu>. Throws NumericalError when the
/// condition number exceeds 1e12.
BMatrix b_matrix(const ProjectorSet& projectors);

/// M_nu = sum_mu Gamma_mu (B^-1)(mu, nu) for the ideal analyzers; cached.
const std::array<Matrix4c, kNumBases>& reconstruction_matrices();

/// Measurement probabilities and their statistical widths.
struct ProbVector {
  RealVector16 s{};
  RealVector16 sigma{};
};

/// rho = sum_nu M_nu s_nu. Not necessarily positive.
DensityMatrix linear_qst(const RealVector16& s);
inline DensityMatrix linear_qst(const ProbVector& probs) { return linear_qst(probs.s); }

struct CoincidenceRecord {
  std::array<std::int64_t, kNumBases> counts{};
  double alpha_a = 1.0;
  double alpha_b = 1.0;
  double dark_a = 0.0;
  double dark_b = 0.0;
  double rep_rate = 1.0;
  double dead_time = 0.0;

  /// Throws DataError on negative counts or out-of-range detector values.
  void validate() const;
};

/// Sum of the four time-bin counts.
double normalization_constant(const CoincidenceRecord& rec);

/// s_nu = n_nu / C and sigma_nu = sqrt(n_nu) / C with C the time-bin total.
/// Throws DataError when C = 0.
ProbVector normalize_counts(const CoincidenceRecord& rec);

/// s'_nu = <psi_nu|rho|psi_nu> + delta_nu. No clipping.
RealVector16 measure_probs(const DensityMatrix& rho, const ProjectorSet& projectors,
                           const RealVector16& delta = {});

}  // namespace mbqeq
