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
#include <cstdint>

#include "mbqeq/powell.hpp"
#include "mbqeq/quantum_core.hpp"
#include "mbqeq/tomography.hpp"

namespace mbqeq {

/// Real parameters of the lower-triangular T:
///   [ t1          0           0          0  ]
///   [ t5+i t6     t2          0          0  ]
///   [ t11+i t12   t7+i t8     t3         0  ]
///   [ t15+i t16   t13+i t14   t9+i t10   t4 ]
using MleParams = std::array<double, 16>;

Matrix4c t_matrix(const MleParams& t);
/// Inverse of t_matrix for a lower-triangular matrix with real diagonal.
MleParams t_params(const Matrix4c& lower);

/// T^dagger T / Tr(T^dagger T). Throws DomainError when the trace is zero.
DensityMatrix t_to_rho(const MleParams& t);

/// Sum over nu of (N p_nu - n_nu)^2 / (2 N p_nu), p_nu = <psi_nu|rho(t)|psi_nu>
/// over the ideal analyzers, floored at 1e-12.
double likelihood_counts(const MleParams& t, const std::array<std::int64_t, kNumBases>& counts,
                         double total);

/// Sum over nu of (p_nu - s_nu)^2 / (2 p_nu), same floor.
double likelihood_probs(const MleParams& t, const RealVector16& s);

/// Starting point: clip the eigenvalues of rho below 1e-6 to 1e-6,
/// renormalize and factor as T^dagger T.
MleParams mle_initial_guess(const DensityMatrix& rho);

struct MleResult {
  DensityMatrix rho;
  MleParams t{};
  double initial_likelihood = 0.0;
  double likelihood = 0.0;
  long n_evals = 0;
  /// Constant N of the count likelihood, 0 for the probability form.
  double total = 0.0;
};

struct MleOptions {
  PowellOptions powell{1e-12, 1e-10, 400, 0};
  /// Box on every t component.
  double t_bound = 10.0;
};

/// Fits the probability likelihood to s (e.g. ideal-analyzer probabilities of a
/// simulated matrix), seeded from linear_qst(s).
MleResult mle_fit_probs(const RealVector16& s, const MleOptions& options = {});

/// Fits the count likelihood with N = time-bin total, seeded from the
/// normalized linear reconstruction.
MleResult mle_fit_counts(const CoincidenceRecord& rec, const MleOptions& options = {});

/// Physical projection of a Hermitian matrix through its ideal-analyzer
/// probabilities.
MleResult mle_project(const DensityMatrix& rho, const MleOptions& options = {});

}  // namespace mbqeq
