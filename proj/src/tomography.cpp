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

#include "mbqeq/tomography.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mbqeq/errors.hpp"

namespace mbqeq {

namespace {

constexpr double kMaxConditionNumber = 1e12;
constexpr double kImagResidueTolerance = 1e-12;

}  // namespace

void BasisSpec::validate() const {
  if (!(intensity > 0.0 && intensity < 1.0)) {
    throw DomainError("basis intensity must lie strictly inside (0, 1)");
  }
  if (!std::isfinite(phase_error)) {
    throw DomainError("basis phase error must be finite");
  }
}

Vector2c single_photon_ket(const BasisSpec& spec) {
  Vector2c v;
  switch (spec.kind) {
    case BasisKind::TimeBin1:
      v << 1.0, 0.0;
      return v;
    case BasisKind::TimeBin2:
      v << 0.0, 1.0;
      return v;
    case BasisKind::Plus:
    case BasisKind::L: {
      spec.validate();
      double theta0 = spec.kind == BasisKind::Plus ? 0.0 : -std::numbers::pi / 2;
      double theta = theta0 + spec.phase_error;
      v << std::sqrt(spec.intensity),
          std::polar(std::sqrt(1.0 - spec.intensity), -theta);
      return v;
    }
  }
  return v;
}

PureState2Q build_projector(const BasisSpec& a, const BasisSpec& b) {
  Vector2c ka = single_photon_ket(a);
  Vector2c kb = single_photon_ket(b);
  Vector4c v;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      v(2 * i + j) = ka(i) * kb(j);
    }
  }
  return PureState2Q(v);
}

int basis_index(std::string_view label) {
  for (int nu = 0; nu < kNumBases; ++nu) {
    if (kBasisLabels[nu] == label) {
      return nu;
    }
  }
  return -1;
}

BasisPairs basis_pairs(const MeasurementErrors& e) {
  const std::array<BasisSpec, 4> side_a = {
      BasisSpec{BasisKind::TimeBin1, 0.0, 0.5},
      BasisSpec{BasisKind::TimeBin2, 0.0, 0.5},
      BasisSpec{BasisKind::Plus, e.theta_plus_a, e.p_a},
      BasisSpec{BasisKind::L, e.theta_l_a, e.p_a},
  };
  const std::array<BasisSpec, 4> side_b = {
      BasisSpec{BasisKind::TimeBin1, 0.0, 0.5},
      BasisSpec{BasisKind::TimeBin2, 0.0, 0.5},
      BasisSpec{BasisKind::Plus, e.theta_plus_b, e.p_b},
      BasisSpec{BasisKind::L, e.theta_l_b, e.p_b},
  };
  BasisPairs pairs;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      pairs[4 * i + j] = {side_a[i], side_b[j]};
    }
  }
  return pairs;
}

ProjectorSet build_projectors(const BasisPairs& pairs) {
  auto make = [&]<std::size_t... I>(std::index_sequence<I...>) {
    return ProjectorSet{build_projector(pairs[I].first, pairs[I].second)...};
  };
  return make(std::make_index_sequence<kNumBases>{});
}

const ProjectorSet& ideal_projectors() {
  static const ProjectorSet set = build_projectors(basis_pairs());
  return set;
}

BMatrix b_matrix(const ProjectorSet& projectors) {
  const auto& gamma = pauli_basis();
  BMatrix b;
  for (int nu = 0; nu < kNumBases; ++nu) {
    const Vector4c& psi = projectors[nu].amplitudes();
    for (int mu = 0; mu < kNumBases; ++mu) {
      Complex v = (psi.adjoint() * gamma[mu] * psi)(0, 0);
      if (std::abs(v.imag()) > kImagResidueTolerance) {
        throw NumericalError("B matrix element has an imaginary residue");
      }
      b(nu, mu) = v.real();
    }
  }
  Eigen::JacobiSVD<BMatrix> svd(b);
  const auto& sv = svd.singularValues();
  double smallest = sv(kNumBases - 1);
  if (!(smallest > 0.0) || sv(0) / smallest > kMaxConditionNumber) {
    throw NumericalError("B matrix is singular; the measurement basis set is incomplete");
  }
  return b;
}

const std::array<Matrix4c, kNumBases>& reconstruction_matrices() {
  static const std::array<Matrix4c, kNumBases> m = [] {
    BMatrix b = b_matrix(ideal_projectors());
    BMatrix b_inv = b.partialPivLu().inverse();
    const auto& gamma = pauli_basis();
    std::array<Matrix4c, kNumBases> out;
    for (int nu = 0; nu < kNumBases; ++nu) {
      Matrix4c acc = Matrix4c::Zero();
      for (int mu = 0; mu < kNumBases; ++mu) {
        acc += gamma[mu] * b_inv(mu, nu);
      }
      out[nu] = acc;
    }
    return out;
  }();
  return m;
}

DensityMatrix linear_qst(const RealVector16& s) {
  const auto& m = reconstruction_matrices();
  Matrix4c rho = Matrix4c::Zero();
  for (int nu = 0; nu < kNumBases; ++nu) {
    rho += m[nu] * s[nu];
  }
  return DensityMatrix(rho);
}

void CoincidenceRecord::validate() const {
  for (int nu = 0; nu < kNumBases; ++nu) {
    if (counts[nu] < 0) {
      throw DataError("negative count for basis " + std::string(kBasisLabels[nu]));
    }
  }
  if (!(alpha_a > 0.0 && alpha_a <= 1.0) || !(alpha_b > 0.0 && alpha_b <= 1.0)) {
    throw DataError("detection efficiencies must lie in (0, 1]");
  }
  if (!(dark_a >= 0.0) || !(dark_b >= 0.0)) {
    throw DataError("dark-count probabilities must be non-negative");
  }
  if (!(rep_rate > 0.0) || !(dead_time >= 0.0)) {
    throw DataError("repetition rate must be positive and dead time non-negative");
  }
}

double normalization_constant(const CoincidenceRecord& rec) {
  double c = 0.0;
  for (int nu : kTimeBinBases) {
    c += static_cast<double>(rec.counts[nu]);
  }
  return c;
}

ProbVector normalize_counts(const CoincidenceRecord& rec) {
  rec.validate();
  double c = normalization_constant(rec);
  if (c == 0.0) {
    throw DataError("time-bin coincidence counts are all zero; cannot normalize");
  }
  ProbVector out;
  for (int nu = 0; nu < kNumBases; ++nu) {
    double n = static_cast<double>(rec.counts[nu]);
    out.s[nu] = n / c;
    out.sigma[nu] = std::sqrt(n) / c;
  }
  return out;
}

RealVector16 measure_probs(const DensityMatrix& rho, const ProjectorSet& projectors,
                           const RealVector16& delta) {
  RealVector16 s;
  for (int nu = 0; nu < kNumBases; ++nu) {
    const Vector4c& psi = projectors[nu].amplitudes();
    s[nu] = (psi.adjoint() * rho.matrix() * psi)(0, 0).real() + delta[nu];
  }
  return s;
}

}  // namespace mbqeq
