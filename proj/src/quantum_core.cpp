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

#include "mbqeq/quantum_core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mbqeq/errors.hpp"

namespace mbqeq {

namespace {

constexpr double kHermitianTolerance = 1e-9;
constexpr double kNormTolerance = 1e-12;

bool all_finite(const Matrix4c& m) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

Matrix4c hermitian_part_checked(const Matrix4c& m) {
  if (!all_finite(m)) {
    throw ValidationError("density matrix has non-finite entries");
  }
  double asym = hermitian_asymmetry(m);
  if (asym > kHermitianTolerance) {
    throw ValidationError("matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  }
  return (m + m.adjoint()) * 0.5;
}

Eigen::Matrix2cd pauli(int k) {
  const Complex i(0, 1);
  Eigen::Matrix2cd s;
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -i, i, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

}  // namespace

PureState2Q::PureState2Q(const Vector4c& v) : amps_(v) {
  if (std::abs(v.norm() - 1.0) > kNormTolerance) {
    throw ValidationError("pure state is not normalized");
  }
}

PureState2Q PureState2Q::normalized(const Vector4c& v) {
  double n = v.norm();
  if (!(n > 0) || !std::isfinite(n)) {
    throw ValidationError("cannot normalize a zero or non-finite vector");
  }
  return PureState2Q(v / n);
}

DensityMatrix::DensityMatrix(const Matrix4c& m) : m_(hermitian_part_checked(m)) {}

DensityMatrix DensityMatrix::from_pure(const PureState2Q& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(Matrix4c::Identity() * 0.25);
}

const PureState2Q& bell_state() {
  static const PureState2Q phi = [] {
    Vector4c v = Vector4c::Zero();
    v(ket_index(1, 1)) = 1.0 / std::sqrt(2.0);
    v(ket_index(2, 2)) = 1.0 / std::sqrt(2.0);
    return PureState2Q::normalized(v);
  }();
  return phi;
}

const DensityMatrix& ideal_density() {
  static const DensityMatrix rho = DensityMatrix::from_pure(bell_state());
  return rho;
}

double hermitian_asymmetry(const Matrix4c& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const Matrix4c& a, const Matrix4c& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

const std::array<Matrix4c, 16>& pauli_basis() {
  static const std::array<Matrix4c, 16> basis = [] {
    std::array<Matrix4c, 16> out;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        Eigen::Matrix2cd sa = pauli(a);
        Eigen::Matrix2cd sb = pauli(b);
        Matrix4c g;
        for (int r = 0; r < 4; ++r) {
          for (int c = 0; c < 4; ++c) {
            g(r, c) = sa(r / 2, c / 2) * sb(r % 2, c % 2) * 0.5;
          }
        }
        out[4 * a + b] = g;
      }
    }
    return out;
  }();
  return basis;
}

double trace_norm(const Matrix4c& h) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(hermitian_part_checked(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

double fidelity_pure(const PureState2Q& phi, const DensityMatrix& rho) {
  const Vector4c& v = phi.amplitudes();
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

DensityMatrix depolarize(const DensityMatrix& rho, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("depolarizing weight must lie in [0, 1]");
  }
  return DensityMatrix(rho.matrix() * (1.0 - eta) + Matrix4c::Identity() * (eta / 4.0));
}

EigenReport eigendecompose(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge");
  }
  // Eigen returns ascending order.
  EigenReport report;
  for (int k = 0; k < 4; ++k) {
    int src = 3 - k;
    report.values[k] = es.eigenvalues()(src);
    Vector4c v = es.eigenvectors().col(src);
    int pivot = 0;
    double best = -1.0;
    for (int i = 0; i < 4; ++i) {
      // Ties resolve to the lowest index so the convention is stable.
      if (std::abs(v(i)) > best * (1.0 + 1e-10)) {
        best = std::abs(v(i));
        pivot = i;
      }
    }
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
    v(pivot) = Complex(v(pivot).real(), 0.0);
    report.vectors[k] = v;
  }
  return report;
}

double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace mbqeq
