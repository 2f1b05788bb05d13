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
#include <complex>

namespace mbqeq {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Vector4c = Eigen::Matrix<Complex, 4, 1>;
using Vector2c = Eigen::Matrix<Complex, 2, 1>;

/// Computational-basis index of the two-qubit ket |ab>, where a, b in {1, 2}
/// label the early and late time bins. Order is |11>, |12>, |21>, |22>.
constexpr int ket_index(int a, int b) { return 2 * (a - 1) + (b - 1); }

/// Normalized two-qubit ket.
class PureState2Q {
 public:
  /// Throws ValidationError unless |v| = 1 within 1e-12.
  explicit PureState2Q(const Vector4c& v);
  /// Rescales a nonzero vector to unit norm.
  static PureState2Q normalized(const Vector4c& v);

  const Vector4c& amplitudes() const { return amps_; }
  Complex operator[](int i) const { return amps_(i); }

 private:
  Vector4c amps_;
};

/// 4x4 Hermitian matrix with no positivity requirement. Construction
/// symmetrizes away asymmetry up to 1e-9 and rejects anything larger.
class DensityMatrix {
 public:
  DensityMatrix() : m_(Matrix4c::Zero()) {}
  explicit DensityMatrix(const Matrix4c& m);

  static DensityMatrix from_pure(const PureState2Q& psi);
  static DensityMatrix maximally_mixed();

  const Matrix4c& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }
  double trace() const { return m_.trace().real(); }

  DensityMatrix operator+(const DensityMatrix& o) const { return DensityMatrix(m_ + o.m_); }
  DensityMatrix operator-(const DensityMatrix& o) const { return DensityMatrix(m_ - o.m_); }
  DensityMatrix operator*(double a) const { return DensityMatrix(m_ * a); }

 private:
  Matrix4c m_;
};

/// (|11> + |22>)/sqrt(2).
const PureState2Q& bell_state();
/// |Phi><Phi| for the Bell state.
const DensityMatrix& ideal_density();

/// Max element-wise |m(i,j) - conj(m(j,i))|.
double hermitian_asymmetry(const Matrix4c& m);
/// Max element-wise absolute difference.
double max_abs_diff(const Matrix4c& a, const Matrix4c& b);

/// The 16 two-qubit Pauli products divided by 2, ordered
/// {I,X,Y,Z} (x) {I,X,Y,Z} row-major. Orthonormal under Tr(A B).
const std::array<Matrix4c, 16>& pauli_basis();

/// Sum of |eigenvalues| of a Hermitian matrix. Throws ValidationError when
/// the argument is not Hermitian to 1e-9.
double trace_norm(const Matrix4c& h);

/// (1/2) Tr|rho - sigma|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// <phi|rho|phi>. Exceeds 1 for some non-positive rho.
double fidelity_pure(const PureState2Q& phi, const DensityMatrix& rho);

/// (1 - eta) rho + eta I/4. Throws DomainError unless 0 <= eta <= 1.
DensityMatrix depolarize(const DensityMatrix& rho, double eta);

struct EigenReport {
  /// Descending, unclipped.
  std::array<double, 4> values;
  /// vectors[i] pairs with values[i]; largest-magnitude component real positive.
  std::array<Vector4c, 4> vectors;
};

EigenReport eigendecompose(const DensityMatrix& rho);

double min_eigenvalue(const DensityMatrix& rho);

}  // namespace mbqeq
