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

#include "mbqeq/mle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "mbqeq/errors.hpp"

namespace mbqeq {

namespace {

constexpr double kProbabilityFloor = 1e-12;
constexpr double kEigenvalueClip = 1e-6;

// (row, col, index of real part) for the off-diagonal entries; the imaginary
// part follows at index + 1.
struct OffDiagonal {
  int row;
  int col;
  int re;
};
constexpr std::array<OffDiagonal, 6> kOffDiagonal = {{
    {1, 0, 4}, {2, 1, 6}, {3, 2, 8}, {2, 0, 10}, {3, 1, 12}, {3, 0, 14}}};

RealVector16 model_probs(const MleParams& t) {
  return measure_probs(t_to_rho(t), ideal_projectors());
}

MleResult run_fit(const std::function<double(const MleParams&)>& likelihood,
                  const DensityMatrix& seed_rho, const MleOptions& options) {
  MleParams t0 = mle_initial_guess(seed_rho);
  std::vector<double> x0(t0.begin(), t0.end());
  std::vector<double> lo(16, -options.t_bound);
  std::vector<double> hi(16, options.t_bound);
  for (auto& v : x0) v = std::clamp(v, -options.t_bound, options.t_bound);
  auto objective = [&](std::span<const double> x) {
    MleParams t;
    std::copy(x.begin(), x.end(), t.begin());
    return likelihood(t);
  };
  PowellResult res = powell_minimize(objective, x0, lo, hi, options.powell);
  MleResult out;
  std::copy(res.x.begin(), res.x.end(), out.t.begin());
  out.rho = t_to_rho(out.t);
  out.initial_likelihood = res.trajectory.front().cost;
  out.likelihood = res.fun;
  out.n_evals = res.n_evals;
  return out;
}

}  // namespace

Matrix4c t_matrix(const MleParams& t) {
  Matrix4c m = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) m(i, i) = t[i];
  for (const auto& od : kOffDiagonal) {
    m(od.row, od.col) = Complex(t[od.re], t[od.re + 1]);
  }
  return m;
}

MleParams t_params(const Matrix4c& lower) {
  MleParams t{};
  for (int i = 0; i < 4; ++i) t[i] = lower(i, i).real();
  for (const auto& od : kOffDiagonal) {
    t[od.re] = lower(od.row, od.col).real();
    t[od.re + 1] = lower(od.row, od.col).imag();
  }
  return t;
}

DensityMatrix t_to_rho(const MleParams& t) {
  Matrix4c tm = t_matrix(t);
  Matrix4c prod = tm.adjoint() * tm;
  double tr = prod.trace().real();
  if (!(tr > 0.0)) {
    throw DomainError("degenerate T parametrization: Tr(T^dagger T) = 0");
  }
  return DensityMatrix(prod / tr);
}

double likelihood_counts(const MleParams& t, const std::array<std::int64_t, kNumBases>& counts,
                         double total) {
  if (!(total > 0.0)) {
    throw DomainError("likelihood normalization constant must be positive");
  }
  RealVector16 p = model_probs(t);
  double sum = 0.0;
  for (int nu = 0; nu < kNumBases; ++nu) {
    double expected = total * std::max(p[nu], kProbabilityFloor);
    double diff = expected - static_cast<double>(counts[nu]);
    sum += diff * diff / (2.0 * expected);
  }
  return sum;
}

double likelihood_probs(const MleParams& t, const RealVector16& s) {
  RealVector16 p = model_probs(t);
  double sum = 0.0;
  for (int nu = 0; nu < kNumBases; ++nu) {
    double pn = std::max(p[nu], kProbabilityFloor);
    double diff = pn - s[nu];
    sum += diff * diff / (2.0 * pn);
  }
  return sum;
}

MleParams mle_initial_guess(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho.matrix());
  Eigen::Vector4d w = es.eigenvalues().cwiseMax(kEigenvalueClip);
  w /= w.sum();
  Matrix4c clipped = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  clipped = (clipped + clipped.adjoint()) * 0.5;
  // T lower with T^dagger T = rho: with J the exchange matrix, J rho J = L L^dagger
  // and T = J L^dagger J.
  Matrix4c j = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) j(i, 3 - i) = 1.0;
  Eigen::LLT<Matrix4c> llt(j * clipped * j);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization of the clipped seed failed");
  }
  Matrix4c l = llt.matrixL();
  return t_params(j * l.adjoint() * j);
}

MleResult mle_fit_probs(const RealVector16& s, const MleOptions& options) {
  auto likelihood = [&](const MleParams& t) { return likelihood_probs(t, s); };
  return run_fit(likelihood, linear_qst(s), options);
}

MleResult mle_fit_counts(const CoincidenceRecord& rec, const MleOptions& options) {
  ProbVector probs = normalize_counts(rec);
  const double total = normalization_constant(rec);
  auto likelihood = [&](const MleParams& t) { return likelihood_counts(t, rec.counts, total); };
  MleResult out = run_fit(likelihood, linear_qst(probs), options);
  out.total = total;
  return out;
}

MleResult mle_project(const DensityMatrix& rho, const MleOptions& options) {
  return mle_fit_probs(measure_probs(rho, ideal_projectors()), options);
}

}  // namespace mbqeq
