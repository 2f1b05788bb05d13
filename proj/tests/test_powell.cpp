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
#include "mbqeq/powell.hpp"

#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "mbqeq/errors.hpp"

namespace mbqeq {
namespace {

double quadratic(std::span<const double> x) {
  return (x[0] - 0.3) * (x[0] - 0.3) + (x[1] + 0.1) * (x[1] + 0.1);
}

double rosenbrock(std::span<const double> x) {
  return 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1.0 - x[0]) * (1.0 - x[0]);
}

void expect_monotone(const PowellResult& r) {
  ASSERT_FALSE(r.trajectory.empty());
  EXPECT_EQ(r.trajectory.front().iteration, 0);
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
    EXPECT_LE(r.trajectory[i].cost, r.trajectory[i - 1].cost);
    EXPECT_EQ(r.trajectory[i].iteration, r.trajectory[i - 1].iteration + 1);
  }
  EXPECT_EQ(r.trajectory.back().cost, r.fun);
}

TEST(Powell, ConvexQuadratic) {
  PowellResult r = powell_minimize(quadratic, {0.0, 0.0}, {-1, -1}, {1, 1});
  EXPECT_NEAR(r.x[0], 0.3, 1e-6);
  EXPECT_NEAR(r.x[1], -0.1, 1e-6);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.fun, quadratic(r.x));
  expect_monotone(r);
}

TEST(Powell, ActiveBound) {
  PowellResult r = powell_minimize(quadratic, {0.0, 0.0}, {-1, -1}, {0.2, 1});
  EXPECT_NEAR(r.x[0], 0.2, 1e-6);
  EXPECT_LE(r.x[0], 0.2);
  EXPECT_NEAR(r.x[1], -0.1, 1e-6);
}

TEST(Powell, Rosenbrock) {
  PowellOptions opts;
  opts.ftol = 1e-14;
  opts.xtol = 1e-12;
  opts.max_iter = 2000;
  PowellResult r = powell_minimize(rosenbrock, {-1.2, 1.0}, {-2, -2}, {2, 2}, opts);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
  expect_monotone(r);
}

TEST(Powell, StaysInsideBoxInHigherDimensions) {
  auto f = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - 2.0) * (x[i] - 2.0);
    return s;
  };
  std::vector<double> lo(6, -1.0), hi(6, 1.0);
  hi[2] = 3.0;
  PowellResult r = powell_minimize(f, std::vector<double>(6, 0.0), lo, hi);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_GE(r.x[i], lo[i]);
    EXPECT_LE(r.x[i], hi[i]);
  }
  EXPECT_NEAR(r.x[2], 2.0, 1e-6);
  EXPECT_NEAR(r.x[0], 1.0, 1e-9);
}

TEST(Powell, NonSmoothObjective) {
  auto f = [](std::span<const double> x) { return std::abs(x[0] - 0.25) + std::abs(x[1] + 0.5); };
  PowellResult r = powell_minimize(f, {0.0, 0.0}, {-1, -1}, {1, 1});
  EXPECT_NEAR(r.fun, 0.0, 1e-6);
}

TEST(Powell, EvaluationBudget) {
  auto f = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - 0.5) * (x[i] - 0.5) * (1.0 + x[0] * x[i]);
    return s;
  };
  PowellOptions opts;
  opts.max_evals = 10;
  PowellResult r = powell_minimize(f, std::vector<double>(6, 0.0), std::vector<double>(6, -1.0),
                                   std::vector<double>(6, 1.0), opts);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.n_iter, 1);
  EXPECT_EQ(r.fun, f(r.x));
}

TEST(Powell, RejectsStartOutsideBox) {
  EXPECT_THROW(powell_minimize(quadratic, {1.5, 0.0}, {-1, -1}, {1, 1}), DomainError);
  EXPECT_THROW(powell_minimize(quadratic, {0.0, 0.0}, {-1, -INFINITY}, {1, 1}), DomainError);
}

TEST(Powell, NonFiniteObjectiveAborts) {
  auto f = [](std::span<const double> x) {
    return x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : (x[0] - 1.0) * (x[0] - 1.0);
  };
  EXPECT_THROW(powell_minimize(f, {0.0}, {-1}, {1}), NumericalError);
}

TEST(Powell, Deterministic) {
  PowellResult a = powell_minimize(rosenbrock, {-1.2, 1.0}, {-2, -2}, {2, 2});
  PowellResult b = powell_minimize(rosenbrock, {-1.2, 1.0}, {-2, -2}, {2, 2});
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.n_evals, b.n_evals);
}

}  // namespace
}  // namespace mbqeq
