// Copyright 2026 The moonlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "moonlab/rng.hpp"
#include "moonlab/spline.hpp"
#include "test_util.hpp"

namespace moonlab {
namespace {

using testing::code_of;

// Dense Reinsch form: f = (W + lambda Q R^-1 Q^T)^-1 W y at distinct knots.
Eigen::VectorXd dense_smoother(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<double>& w, double lambda) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n - 2);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n - 2, n - 2);
  for (int j = 1; j < n - 1; ++j) {
    const double h0 = x[j] - x[j - 1], h1 = x[j + 1] - x[j];
    Q(j - 1, j - 1) = 1 / h0;
    Q(j, j - 1) = -1 / h0 - 1 / h1;
    Q(j + 1, j - 1) = 1 / h1;
    R(j - 1, j - 1) = (h0 + h1) / 3;
    if (j < n - 2) R(j - 1, j) = R(j, j - 1) = h1 / 6;
  }
  const Eigen::MatrixXd K = Q * R.inverse() * Q.transpose();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd Y(n);
  for (int i = 0; i < n; ++i) {
    W(i, i) = w[i];
    Y(i) = y[i];
  }
  return (W + lambda * K).ldlt().solve(W * Y);
}

TEST(Spline, MatchesDenseOracle) {
  SplitMix64 rng(1);
  std::vector<double> x, y, w;
  double pos = 0;
  for (int i = 0; i < 30; ++i) {
    pos += 0.01 + rng.uniform() * 0.05;
    x.push_back(pos);
    y.push_back(std::sin(6 * pos) + 0.1 * rng.normal());
    w.push_back(1.0);
  }
  for (double lambda : {1e-6, 1e-4, 1e-2, 1.0}) {
    const SplineFit s = smooth_spline(x, y, lambda);
    const Eigen::VectorXd ref = dense_smoother(x, y, w, lambda);
    for (int i = 0; i < 30; ++i) EXPECT_NEAR(s.values[i], ref(i), 1e-9) << lambda;
  }
}

TEST(Spline, TiesBecomeWeightedMeans) {
  const std::vector<double> x = {0.0, 0.1, 0.1, 0.3, 0.45, 0.45, 0.45, 0.7, 1.0};
  const std::vector<double> y = {0.0, 1.0, 3.0, 0.5, 2.0, 2.5, 3.0, 1.0, 0.0};
  const SplineFit s = smooth_spline(x, y, 0.01);
  ASSERT_EQ(s.knots.size(), 6u);
  const Eigen::VectorXd ref =
      dense_smoother({0.0, 0.1, 0.3, 0.45, 0.7, 1.0}, {0.0, 2.0, 0.5, 2.5, 1.0, 0.0}, {1, 2, 1, 3, 1, 1}, 0.01);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(s.values[i], ref(i), 1e-9);
  EXPECT_EQ(s.n_obs, 9u);
}

TEST(Spline, HugeLambdaGivesLeastSquaresLine) {
  SplitMix64 rng(2);
  std::vector<double> x, y;
  for (int i = 0; i < 40; ++i) {
    x.push_back(i / 39.0);
    y.push_back(0.3 + 0.8 * x.back() + 0.1 * x.back() * x.back() + 0.05 * rng.normal());
  }
  double mx = 0, my = 0;
  for (int i = 0; i < 40; ++i) {
    mx += x[i] / 40;
    my += y[i] / 40;
  }
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 40; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx, icpt = my - slope * mx;
  const SplineFit s = smooth_spline(x, y, 1e9);
  for (int i = 0; i < 40; ++i) EXPECT_NEAR(s(x[i]), icpt + slope * x[i], 1e-4);
}

TEST(Spline, TinyLambdaInterpolates) {
  SplitMix64 rng(3);
  std::vector<double> x, y;
  for (int i = 0; i < 25; ++i) {
    x.push_back(i * 0.04 + 0.01 * rng.uniform());
    y.push_back(rng.uniform());
  }
  const SplineFit s = smooth_spline(x, y, 1e-14);
  for (int i = 0; i < 25; ++i) EXPECT_NEAR(s(x[i]), y[i], 1e-6);
}

TEST(Spline, GcvRecoversNoisyParabola) {
  SplitMix64 rng(4);
  std::vector<double> x, y;
  const auto truth = [](double t) { return 0.2 + 1.5 * t - 1.2 * t * t; };
  for (int i = 0; i < 200; ++i) {
    x.push_back(rng.uniform());
    y.push_back(truth(x.back()) + 0.01 * rng.normal());
  }
  const SplineFit s = smooth_spline(x, y);
  double ss = 0;
  for (double t : x) ss += (s(t) - truth(t)) * (s(t) - truth(t));
  EXPECT_LE(std::sqrt(ss / 200), 0.01);
  const auto lambdas = gcv_lambda_grid();
  EXPECT_NE(std::find(lambdas.begin(), lambdas.end(), s.lambda), lambdas.end());
}

TEST(Spline, GcvGrid) {
  const auto g = gcv_lambda_grid();
  ASSERT_EQ(g.size(), 25u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-6);
  EXPECT_DOUBLE_EQ(g.back(), 1e3);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(std::log10(g[i] / g[i - 1]), 9.0 / 24, 1e-12);
}

TEST(Spline, ReproducesValuesAtKnots) {
  SplitMix64 rng(6);
  std::vector<double> x, y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(rng.uniform());
    y.push_back(rng.normal());
  }
  const SplineFit s = smooth_spline(x, y);
  for (std::size_t k = 0; k < s.knots.size(); ++k) EXPECT_NEAR(s(s.knots[k]), s.values[k], 1e-9);
  // natural boundary: zero curvature at the ends
  EXPECT_EQ(s.second_derivs.front(), 0.0);
  EXPECT_EQ(s.second_derivs.back(), 0.0);
}

TEST(Spline, Errors) {
  const std::vector<double> x4 = {0, 1, 2, 3, 3}, y4 = {0, 1, 0, 1, 2};
  EXPECT_EQ(code_of([&] { smooth_spline(x4, y4); }), ErrorCode::insufficient_points);
  const std::vector<double> x = {0, 1, 2, 3, 4}, y = {0, NAN, 0, 1, 2};
  EXPECT_EQ(code_of([&] { smooth_spline(x, y); }), ErrorCode::non_finite_input);
  const std::vector<double> y5 = {0, 1, 0, 1, 2};
  EXPECT_EQ(code_of([&] { smooth_spline(x, y5, -1.0); }), ErrorCode::invalid_argument);
}

}  // namespace
}  // namespace moonlab
