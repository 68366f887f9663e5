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

#ifndef MOONLAB_ANALYSIS_HPP
#define MOONLAB_ANALYSIS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moonlab/spline.hpp"

namespace moonlab {

struct CurvePoint {
  double maj = 0.0;
  double min = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct QuadFit {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double r2 = 0.0;
  double beta2_se = 0.0;  // OLS standard error of beta2
};

struct CurveOptions {
  double eps = 1e-3;
  std::optional<double> lambda;  // none selects by GCV
  bool fit_spline = true;
};

struct CurveReport {
  std::size_t n_points = 0;
  LinearFit linear_fit;
  LinearFit probit_fit;
  QuadFit quad_fit;
  double curvature = 0.0;
  double curvature_se = 0.0;
  std::optional<double> phase_transition;
  std::optional<SplineFit> spline;
  double eps = 1e-3;
  std::size_t probit_clamped = 0;
  double maj_lo = 0.0;
  double maj_hi = 0.0;
};

/// Inverse standard normal CDF after clamping p into [eps, 1 - eps].
/// Increments *clamped when clamping changed the input.
double probit(double p, double eps = 1e-3, std::size_t* clamped = nullptr);

LinearFit fit_linear(std::span<const double> x, std::span<const double> y);
QuadFit fit_quadratic(std::span<const double> x, std::span<const double> y);

/// Linear, probit-linear and quadratic least squares of min on maj, plus an
/// optional smoothing spline (skipped with fewer than 5 distinct maj values).
/// phase_transition is the stationary point -beta1 / (2 beta2) when it lies
/// strictly inside the observed maj range.
CurveReport fit_curves(std::span<const CurvePoint> points, const CurveOptions& opts = {});

struct NonlinearityComparison {
  double delta_probit_r2 = 0.0;   // a - b
  double delta_curvature = 0.0;   // |a| - |b|
  std::string verdict;
};

/// Lower probit R^2 means more nonlinear. When the probit R^2 values are
/// within `margin`, |curvature| decides if it differs by more than
/// `curvature_margin`; otherwise "comparable".
NonlinearityComparison compare_nonlinearity(const CurveReport& a, const CurveReport& b, double margin = 0.02,
                                            double curvature_margin = 0.1);

}  // namespace moonlab

#endif  // MOONLAB_ANALYSIS_HPP
