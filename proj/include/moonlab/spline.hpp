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

#ifndef MOONLAB_SPLINE_HPP
#define MOONLAB_SPLINE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace moonlab {

// Natural cubic smoothing spline stored by value and second derivative
// at each distinct abscissa.
struct SplineFit {
  std::vector<double> knots;
  std::vector<double> values;
  std::vector<double> second_derivs;
  double lambda = 0.0;
  double gcv = 0.0;
  double edf = 0.0;
  std::size_t n_obs = 0;

  // Linear beyond the end knots.
  double operator()(double x) const;
};

// 25 log-spaced values over [1e-6, 1e3].
std::vector<double> gcv_lambda_grid();

/// Minimizes sum (y - f(x))^2 + lambda * int f''^2. Repeated x values (equal
/// to within 1e-9 of the x range) are merged into weighted means. With no lambda, picks the grid value with the
/// smallest generalized cross-validation score. Needs at least 5 distinct x.
SplineFit smooth_spline(std::span<const double> x, std::span<const double> y,
                        std::optional<double> lambda = std::nullopt);

}  // namespace moonlab

#endif  // MOONLAB_SPLINE_HPP
