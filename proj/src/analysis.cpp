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

#include "moonlab/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "moonlab/error.hpp"
#include "moonlab/normal.hpp"

namespace moonlab {

namespace {

double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& fitted) {
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  const double ss_res = (y - fitted).squaredNorm();
  if (ss_tot <= 0.0) return 1.0;
  return std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
}

Eigen::VectorXd to_vec(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) fail(ErrorCode::non_finite_input, "fit input is not finite");
  }
}

}  // namespace

double probit(double p, double eps, std::size_t* clamped) {
  if (std::isnan(p)) fail(ErrorCode::non_finite_input, "probit of NaN");
  const double lo = eps, hi = 1.0 - eps;
  double q = p;
  if (q < lo) q = lo;
  if (q > hi) q = hi;
  if (q != p && clamped) ++*clamped;
  return normal_quantile(q);
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::dimension_mismatch, "x and y differ in length");
  if (x.size() < 2) fail(ErrorCode::insufficient_points, "linear fit needs 2 points");
  check_finite(x);
  check_finite(y);
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = to_vec(x);
  const Eigen::VectorXd yv = to_vec(y);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 2) fail(ErrorCode::rank_deficient, "all x values are equal");
  const Eigen::VectorXd beta = qr.solve(yv);
  LinearFit fit;
  fit.intercept = beta(0);
  fit.slope = beta(1);
  fit.r2 = r_squared(yv, design * beta);
  return fit;
}

QuadFit fit_quadratic(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::dimension_mismatch, "x and y differ in length");
  if (x.size() < 4) fail(ErrorCode::insufficient_points, "quadratic fit needs 4 points");
  check_finite(x);
  check_finite(y);
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 3);
  design.col(0).setOnes();
  design.col(1) = to_vec(x);
  design.col(2) = design.col(1).array().square();
  const Eigen::VectorXd yv = to_vec(y);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) fail(ErrorCode::rank_deficient, "quadratic fit needs 3 distinct x values");
  const Eigen::VectorXd beta = qr.solve(yv);
  QuadFit fit;
  fit.beta0 = beta(0);
  fit.beta1 = beta(1);
  fit.beta2 = beta(2);
  const Eigen::VectorXd fitted = design * beta;
  fit.r2 = r_squared(yv, fitted);
  if (n > 3) {
    const double sigma2 = (yv - fitted).squaredNorm() / static_cast<double>(n - 3);
    const Eigen::Matrix3d xtx = design.transpose() * design;
    const Eigen::Matrix3d cov = xtx.colPivHouseholderQr().inverse();
    fit.beta2_se = std::sqrt(std::max(0.0, sigma2 * cov(2, 2)));
  }
  return fit;
}

CurveReport fit_curves(std::span<const CurvePoint> points, const CurveOptions& opts) {
  if (points.size() < 4) fail(ErrorCode::insufficient_points, "curve fits need at least 4 points");
  if (!(opts.eps > 0.0 && opts.eps < 0.5)) fail(ErrorCode::invalid_argument, "probit eps must lie in (0, 0.5)");
  std::vector<double> maj(points.size()), min(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    maj[i] = points[i].maj;
    min[i] = points[i].min;
  }
  check_finite(maj);
  check_finite(min);

  CurveReport rep;
  rep.n_points = points.size();
  rep.eps = opts.eps;
  rep.maj_lo = *std::min_element(maj.begin(), maj.end());
  rep.maj_hi = *std::max_element(maj.begin(), maj.end());
  if (rep.maj_lo == rep.maj_hi) fail(ErrorCode::rank_deficient, "all majority accuracies are equal");

  rep.linear_fit = fit_linear(maj, min);
  rep.quad_fit = fit_quadratic(maj, min);
  // Nested models: guard against rounding putting quad below linear.
  rep.quad_fit.r2 = std::max(rep.quad_fit.r2, rep.linear_fit.r2);
  rep.curvature = rep.quad_fit.beta2;
  rep.curvature_se = rep.quad_fit.beta2_se;

  std::vector<double> pmaj(points.size()), pmin(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    pmaj[i] = probit(maj[i], opts.eps, &rep.probit_clamped);
    pmin[i] = probit(min[i], opts.eps, &rep.probit_clamped);
  }
  rep.probit_fit = fit_linear(pmaj, pmin);

  if (rep.quad_fit.beta2 != 0.0) {
    const double m = -rep.quad_fit.beta1 / (2.0 * rep.quad_fit.beta2);
    if (m > rep.maj_lo && m < rep.maj_hi) rep.phase_transition = m;
  }

  if (opts.fit_spline) {
    std::vector<double> sorted = maj;
    std::sort(sorted.begin(), sorted.end());
    const auto distinct = std::unique(sorted.begin(), sorted.end()) - sorted.begin();
    if (distinct >= 5) rep.spline = smooth_spline(maj, min, opts.lambda);
  }
  return rep;
}

NonlinearityComparison compare_nonlinearity(const CurveReport& a, const CurveReport& b, double margin,
                                            double curvature_margin) {
  NonlinearityComparison c;
  c.delta_probit_r2 = a.probit_fit.r2 - b.probit_fit.r2;
  c.delta_curvature = std::abs(a.curvature) - std::abs(b.curvature);
  if (c.delta_probit_r2 < -margin) {
    c.verdict = "a more nonlinear";
  } else if (c.delta_probit_r2 > margin) {
    c.verdict = "b more nonlinear";
  } else if (c.delta_curvature > curvature_margin) {
    c.verdict = "a more nonlinear";
  } else if (c.delta_curvature < -curvature_margin) {
    c.verdict = "b more nonlinear";
  } else {
    c.verdict = "comparable";
  }
  return c;
}

}  // namespace moonlab
