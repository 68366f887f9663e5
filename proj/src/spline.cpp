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

#include "moonlab/spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "moonlab/error.hpp"

namespace moonlab {

namespace {

struct Merged {
  std::vector<double> x;
  std::vector<double> ybar;
  std::vector<double> w;
  double within_ss = 0.0;  // scatter of tied y values around their means
  std::size_t n_obs = 0;
};

Merged merge_ties(std::span<const double> x, std::span<const double> y) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  Merged m;
  m.n_obs = x.size();
  if (order.empty()) return m;
  // Abscissae closer than this are one knot; 1/h would otherwise overflow.
  const double tol = 1e-9 * (x[order.back()] - x[order.front()]);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double sum = 0.0, xsum = 0.0;
    while (j < order.size() && x[order[j]] - x[order[i]] <= tol) {
      xsum += x[order[j]];
      sum += y[order[j++]];
    }
    const double count = static_cast<double>(j - i);
    const double mean = sum / count;
    for (std::size_t t = i; t < j; ++t) m.within_ss += (y[order[t]] - mean) * (y[order[t]] - mean);
    m.x.push_back(j - i == 1 ? x[order[i]] : xsum / count);
    m.ybar.push_back(mean);
    m.w.push_back(count);
    i = j;
  }
  return m;
}

// Symmetric pentadiagonal matrix: diagonal a, first band b, second band c.
struct Band {
  std::vector<double> a, b, c;
};

struct Solved {
  std::vector<double> f;
  std::vector<double> gamma;  // interior second derivatives
  double rss = 0.0;
  double edf = 0.0;
};

Solved solve(const Merged& m, double lambda) {
  const std::size_t n = m.x.size();
  const std::size_t k = n - 2;
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = m.x[i + 1] - m.x[i];

  // Column j of Q (n x k) has entries at rows j, j+1, j+2.
  std::vector<double> q0(k), q1(k), q2(k);
  for (std::size_t j = 0; j < k; ++j) {
    q0[j] = 1.0 / h[j];
    q1[j] = -1.0 / h[j] - 1.0 / h[j + 1];
    q2[j] = 1.0 / h[j + 1];
  }

  // M = R + lambda Q' W^-1 Q.
  Band mb{std::vector<double>(k), std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  for (std::size_t j = 0; j < k; ++j) {
    const double iw0 = 1.0 / m.w[j], iw1 = 1.0 / m.w[j + 1], iw2 = 1.0 / m.w[j + 2];
    mb.a[j] = (h[j] + h[j + 1]) / 3.0 + lambda * (q0[j] * q0[j] * iw0 + q1[j] * q1[j] * iw1 + q2[j] * q2[j] * iw2);
    if (j + 1 < k) {
      mb.b[j] = h[j + 1] / 6.0 + lambda * (q1[j] * q0[j + 1] * iw1 + q2[j] * q1[j + 1] * iw2);
    }
    if (j + 2 < k) mb.c[j] = lambda * q2[j] * q0[j + 2] * iw2;
  }

  // LDL' with unit lower factor bands l1, l2.
  std::vector<double> d(k), l1(k, 0.0), l2(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    double di = mb.a[i];
    if (i >= 1) di -= l1[i - 1] * l1[i - 1] * d[i - 1];
    if (i >= 2) di -= l2[i - 2] * l2[i - 2] * d[i - 2];
    d[i] = di;
    if (i + 1 < k) {
      double v = mb.b[i];
      if (i >= 1) v -= l2[i - 1] * l1[i - 1] * d[i - 1];
      l1[i] = v / di;
    }
    if (i + 2 < k) l2[i] = mb.c[i] / di;
  }

  // Right-hand side Q' ybar.
  std::vector<double> g(k);
  for (std::size_t j = 0; j < k; ++j) g[j] = q0[j] * m.ybar[j] + q1[j] * m.ybar[j + 1] + q2[j] * m.ybar[j + 2];
  for (std::size_t i = 0; i < k; ++i) {
    if (i >= 1) g[i] -= l1[i - 1] * g[i - 1];
    if (i >= 2) g[i] -= l2[i - 2] * g[i - 2];
  }
  for (std::size_t i = 0; i < k; ++i) g[i] /= d[i];
  for (std::size_t ii = k; ii-- > 0;) {
    if (ii + 1 < k) g[ii] -= l1[ii] * g[ii + 1];
    if (ii + 2 < k) g[ii] -= l2[ii] * g[ii + 2];
  }

  Solved s;
  s.gamma = g;
  s.f = m.ybar;
  for (std::size_t j = 0; j < k; ++j) {
    s.f[j] -= lambda * q0[j] * g[j] / m.w[j];
    s.f[j + 1] -= lambda * q1[j] * g[j] / m.w[j + 1];
    s.f[j + 2] -= lambda * q2[j] * g[j] / m.w[j + 2];
  }
  s.rss = m.within_ss;
  for (std::size_t i = 0; i < n; ++i) s.rss += m.w[i] * (m.ybar[i] - s.f[i]) * (m.ybar[i] - s.f[i]);

  // Central band of M^-1 (half-bandwidth 2), backwards recursion.
  std::vector<double> s0(k), s1(k, 0.0), s2(k, 0.0);
  for (std::size_t ii = k; ii-- > 0;) {
    const double a1 = ii + 1 < k ? l1[ii] : 0.0;
    const double a2 = ii + 2 < k ? l2[ii] : 0.0;
    const double s11 = ii + 1 < k ? s0[ii + 1] : 0.0;
    const double s22 = ii + 2 < k ? s0[ii + 2] : 0.0;
    const double s12 = ii + 1 < k ? s1[ii + 1] : 0.0;
    s1[ii] = -a1 * s11 - a2 * s12;
    s2[ii] = -a1 * s12 - a2 * s22;
    s0[ii] = 1.0 / d[ii] - a1 * s1[ii] - a2 * s2[ii];
  }
  auto inv = [&](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    const std::size_t off = j - i;
    return off == 0 ? s0[i] : off == 1 ? s1[i] : off == 2 ? s2[i] : 0.0;
  };

  // tr(I - A) = lambda * sum_i (Q M^-1 Q')_ii / w_i.
  double tr_resid = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const std::size_t jlo = i >= 2 ? i - 2 : 0;
    const std::size_t jhi = std::min(i, k - 1);
    auto qval = [&](std::size_t row, std::size_t col) {
      const std::size_t off = row - col;
      return off == 0 ? q0[col] : off == 1 ? q1[col] : q2[col];
    };
    for (std::size_t j = jlo; j <= jhi; ++j) {
      for (std::size_t jj = jlo; jj <= jhi; ++jj) acc += qval(i, j) * qval(i, jj) * inv(j, jj);
    }
    tr_resid += lambda * acc / m.w[i];
  }
  s.edf = static_cast<double>(n) - tr_resid;
  return s;
}

double gcv_score(const Solved& s, std::size_t n_obs) {
  const double nn = static_cast<double>(n_obs);
  const double denom = 1.0 - s.edf / nn;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return (s.rss / nn) / (denom * denom);
}

}  // namespace

double SplineFit::operator()(double x) const {
  const std::size_t n = knots.size();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  if (x <= knots.front() || x >= knots.back()) {
    const bool left = x <= knots.front();
    const std::size_t i = left ? 0 : n - 2;
    const double h = knots[i + 1] - knots[i];
    // End slope of the natural cubic on the boundary interval.
    const double slope = (values[i + 1] - values[i]) / h +
                         (left ? -h * (2.0 * second_derivs[i] + second_derivs[i + 1]) / 6.0
                               : h * (second_derivs[i] + 2.0 * second_derivs[i + 1]) / 6.0);
    const double x0 = left ? knots.front() : knots.back();
    const double f0 = left ? values.front() : values.back();
    return f0 + slope * (x - x0);
  }
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(knots.begin(), knots.end(), x) - knots.begin()) - 1;
  const double h = knots[i + 1] - knots[i];
  const double a = (knots[i + 1] - x) / h;
  const double b = (x - knots[i]) / h;
  return a * values[i] + b * values[i + 1] +
         ((a * a * a - a) * second_derivs[i] + (b * b * b - b) * second_derivs[i + 1]) * h * h / 6.0;
}

std::vector<double> gcv_lambda_grid() {
  std::vector<double> grid(25);
  for (int i = 0; i < 25; ++i) grid[i] = std::pow(10.0, -6.0 + 9.0 * i / 24.0);
  return grid;
}

SplineFit smooth_spline(std::span<const double> x, std::span<const double> y, std::optional<double> lambda) {
  if (x.size() != y.size()) fail(ErrorCode::dimension_mismatch, "x and y differ in length");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) fail(ErrorCode::non_finite_input, "spline input is not finite");
  }
  if (lambda && !(*lambda > 0.0 && std::isfinite(*lambda))) {
    fail(ErrorCode::invalid_argument, "spline lambda must be positive");
  }
  const Merged m = merge_ties(x, y);
  if (m.x.size() < 5) fail(ErrorCode::insufficient_points, "too-few-points: spline needs 5 distinct x values");

  SplineFit fit;
  Solved best;
  if (lambda) {
    best = solve(m, *lambda);
    fit.lambda = *lambda;
    fit.gcv = gcv_score(best, m.n_obs);
  } else {
    fit.gcv = std::numeric_limits<double>::infinity();
    bool first = true;
    for (double lam : gcv_lambda_grid()) {
      Solved s = solve(m, lam);
      const double score = gcv_score(s, m.n_obs);
      if (first || score < fit.gcv) {
        fit.gcv = score;
        fit.lambda = lam;
        best = std::move(s);
        first = false;
      }
    }
  }
  fit.knots = m.x;
  fit.values = best.f;
  fit.second_derivs.assign(m.x.size(), 0.0);
  for (std::size_t j = 0; j < best.gamma.size(); ++j) fit.second_derivs[j + 1] = best.gamma[j];
  fit.edf = best.edf;
  fit.n_obs = m.n_obs;
  return fit;
}

}  // namespace moonlab
