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

#include "moonlab/normal.hpp"

#include <cmath>
#include <limits>

namespace moonlab {

double normal_lower_tail(double abs_x) noexcept {
  const double z = std::fabs(abs_x);
  if (z > 37.0) return 0.0;
  const double e = std::exp(-0.5 * z * z);
  if (z < 7.07106781186547) {
    double num = 3.52624965998911e-02 * z + 0.700383064443688;
    num = num * z + 6.37396220353165;
    num = num * z + 33.912866078383;
    num = num * z + 112.079291497871;
    num = num * z + 221.213596169931;
    num = num * z + 220.206867912376;
    double den = 8.83883476483184e-02 * z + 1.75566716318264;
    den = den * z + 16.064177579207;
    den = den * z + 86.7807322029461;
    den = den * z + 296.564248779674;
    den = den * z + 637.333633378831;
    den = den * z + 793.826512519948;
    den = den * z + 440.413735824752;
    return e * num / den;
  }
  double cf = z + 0.65;
  cf = z + 4.0 / cf;
  cf = z + 3.0 / cf;
  cf = z + 2.0 / cf;
  cf = z + 1.0 / cf;
  return e / cf / 2.506628274631;
}

double normal_cdf(double x) noexcept {
  if (std::isnan(x)) return x;
  const double tail = normal_lower_tail(x);
  return x > 0.0 ? 1.0 - tail : tail;
}

namespace {

// Solves normal_lower_tail(u) == target for u >= 0 by bisection.
double solve_tail(double target) noexcept {
  double lo = 0.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (normal_lower_tail(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double normal_quantile(double p) noexcept {
  if (std::isnan(p) || p < 0.0 || p > 1.0) return std::numeric_limits<double>::quiet_NaN();
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -solve_tail(p);
  return solve_tail(1.0 - p);
}

}  // namespace moonlab
