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

#ifndef MOONLAB_NORMAL_HPP
#define MOONLAB_NORMAL_HPP

namespace moonlab {

// Standard normal CDF. Hart's double-precision rational approximation
// (absolute error below 1e-14), evaluated on |x| and reflected so that
// normal_cdf(-x) == 1 - normal_cdf(x) holds bit-for-bit and
// normal_cdf(0) == 0.5 exactly.
double normal_cdf(double x) noexcept;

// Lower tail Phi(-|x|), without the cancellation in 1 - Phi(|x|).
double normal_lower_tail(double abs_x) noexcept;

// Inverse of normal_cdf by bisection on the tail function. p must lie in
// (0, 1); returns +-infinity at the endpoints.
double normal_quantile(double p) noexcept;

}  // namespace moonlab

#endif  // MOONLAB_NORMAL_HPP
