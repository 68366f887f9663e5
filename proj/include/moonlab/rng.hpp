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

#ifndef MOONLAB_RNG_HPP
#define MOONLAB_RNG_HPP

#include <cstdint>
#include <span>

namespace moonlab {

// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Derives an independent stream key from a parent key and a child index.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t child) noexcept;

/// SplitMix64 stream. Every stochastic component in the library draws from
/// one of these, keyed by (seed, role, index) so results never depend on
/// scheduling order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;

  // Uniform integer on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;

  // One standard normal variate. Box-Muller: both variates of a pair are
  // used, the second is cached for the next call.
  double normal() noexcept;

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Fisher-Yates shuffle of indices with the stream above; identical on every
// platform (std::shuffle is implementation-defined).
void shuffle(std::span<std::uint32_t> items, SplitMix64& rng) noexcept;

}  // namespace moonlab

#endif  // MOONLAB_RNG_HPP
