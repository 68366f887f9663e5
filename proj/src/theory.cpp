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

#include "moonlab/theory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "moonlab/error.hpp"
#include "moonlab/normal.hpp"
#include "moonlab/rng.hpp"

namespace moonlab {

namespace {

constexpr std::size_t kShards = 64;

struct ShardCounts {
  std::uint64_t n[2] = {0, 0};
  std::uint64_t correct[2] = {0, 0};
};

double mixture_cdf(const PopulationSpec& pop, const ScoreModel& s, double t) {
  return (1.0 - pop.p_y1) * normal_cdf((t - s.mu0) / s.s0) + pop.p_y1 * normal_cdf((t - s.mu1) / s.s1);
}

double mixture_quantile(const PopulationSpec& pop, const ScoreModel& s, double q) {
  double lo = std::min(s.mu0 - 40.0 * s.s0, s.mu1 - 40.0 * s.s1);
  double hi = std::max(s.mu0 + 40.0 * s.s0, s.mu1 + 40.0 * s.s1);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (mixture_cdf(pop, s, mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void validate(const PopulationSpec& pop) {
  if (!(pop.p_y1 > 0.0 && pop.p_y1 < 1.0)) fail(ErrorCode::invalid_argument, "p_y1 must lie in (0, 1)");
  if (!(pop.pi1 >= 0.0 && pop.pi1 <= 1.0) || !(pop.pi0 >= 0.0 && pop.pi0 <= 1.0)) {
    fail(ErrorCode::invalid_argument, "pi1 and pi0 must lie in [0, 1]");
  }
  const double pz = pop.p_z1();
  if (!(pz > 0.0 && pz < 1.0)) fail(ErrorCode::degenerate_population, "P(Z=1) must lie strictly inside (0, 1)");
}

void validate(const ScoreModel& score) {
  if (!(score.s0 > 0.0) || !(score.s1 > 0.0)) fail(ErrorCode::invalid_argument, "score deviations must be positive");
  if (!std::isfinite(score.mu0) || !std::isfinite(score.mu1) || !std::isfinite(score.s0) || !std::isfinite(score.s1)) {
    fail(ErrorCode::non_finite_input, "score model is not finite");
  }
}

double p_y1_given_z(const PopulationSpec& pop, int z) {
  validate(pop);
  const double pz = pop.p_z1();
  return z == 1 ? pop.pi1 * pop.p_y1 / pz : (1.0 - pop.pi1) * pop.p_y1 / (1.0 - pz);
}

double accuracy_gap(const PopulationSpec& pop, double tpr, double tnr) {
  validate(pop);
  const double pz = pop.p_z1();
  return pop.p_y1 * (1.0 - pop.p_y1) / (pz * (1.0 - pz)) * std::abs(pop.pi1 - pop.pi0) * std::abs(tpr - tnr);
}

double subpop_accuracy(const PopulationSpec& pop, double tpr, double tnr, int z) {
  if (z != 0 && z != 1) fail(ErrorCode::invalid_argument, "group must be 0 or 1");
  // Same value as tpr * P + tnr * (1 - P), exact when tpr == tnr.
  return tnr + (tpr - tnr) * p_y1_given_z(pop, z);
}

MonteCarloGap monte_carlo_gap(const PopulationSpec& pop, const ScoreModel& score, double threshold,
                              std::uint64_t n_samples, std::uint64_t seed, unsigned jobs) {
  validate(pop);
  validate(score);
  if (n_samples < 10000) fail(ErrorCode::invalid_argument, "monte carlo needs at least 1e4 samples");
  const double pz = pop.p_z1();
  const double py_z[2] = {p_y1_given_z(pop, 0), p_y1_given_z(pop, 1)};

  std::vector<ShardCounts> shards(kShards);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t s = next++; s < kShards; s = next++) {
      const std::uint64_t count = n_samples / kShards + (s < n_samples % kShards ? 1 : 0);
      SplitMix64 rng(derive_seed(seed, s));
      ShardCounts& c = shards[s];
      for (std::uint64_t i = 0; i < count; ++i) {
        const int z = rng.uniform() < pz ? 1 : 0;
        const int y = rng.uniform() < py_z[z] ? 1 : 0;
        const double x = y ? score.mu1 + score.s1 * rng.normal() : score.mu0 + score.s0 * rng.normal();
        const int pred = x >= threshold ? 1 : 0;
        ++c.n[z];
        if (pred == y) ++c.correct[z];
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, kShards));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  ShardCounts total;
  for (const ShardCounts& c : shards) {
    for (int z = 0; z < 2; ++z) {
      total.n[z] += c.n[z];
      total.correct[z] += c.correct[z];
    }
  }
  if (total.n[0] == 0 || total.n[1] == 0) fail(ErrorCode::empty_group_sample, "a group received no samples");
  MonteCarloGap r;
  r.n0 = total.n[0];
  r.n1 = total.n[1];
  r.acc0 = static_cast<double>(total.correct[0]) / static_cast<double>(r.n0);
  r.acc1 = static_cast<double>(total.correct[1]) / static_cast<double>(r.n1);
  r.gap = std::abs(r.acc1 - r.acc0);
  r.se = std::sqrt(r.acc1 * (1.0 - r.acc1) / static_cast<double>(r.n1) +
                   r.acc0 * (1.0 - r.acc0) / static_cast<double>(r.n0));
  return r;
}

RateRealization realize_rates(double tpr, double tnr) {
  if (!(tpr > 0.0 && tpr < 1.0 && tnr > 0.0 && tnr < 1.0)) {
    fail(ErrorCode::invalid_argument, "rates must lie strictly inside (0, 1)");
  }
  RateRealization r;
  r.score.mu0 = 0.0;
  r.score.s0 = 1.0;
  r.score.s1 = 1.0;
  r.threshold = normal_quantile(tnr);
  r.score.mu1 = r.threshold + normal_quantile(tpr);
  return r;
}

RocPoint roc_point(const PopulationSpec& pop, const ScoreModel& score, double threshold) {
  validate(score);
  RocPoint p;
  p.threshold = threshold;
  p.tpr = normal_cdf((score.mu1 - threshold) / score.s1);
  p.tnr = normal_cdf((threshold - score.mu0) / score.s0);
  p.maj_acc = subpop_accuracy(pop, p.tpr, p.tnr, 1);
  p.min_acc = subpop_accuracy(pop, p.tpr, p.tnr, 0);
  p.gap = accuracy_gap(pop, p.tpr, p.tnr);
  return p;
}

std::vector<RocPoint> roc_traverse(const PopulationSpec& pop, const ScoreModel& score, std::size_t n_thresholds) {
  validate(pop);
  validate(score);
  if (n_thresholds < 3) fail(ErrorCode::invalid_argument, "roc traversal needs at least 3 thresholds");
  std::vector<RocPoint> out;
  out.reserve(n_thresholds + 1);
  for (std::size_t i = 0; i < n_thresholds; ++i) {
    const double q = 0.001 + 0.998 * static_cast<double>(i) / static_cast<double>(n_thresholds - 1);
    out.push_back(roc_point(pop, score, mixture_quantile(pop, score, q)));
  }

  RocPoint bal;
  bal.threshold = (score.mu1 * score.s0 + score.mu0 * score.s1) / (score.s0 + score.s1);
  bal.tpr = bal.tnr = normal_cdf((score.mu1 - score.mu0) / (score.s0 + score.s1));
  bal.maj_acc = subpop_accuracy(pop, bal.tpr, bal.tnr, 1);
  bal.min_acc = subpop_accuracy(pop, bal.tpr, bal.tnr, 0);
  bal.gap = 0.0;
  auto pos = std::lower_bound(out.begin(), out.end(), bal.threshold,
                              [](const RocPoint& p, double t) { return p.threshold < t; });
  if (pos != out.end() && pos->threshold == bal.threshold) {
    *pos = bal;
  } else {
    out.insert(pos, bal);
  }
  return out;
}

}  // namespace moonlab
