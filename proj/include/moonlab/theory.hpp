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

#ifndef MOONLAB_THEORY_HPP
#define MOONLAB_THEORY_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace moonlab {

// Binary label Y and binary attribute Z with P(Z=1|Y=1) = pi1 and
// P(Z=1|Y=0) = pi0.
struct PopulationSpec {
  double p_y1 = 0.5;
  double pi1 = 0.9;
  double pi0 = 0.1;

  double p_z1() const noexcept { return pi1 * p_y1 + pi0 * (1.0 - p_y1); }
};

// Gaussian class-conditional scores F0 = N(mu0, s0^2), F1 = N(mu1, s1^2).
struct ScoreModel {
  double mu0 = -1.0;
  double mu1 = 1.0;
  double s0 = 1.0;
  double s1 = 1.0;
};

void validate(const PopulationSpec& pop);
void validate(const ScoreModel& score);

double p_y1_given_z(const PopulationSpec& pop, int z);

/// |acc(Z=1) - acc(Z=0)| for a classifier with the given TPR and TNR:
/// p_y1 (1 - p_y1) / (p_z1 (1 - p_z1)) * |pi1 - pi0| * |TPR - TNR|.
double accuracy_gap(const PopulationSpec& pop, double tpr, double tnr);

// TPR P(Y=1|Z=z) + TNR P(Y=0|Z=z).
double subpop_accuracy(const PopulationSpec& pop, double tpr, double tnr, int z);

struct MonteCarloGap {
  double gap = 0.0;
  double se = 0.0;
  double acc1 = 0.0;
  double acc0 = 0.0;
  std::uint64_t n1 = 0;
  std::uint64_t n0 = 0;
};

/// Samples Z, then Y | Z, then the score X | Y, predicts 1 iff X >= threshold.
/// Work is split into a fixed number of shards with streams derived from
/// (seed, shard), so `jobs` never changes the result.
MonteCarloGap monte_carlo_gap(const PopulationSpec& pop, const ScoreModel& score, double threshold,
                              std::uint64_t n_samples, std::uint64_t seed, unsigned jobs = 1);

// Unit-variance score model and threshold realizing the given rates
// (both strictly inside (0, 1)).
struct RateRealization {
  ScoreModel score;
  double threshold = 0.0;
};
RateRealization realize_rates(double tpr, double tnr);

struct RocPoint {
  double threshold = 0.0;
  double tnr = 0.0;
  double tpr = 0.0;
  double maj_acc = 0.0;
  double min_acc = 0.0;
  double gap = 0.0;
};

RocPoint roc_point(const PopulationSpec& pop, const ScoreModel& score, double threshold);

/// n_thresholds quantile-uniform thresholds of the score mixture between its
/// 0.001 and 0.999 quantiles, plus the balanced threshold where TPR == TNR
/// (computed so that the two rates are bitwise equal). Ascending thresholds.
std::vector<RocPoint> roc_traverse(const PopulationSpec& pop, const ScoreModel& score, std::size_t n_thresholds);

}  // namespace moonlab

#endif  // MOONLAB_THEORY_HPP
