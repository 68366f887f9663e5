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

#ifndef MOONLAB_EVALUATOR_HPP
#define MOONLAB_EVALUATOR_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moonlab/datagen.hpp"
#include "moonlab/trainer.hpp"

namespace moonlab {

struct GroupCounts {
  std::size_t rows = 0;
  std::size_t positives = 0;
  std::size_t true_positives = 0;
  std::size_t true_negatives = 0;

  std::size_t correct() const noexcept { return true_positives + true_negatives; }
  bool operator==(const GroupCounts&) const = default;
};

struct EvalRecord {
  std::string model_id;
  double epoch = 0.0;
  HyperParams hyperparams;
  std::vector<double> group_acc;
  std::vector<double> tpr;
  std::vector<double> tnr;
  double id_acc = 0.0;
  double ood_acc = 0.0;
  // Exact tallies behind the rates; empty for exact-mode model mixtures.
  std::vector<GroupCounts> counts;
};

struct AgreementRecord {
  std::string model_a;
  std::string model_b;
  double agreement = 0.0;
  std::vector<double> group_agreement;
};

// One byte per test row: 1 if the model predicts +1.
std::vector<std::uint8_t> predictions(const ModelRecord& model, const Dataset& test);

// Sum_g weights[g] * values[g].
double mixture_value(std::span<const double> values, std::span<const double> weights);

/// Per-group accuracy, TPR and TNR on `test`, and the train/test mixture
/// accuracies id_acc = sum r_tr[g] acc[g], ood_acc = sum r_ts[g] acc[g].
/// A group without positives (negatives) reports tpr (tnr) 0. Throws
/// empty-group if a weighted group has no rows, dimension-mismatch if the
/// model and data widths differ.
EvalRecord evaluate(const ModelRecord& model, const Dataset& test, std::span<const double> r_tr,
                    std::span<const double> r_ts);

EvalRecord evaluate_predictions(std::span<const std::uint8_t> preds, const Dataset& test,
                                std::span<const double> r_tr, std::span<const double> r_ts);

AgreementRecord agreement(const ModelRecord& a, const ModelRecord& b, const Dataset& test);

// Same, from stored prediction bits. groups[i] is the group of row i.
AgreementRecord agreement_from_predictions(const std::string& id_a, std::span<const std::uint8_t> a,
                                           const std::string& id_b, std::span<const std::uint8_t> b,
                                           std::span<const std::uint32_t> groups, std::size_t k_groups);

enum class MixtureSampling { exact, sampled };

/// Randomized model that answers with `a` with probability p, else `b`.
/// Exact mode returns the expectation (every rate is p * a + (1 - p) * b);
/// sampled mode flips one seeded coin per test row.
EvalRecord model_mixture(const ModelRecord& a, const ModelRecord& b, double p, const Dataset& test,
                         std::span<const double> r_tr, std::span<const double> r_ts,
                         MixtureSampling mode, std::uint64_t seed = 0);

// n_pairs distinct unordered index pairs (i < j) drawn uniformly without
// replacement from n_models models, sorted. All pairs when n_pairs exceeds
// the number available.
std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t n_models, std::size_t n_pairs,
                                                              std::uint64_t seed);

}  // namespace moonlab

#endif  // MOONLAB_EVALUATOR_HPP
