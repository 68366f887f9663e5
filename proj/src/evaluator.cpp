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

#include "moonlab/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "moonlab/error.hpp"
#include "moonlab/rng.hpp"

namespace moonlab {

namespace {

void check_weights(std::span<const double> w, std::size_t k, const char* name) {
  if (w.size() != k) {
    std::ostringstream msg;
    msg << name << " has " << w.size() << " weights for " << k << " groups";
    fail(ErrorCode::dimension_mismatch, msg.str());
  }
}

void fill_mixtures(EvalRecord& rec, std::span<const double> r_tr, std::span<const double> r_ts) {
  rec.id_acc = mixture_value(rec.group_acc, r_tr);
  rec.ood_acc = mixture_value(rec.group_acc, r_ts);
}

}  // namespace

std::vector<std::uint8_t> predictions(const ModelRecord& model, const Dataset& test) {
  if (model.weights.size() != test.cols()) {
    std::ostringstream msg;
    msg << "model has " << model.weights.size() << " weights, data has " << test.cols() << " columns";
    fail(ErrorCode::dimension_mismatch, msg.str());
  }
  std::vector<std::uint8_t> out(test.rows());
  for (std::size_t i = 0; i < test.rows(); ++i) out[i] = predict(model, test.row(i)) > 0 ? 1 : 0;
  return out;
}

double mixture_value(std::span<const double> values, std::span<const double> weights) {
  double s = 0.0;
  for (std::size_t g = 0; g < values.size() && g < weights.size(); ++g) s += weights[g] * values[g];
  return s;
}

EvalRecord evaluate_predictions(std::span<const std::uint8_t> preds, const Dataset& test,
                                std::span<const double> r_tr, std::span<const double> r_ts) {
  const std::size_t k = test.k_groups();
  check_weights(r_tr, k, "r_tr");
  check_weights(r_ts, k, "r_ts");
  if (preds.size() != test.rows()) fail(ErrorCode::dimension_mismatch, "prediction count differs from row count");

  EvalRecord rec;
  rec.counts.assign(k, {});
  for (std::size_t i = 0; i < test.rows(); ++i) {
    GroupCounts& c = rec.counts[test.group(i)];
    ++c.rows;
    const bool positive = test.label(i) > 0;
    const bool said_positive = preds[i] != 0;
    if (positive) {
      ++c.positives;
      if (said_positive) ++c.true_positives;
    } else if (!said_positive) {
      ++c.true_negatives;
    }
  }
  rec.group_acc.resize(k);
  rec.tpr.resize(k);
  rec.tnr.resize(k);
  for (std::size_t g = 0; g < k; ++g) {
    const GroupCounts& c = rec.counts[g];
    if (c.rows == 0) {
      if (r_tr[g] > 0.0 || r_ts[g] > 0.0) {
        fail(ErrorCode::empty_group, "group " + std::to_string(g) + " has no test rows");
      }
      continue;
    }
    const std::size_t negatives = c.rows - c.positives;
    rec.group_acc[g] = static_cast<double>(c.correct()) / static_cast<double>(c.rows);
    rec.tpr[g] = c.positives ? static_cast<double>(c.true_positives) / static_cast<double>(c.positives) : 0.0;
    rec.tnr[g] = negatives ? static_cast<double>(c.true_negatives) / static_cast<double>(negatives) : 0.0;
  }
  fill_mixtures(rec, r_tr, r_ts);
  return rec;
}

EvalRecord evaluate(const ModelRecord& model, const Dataset& test, std::span<const double> r_tr,
                    std::span<const double> r_ts) {
  EvalRecord rec = evaluate_predictions(predictions(model, test), test, r_tr, r_ts);
  rec.model_id = model.model_id;
  rec.epoch = model.epoch;
  rec.hyperparams = model.hyperparams;
  return rec;
}

AgreementRecord agreement_from_predictions(const std::string& id_a, std::span<const std::uint8_t> a,
                                           const std::string& id_b, std::span<const std::uint8_t> b,
                                           std::span<const std::uint32_t> groups, std::size_t k_groups) {
  if (a.size() != b.size() || a.size() != groups.size()) {
    fail(ErrorCode::dimension_mismatch, "prediction vectors differ in length");
  }
  AgreementRecord rec;
  rec.model_a = id_a;
  rec.model_b = id_b;
  std::vector<std::size_t> same(k_groups, 0);
  std::vector<std::size_t> rows(k_groups, 0);
  std::size_t total_same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool eq = a[i] == b[i];
    ++rows[groups[i]];
    if (eq) {
      ++same[groups[i]];
      ++total_same;
    }
  }
  rec.agreement = a.empty() ? 1.0 : static_cast<double>(total_same) / static_cast<double>(a.size());
  rec.group_agreement.resize(k_groups);
  for (std::size_t g = 0; g < k_groups; ++g) {
    rec.group_agreement[g] = rows[g] ? static_cast<double>(same[g]) / static_cast<double>(rows[g]) : 1.0;
  }
  return rec;
}

AgreementRecord agreement(const ModelRecord& a, const ModelRecord& b, const Dataset& test) {
  if (a.weights.size() != b.weights.size()) fail(ErrorCode::dimension_mismatch, "models differ in width");
  return agreement_from_predictions(a.model_id, predictions(a, test), b.model_id, predictions(b, test),
                                    test.groups(), test.k_groups());
}

EvalRecord model_mixture(const ModelRecord& a, const ModelRecord& b, double p, const Dataset& test,
                         std::span<const double> r_tr, std::span<const double> r_ts,
                         MixtureSampling mode, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::invalid_argument, "mixture probability must lie in [0, 1]");
  std::ostringstream id;
  id << "mix(" << a.model_id << "," << b.model_id << "," << p << ")";

  if (mode == MixtureSampling::sampled) {
    const auto pa = predictions(a, test);
    const auto pb = predictions(b, test);
    std::vector<std::uint8_t> mixed(pa.size());
    for (std::size_t i = 0; i < mixed.size(); ++i) {
      SplitMix64 coin(derive_seed(seed, i));
      mixed[i] = coin.uniform() < p ? pa[i] : pb[i];
    }
    EvalRecord rec = evaluate_predictions(mixed, test, r_tr, r_ts);
    rec.model_id = id.str();
    return rec;
  }

  const EvalRecord ea = evaluate(a, test, r_tr, r_ts);
  const EvalRecord eb = evaluate(b, test, r_tr, r_ts);
  if (p == 0.0) return eb;
  if (p == 1.0) return ea;
  EvalRecord rec;
  rec.model_id = id.str();
  const std::size_t k = ea.group_acc.size();
  rec.group_acc.resize(k);
  rec.tpr.resize(k);
  rec.tnr.resize(k);
  for (std::size_t g = 0; g < k; ++g) {
    rec.group_acc[g] = p * ea.group_acc[g] + (1.0 - p) * eb.group_acc[g];
    rec.tpr[g] = p * ea.tpr[g] + (1.0 - p) * eb.tpr[g];
    rec.tnr[g] = p * ea.tnr[g] + (1.0 - p) * eb.tnr[g];
  }
  fill_mixtures(rec, r_tr, r_ts);
  return rec;
}

std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t n_models, std::size_t n_pairs,
                                                              std::uint64_t seed) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n_models < 2 || n_pairs == 0) return out;
  const std::uint64_t available = static_cast<std::uint64_t>(n_models) * (n_models - 1) / 2;
  const std::uint64_t want = std::min<std::uint64_t>(n_pairs, available);

  // Floyd's algorithm over linear pair indices.
  std::unordered_set<std::uint64_t> chosen;
  SplitMix64 rng(derive_seed(seed, 0x70616972ULL));
  for (std::uint64_t j = available - want; j < available; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> idx(chosen.begin(), chosen.end());
  std::sort(idx.begin(), idx.end());
  // Linear index -> (i, j): row i holds pairs (i, i+1..n-1).
  std::size_t i = 0;
  std::uint64_t row_start = 0;
  for (std::uint64_t t : idx) {
    while (t >= row_start + (n_models - 1 - i)) {
      row_start += n_models - 1 - i;
      ++i;
    }
    out.emplace_back(i, i + 1 + static_cast<std::size_t>(t - row_start));
  }
  return out;
}

}  // namespace moonlab
