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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "moonlab/datagen.hpp"
#include "moonlab/evaluator.hpp"
#include "moonlab/rng.hpp"
#include "moonlab/trainer.hpp"
#include "test_util.hpp"

namespace moonlab {
namespace {

using testing::code_of;
using testing::small_spec;

struct Fixture {
  ShiftSpec spec = normalized(small_spec());
  Dataset train = generate(spec, Split::train);
  Dataset test = generate(spec, Split::ood_test);
  std::vector<ModelRecord> models;

  Fixture() {
    HyperParams hp;
    hp.learning_rate = 0.02;
    hp.batch_size = 0;
    hp.max_epochs = 30;
    hp.snapshot_epochs = {1, 3, 10, 30};
    models = train_models(hp);
  }
  std::vector<ModelRecord> train_models(const HyperParams& hp) { return moonlab::train(train, hp); }
};

TEST(Evaluate, MixtureArithmetic) {
  const std::vector<double> acc = {0.6, 0.8};
  EXPECT_NEAR(mixture_value(acc, std::vector<double>{0.1, 0.9}), 0.78, 1e-15);
  EXPECT_NEAR(mixture_value(acc, std::vector<double>{0.5, 0.5}), 0.70, 1e-15);
}

TEST(Evaluate, ConstantPositiveClassifier) {
  Fixture f;
  ModelRecord m;
  m.weights.assign(f.test.cols(), 0.0);
  m.bias = 1.0;
  const EvalRecord e = evaluate(m, f.test, f.spec.r_tr, f.spec.r_ts);
  for (std::size_t g = 0; g < 2; ++g) {
    const auto& c = e.counts[g];
    EXPECT_DOUBLE_EQ(e.group_acc[g], static_cast<double>(c.positives) / c.rows);
    EXPECT_EQ(e.tpr[g], 1.0);
    EXPECT_EQ(e.tnr[g], 0.0);
  }
}

TEST(Evaluate, DecompositionIdentityByCounting) {
  Fixture f;
  for (const auto& m : f.models) {
    const EvalRecord e = evaluate(m, f.test, f.spec.r_tr, f.spec.r_ts);
    std::size_t direct = 0;
    for (std::size_t i = 0; i < f.test.rows(); ++i) direct += predict(m, f.test.row(i)) == f.test.label(i);
    std::size_t recon = 0;
    for (std::size_t g = 0; g < 2; ++g) {
      const auto& c = e.counts[g];
      const double pos = static_cast<double>(c.positives) / c.rows;
      EXPECT_NEAR(e.group_acc[g], e.tpr[g] * pos + e.tnr[g] * (1 - pos), 1e-15);
      recon += c.true_positives + c.true_negatives;
    }
    EXPECT_EQ(recon, direct);
    EXPECT_DOUBLE_EQ(e.id_acc, f.spec.r_tr[0] * e.group_acc[0] + f.spec.r_tr[1] * e.group_acc[1]);
    EXPECT_DOUBLE_EQ(e.ood_acc, 0.5 * e.group_acc[0] + 0.5 * e.group_acc[1]);
  }
}

TEST(Evaluate, CoreOracleSymmetricWhenIndependent) {
  // Per seed |maj - min| <= 2 pooled SE holds with probability ~0.95; check
  // the exceedance rate and the mean signed z over 40 seeds.
  int outside = 0;
  double z_sum = 0.0;
  const int seeds = 40;
  for (int seed = 1; seed <= seeds; ++seed) {
    ShiftSpec s = small_spec(seed);
    s.mode = MixtureMode::correlation;
    s.pi1 = s.pi0 = 0.6;
    s.n_ood_test = 20000;
    const auto spec = normalized(s);
    const EvalRecord e = evaluate(oracle_classifier(s, OracleMode::core_only), generate(s, Split::ood_test),
                                  spec.r_tr, spec.r_ts);
    const double p = 0.5 * (e.group_acc[0] + e.group_acc[1]);
    const double pooled = std::sqrt(p * (1 - p) * (1.0 / e.counts[0].rows + 1.0 / e.counts[1].rows));
    const double z = (e.group_acc[1] - e.group_acc[0]) / pooled;
    outside += std::fabs(z) > 2.0;
    z_sum += z;
  }
  EXPECT_LE(outside, 6);
  EXPECT_LE(std::fabs(z_sum / seeds), 3.0 / std::sqrt(seeds));
}

TEST(Evaluate, Errors) {
  Fixture f;
  ModelRecord narrow;
  narrow.weights = {1.0};
  EXPECT_EQ(code_of([&] { evaluate(narrow, f.test, f.spec.r_tr, f.spec.r_ts); }), ErrorCode::dimension_mismatch);
  Dataset lonely(3, f.test.cols(), Split::ood_test, 2);
  EXPECT_EQ(code_of([&] { evaluate(f.models[0], lonely, f.spec.r_tr, f.spec.r_ts); }), ErrorCode::empty_group);
}

TEST(Agreement, IdentitySymmetryAndFlip) {
  Fixture f;
  const ModelRecord& m = f.models.back();
  EXPECT_EQ(agreement(m, m, f.test).agreement, 1.0);
  for (std::size_t i = 0; i < f.models.size(); ++i) {
    for (std::size_t j = 0; j < f.models.size(); ++j) {
      EXPECT_EQ(agreement(f.models[i], f.models[j], f.test).agreement,
                agreement(f.models[j], f.models[i], f.test).agreement);
    }
  }
  ModelRecord flipped = m;
  for (double& w : flipped.weights) w = -w;
  flipped.bias = -flipped.bias;
  EXPECT_EQ(agreement(m, flipped, f.test).agreement, 0.0);
}

TEST(Agreement, LowerBoundFromAccuracies) {
  Fixture f;
  const std::vector<double> uniform = {0.5, 0.5};
  for (const auto& a : f.models) {
    for (const auto& b : f.models) {
      const double acc_a = evaluate(a, f.test, uniform, uniform).ood_acc;
      const double acc_b = evaluate(b, f.test, uniform, uniform).ood_acc;
      EXPECT_GE(agreement(a, b, f.test).agreement + 1e-12, acc_a + acc_b - 1.0);
    }
  }
}

TEST(Agreement, IndependentErrorsOracle) {
  const std::size_t n = 100000;
  const double a1 = 0.8, a2 = 0.65;
  std::vector<std::uint8_t> truth(n), p1(n), p2(n);
  std::vector<std::uint32_t> groups(n, 0);
  SplitMix64 rng(17);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = rng.uniform() < 0.5;
    p1[i] = rng.uniform() < a1 ? truth[i] : 1 - truth[i];
    p2[i] = rng.uniform() < a2 ? truth[i] : 1 - truth[i];
  }
  const double expected = a1 * a2 + (1 - a1) * (1 - a2);
  const double got = agreement_from_predictions("a", p1, "b", p2, groups, 1).agreement;
  EXPECT_NEAR(got, expected, 3 * std::sqrt(expected * (1 - expected) / n));
}

TEST(Mixture, ExactEndpointsAndLinearity) {
  Fixture f;
  const ModelRecord& a = f.models.back();
  const ModelRecord& b = f.models.front();
  const auto ea = evaluate(a, f.test, f.spec.r_tr, f.spec.r_ts);
  const auto eb = evaluate(b, f.test, f.spec.r_tr, f.spec.r_ts);
  const auto m0 = model_mixture(a, b, 0.0, f.test, f.spec.r_tr, f.spec.r_ts, MixtureSampling::exact);
  EXPECT_EQ(m0.group_acc, eb.group_acc);
  EXPECT_EQ(m0.model_id, eb.model_id);
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto m = model_mixture(a, b, p, f.test, f.spec.r_tr, f.spec.r_ts, MixtureSampling::exact);
    // distance of (maj, min) from the chord between the endpoints
    const double dx = ea.group_acc[1] - eb.group_acc[1], dy = ea.group_acc[0] - eb.group_acc[0];
    const double cross = dx * (m.group_acc[0] - eb.group_acc[0]) - dy * (m.group_acc[1] - eb.group_acc[1]);
    EXPECT_LT(std::fabs(cross) / std::hypot(dx, dy), 1e-12);
    EXPECT_NEAR(m.group_acc[1], p * ea.group_acc[1] + (1 - p) * eb.group_acc[1], 1e-15);
  }
}

TEST(Mixture, HalfwayExample) {
  // Two synthetic predictors with majority accuracies 0.9 and 0.7.
  Dataset d(20, 1, Split::ood_test, 2);
  for (std::size_t i = 0; i < 20; ++i) {
    d.set_group(i, i < 10 ? 1 : 0);
    d.set_label(i, 1);
    d.row(i)[0] = static_cast<double>(i % 10);
  }
  ModelRecord a, b;
  a.weights = {-1.0};
  a.bias = 8.5;  // correct on x <= 8: 9 of 10
  b.weights = {-1.0};
  b.bias = 6.5;  // 7 of 10
  const std::vector<double> w = {0.5, 0.5};
  const auto m = model_mixture(a, b, 0.5, d, w, w, MixtureSampling::exact);
  EXPECT_NEAR(m.group_acc[1], 0.8, 1e-15);
}

TEST(Mixture, SampledWithinBinomialError) {
  ShiftSpec s = small_spec();
  s.n_ood_test = 10000;
  s = normalized(s);
  const Dataset test = generate(s, Split::ood_test);
  HyperParams hp;
  hp.learning_rate = 0.02;
  hp.max_epochs = 20;
  hp.snapshot_epochs = {1, 20};
  const auto models = train(generate(s, Split::train), hp);
  const double p = 0.3;
  const auto exact = model_mixture(models[1], models[0], p, test, s.r_tr, s.r_ts, MixtureSampling::exact);
  int outside = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto m = model_mixture(models[1], models[0], p, test, s.r_tr, s.r_ts, MixtureSampling::sampled, seed);
    for (std::size_t g = 0; g < 2; ++g) {
      const double bound = 3 * std::sqrt(p * (1 - p) / m.counts[g].rows);
      outside += std::fabs(m.group_acc[g] - exact.group_acc[g]) > bound;
    }
  }
  EXPECT_EQ(outside, 0);
}

TEST(Mixture, RejectsBadProbability) {
  Fixture f;
  EXPECT_EQ(code_of([&] {
              model_mixture(f.models[0], f.models[1], 1.5, f.test, f.spec.r_tr, f.spec.r_ts, MixtureSampling::exact);
            }),
            ErrorCode::invalid_argument);
}

TEST(Pairs, DistinctSortedAndSeeded) {
  const auto p = sample_pairs(40, 100, 5);
  ASSERT_EQ(p.size(), 100u);
  std::set<std::pair<std::size_t, std::size_t>> uniq(p.begin(), p.end());
  EXPECT_EQ(uniq.size(), 100u);
  EXPECT_TRUE(std::is_sorted(p.begin(), p.end()));
  for (auto [i, j] : p) {
    EXPECT_LT(i, j);
    EXPECT_LT(j, 40u);
  }
  EXPECT_EQ(p, sample_pairs(40, 100, 5));
  EXPECT_NE(p, sample_pairs(40, 100, 6));
  EXPECT_EQ(sample_pairs(5, 100, 1).size(), 10u);
  EXPECT_TRUE(sample_pairs(1, 3, 1).empty());
}

TEST(Pairs, RoughlyUniform) {
  // Every pair of 6 models appears about equally often across seeds.
  std::vector<int> hits(15, 0);
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    for (auto [i, j] : sample_pairs(6, 3, seed)) {
      const std::size_t idx = i * (11 - i) / 2 + (j - i - 1);
      ++hits[idx];
    }
  }
  for (int h : hits) EXPECT_NEAR(h, 600, 5 * std::sqrt(600.0));
}

}  // namespace
}  // namespace moonlab
