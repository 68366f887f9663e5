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
#include <vector>

#include "moonlab/analysis.hpp"
#include "moonlab/rng.hpp"
#include "moonlab/theory.hpp"
#include "test_util.hpp"

namespace moonlab {
namespace {

using testing::code_of;
using testing::libm_cdf;

const PopulationSpec kPop{0.5, 0.9, 0.3};

PopulationSpec random_pop(SplitMix64& rng) {
  for (;;) {
    PopulationSpec p{0.05 + 0.9 * rng.uniform(), rng.uniform(), rng.uniform()};
    const double z = p.p_z1();
    if (z > 0.01 && z < 0.99) return p;
  }
}

TEST(Gap, DerivedExample) {
  EXPECT_NEAR(kPop.p_z1(), 0.6, 1e-15);
  EXPECT_NEAR(accuracy_gap(kPop, 0.9, 0.7), 0.125, 1e-12);
  EXPECT_NEAR(subpop_accuracy(kPop, 0.9, 0.7, 1), 0.85, 1e-12);
  EXPECT_NEAR(subpop_accuracy(kPop, 0.9, 0.7, 0), 0.725, 1e-12);
  EXPECT_NEAR(p_y1_given_z(kPop, 1), 0.75, 1e-15);
  EXPECT_NEAR(p_y1_given_z(kPop, 0), 0.125, 1e-15);
}

TEST(Gap, DecompositionIdentity) {
  SplitMix64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    const PopulationSpec p = random_pop(rng);
    const double tpr = rng.uniform(), tnr = rng.uniform();
    const double diff = std::fabs(subpop_accuracy(p, tpr, tnr, 1) - subpop_accuracy(p, tpr, tnr, 0));
    EXPECT_NEAR(diff, accuracy_gap(p, tpr, tnr), 1e-12);
  }
}

TEST(Gap, ZeroSet) {
  for (double py = 0.1; py < 1.0; py += 0.2) {
    for (double a = 0.0; a <= 1.0; a += 0.25) {
      for (double b = 0.0; b <= 1.0; b += 0.25) {
        const PopulationSpec p{py, a, b};
        if (!(p.p_z1() > 0 && p.p_z1() < 1)) continue;
        for (double tpr = 0.0; tpr <= 1.0; tpr += 0.25) {
          for (double tnr = 0.0; tnr <= 1.0; tnr += 0.25) {
            const bool zero = accuracy_gap(p, tpr, tnr) == 0.0;
            EXPECT_EQ(zero, a == b || tpr == tnr) << py << " " << a << " " << b << " " << tpr << " " << tnr;
          }
        }
      }
    }
  }
  const PopulationSpec same{0.3, 0.4, 0.4};
  EXPECT_EQ(subpop_accuracy(same, 0.8, 0.6, 1), subpop_accuracy(same, 0.8, 0.6, 0));
}

TEST(Gap, MonotoneAlongFixedAttributeMarginal) {
  const double py = 0.5, pz = 0.6;
  double prev = -1, prev_dist = -1;
  // pi0 decreasing from pz raises pi1 and |pi1 - pi0|
  for (int k = 0; k <= 20; ++k) {
    const double pi0 = 0.6 - 0.02 * k;
    const double pi1 = std::min(1.0, (pz - (1 - py) * pi0) / py);
    const PopulationSpec p{py, pi1, pi0};
    const double g = accuracy_gap(p, 0.9, 0.7);
    const double dist = std::fabs(pi1 - pi0);
    if (prev_dist >= 0) {
      EXPECT_GT(dist, prev_dist);
      EXPECT_GT(g, prev);
    }
    prev = g;
    prev_dist = dist;
  }
}

TEST(Gap, Degenerate) {
  EXPECT_EQ(code_of([] { accuracy_gap({0.5, 1.0, 1.0}, 0.9, 0.7); }), ErrorCode::degenerate_population);
  EXPECT_EQ(code_of([] { subpop_accuracy({0.5, 0.0, 0.0}, 0.9, 0.7, 1); }), ErrorCode::degenerate_population);
  EXPECT_EQ(code_of([] { validate(ScoreModel{0, 1, 0, 1}); }), ErrorCode::invalid_argument);
}

TEST(MonteCarlo, MatchesClosedFormExample) {
  const auto r = realize_rates(0.9, 0.7);
  EXPECT_NEAR(1 - libm_cdf((r.threshold - r.score.mu1) / r.score.s1), 0.9, 1e-9);
  EXPECT_NEAR(libm_cdf((r.threshold - r.score.mu0) / r.score.s0), 0.7, 1e-9);
  const auto mc = monte_carlo_gap(kPop, r.score, r.threshold, 1000000, 42);
  EXPECT_LE(std::fabs(mc.gap - 0.125), 3 * mc.se);
  EXPECT_EQ(mc.n1 + mc.n0, 1000000u);
}

TEST(MonteCarlo, ZeroCaseAndSeHalving) {
  const auto r = realize_rates(0.8, 0.6);
  const PopulationSpec indep{0.4, 0.5, 0.5};
  const auto mc = monte_carlo_gap(indep, r.score, r.threshold, 400000, 7);
  EXPECT_LE(mc.gap, 3 * mc.se);
  const auto a = monte_carlo_gap(kPop, r.score, r.threshold, 100000, 1);
  const auto b = monte_carlo_gap(kPop, r.score, r.threshold, 200000, 1);
  EXPECT_NEAR(b.se / a.se, 1 / std::sqrt(2.0), 0.2 / std::sqrt(2.0));
}

TEST(MonteCarlo, JobsInvariantAndSeeded) {
  const auto r = realize_rates(0.85, 0.75);
  const auto one = monte_carlo_gap(kPop, r.score, r.threshold, 100000, 3, 1);
  const auto four = monte_carlo_gap(kPop, r.score, r.threshold, 100000, 3, 4);
  EXPECT_EQ(one.gap, four.gap);
  EXPECT_EQ(one.n1, four.n1);
  EXPECT_NE(one.gap, monte_carlo_gap(kPop, r.score, r.threshold, 100000, 4, 1).gap);
}

TEST(MonteCarlo, Errors) {
  EXPECT_EQ(code_of([] { monte_carlo_gap(kPop, ScoreModel{}, 0.0, 9999, 1); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { monte_carlo_gap({0.5, 1.0, 1.0}, ScoreModel{}, 0.0, 10000, 1); }),
            ErrorCode::degenerate_population);
}

TEST(Roc, EndpointsAndOrder) {
  const ScoreModel s{-1, 1, 1, 1};
  const auto lo = roc_point(kPop, s, -1e6), hi = roc_point(kPop, s, 1e6);
  EXPECT_EQ(lo.tnr, 0.0);
  EXPECT_EQ(lo.tpr, 1.0);
  EXPECT_EQ(hi.tnr, 1.0);
  EXPECT_EQ(hi.tpr, 0.0);
  const auto pts = roc_traverse(kPop, s, 101);
  ASSERT_EQ(pts.size(), 102u);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_GT(pts[i].threshold, pts[i - 1].threshold);
    EXPECT_GE(pts[i].tnr, pts[i - 1].tnr);
    EXPECT_LE(pts[i].tpr, pts[i - 1].tpr);
  }
  for (const auto& p : pts) {
    EXPECT_NEAR(p.tpr, 1 - libm_cdf(p.threshold - 1), 1e-13);
    EXPECT_NEAR(p.maj_acc, subpop_accuracy(kPop, p.tpr, p.tnr, 1), 1e-15);
    EXPECT_NEAR(p.gap, accuracy_gap(kPop, p.tpr, p.tnr), 1e-12);
  }
  EXPECT_EQ(code_of([] { roc_traverse(kPop, ScoreModel{}, 2); }), ErrorCode::invalid_argument);
}

TEST(Roc, SymmetricMidpoint) {
  const auto p = roc_point(kPop, ScoreModel{-1, 1, 1, 1}, 0.0);
  EXPECT_EQ(p.tpr, p.tnr);
  EXPECT_EQ(p.gap, 0.0);
  EXPECT_EQ(p.maj_acc, p.min_acc);
}

TEST(Roc, BalancedPointExactForAsymmetricScores) {
  const ScoreModel s{0.3, 2.1, 0.7, 1.6};
  const auto pts = roc_traverse({0.35, 0.8, 0.25}, s, 21);
  int balanced = 0;
  for (const auto& p : pts) balanced += p.tpr == p.tnr && p.maj_acc == p.min_acc;
  EXPECT_GE(balanced, 1);
}

TEST(Roc, TracedCurveIsCurved) {
  const auto pts = roc_traverse(kPop, ScoreModel{-1, 1, 1, 1}, 101);
  std::vector<CurvePoint> cp;
  for (const auto& p : pts) cp.push_back({p.maj_acc, p.min_acc});
  CurveOptions o;
  o.fit_spline = false;
  const auto r = fit_curves(cp, o);
  EXPECT_GT(std::fabs(r.curvature), 0.05);
}

}  // namespace
}  // namespace moonlab
