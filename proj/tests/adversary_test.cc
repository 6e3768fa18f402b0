// Copyright 2026 The anonview Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "anonview/adversary.h"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace anonview {
namespace {

// Pr[V | I] computed tuple by tuple, independent of the library code.
double Likelihood(int m, uint32_t instance, uint32_t view, double alpha,
                  double beta) {
  double p = 1.0;
  for (int j = 0; j < m; ++j) {
    const bool in_i = (instance >> j) & 1;
    const bool in_v = (view >> j) & 1;
    const double keep = in_i ? alpha : beta;
    p *= in_v ? keep : 1.0 - keep;
  }
  return p;
}

TEST(PosteriorIndependentTest, Examples) {
  const MechanismParams p{.alpha = 0.5, .beta = 0.005};
  EXPECT_NEAR(PosteriorIndependent(0.01, p, true).value(),
              0.5 * 0.01 / (0.5 * 0.01 + 0.005 * 0.99), 1e-15);
  EXPECT_NEAR(PosteriorIndependent(0.01, p, true).value(), 0.5025, 1e-4);
  EXPECT_EQ(PosteriorIndependent(0.0, {.alpha = 0.5, .beta = 0.1}, true).value(),
            0.0);
  for (bool present : {true, false}) {
    EXPECT_NEAR(
        PosteriorIndependent(0.3, {.alpha = 0.4, .beta = 0.4}, present).value(),
        0.3, 1e-15);
  }
  absl::StatusOr<double> impossible =
      PosteriorIndependent(0.0, {.alpha = 0.5, .beta = 0.0}, true);
  ASSERT_FALSE(impossible.ok());
  EXPECT_NE(impossible.status().message().find("event has zero probability"),
            std::string::npos);
}

TEST(PosteriorExclusiveWorstCaseTest, Examples) {
  EXPECT_EQ(PosteriorExclusiveWorstCase(0.0, {.alpha = 0.5, .beta = 0.1}).value(),
            0.0);
  EXPECT_NEAR(
      PosteriorExclusiveWorstCase(0.2, {.alpha = 0.3, .beta = 0.3}).value(),
      0.2, 1e-15);
  EXPECT_NEAR(
      PosteriorExclusiveWorstCase(0.1, {.alpha = 0.5, .beta = 0.1}).value(),
      0.5, 1e-15);
}

TEST(CheckExclusiveSafeTest, Examples) {
  const PrivacyBudget budget{.d = 0.01, .gamma = 0.2};
  ASSERT_OK_AND_ASSIGN(Verdict pass,
                       CheckExclusiveSafe({.alpha = 0.5, .beta = 0.1}, budget));
  EXPECT_TRUE(pass.pass);
  EXPECT_NEAR(
      PosteriorExclusiveWorstCase(0.01, {.alpha = 0.5, .beta = 0.1}).value(),
      0.0045 / 0.054, 1e-12);

  ASSERT_OK_AND_ASSIGN(Verdict zero,
                       CheckExclusiveSafe({.alpha = 0.5, .beta = 0.0}, budget));
  EXPECT_FALSE(zero.pass);

  const double boundary = 2.0 * (0.01 / 0.2) * (0.8 / 0.99);
  ASSERT_OK_AND_ASSIGN(
      Verdict edge, CheckExclusiveSafe({.alpha = 0.5, .beta = boundary}, budget));
  EXPECT_TRUE(edge.pass) << edge.violated;
  EXPECT_LE(PosteriorExclusiveWorstCase(0.01, {.alpha = 0.5, .beta = boundary})
                .value(),
            0.2);

  absl::StatusOr<Verdict> wrong_alpha =
      CheckExclusiveSafe({.alpha = 0.6, .beta = 0.1}, budget);
  ASSERT_FALSE(wrong_alpha.ok());
  EXPECT_NE(wrong_alpha.status().message().find("requires alpha = 1/2"),
            std::string::npos);
}

TEST(ClassifyLeakageTest, Examples) {
  const PrivacyBudget budget{.d = 0.01, .gamma = 0.2};
  EXPECT_EQ(ClassifyLeakage(0.01, 0.2, budget)->kind, LeakageKind::kNone);
  EXPECT_EQ(ClassifyLeakage(0.001, 0.5, budget)->kind, LeakageKind::kPositive);
  EXPECT_EQ(ClassifyLeakage(0.01, 1e-6, budget)->kind, LeakageKind::kNegative);
  EXPECT_EQ(ClassifyLeakage(1.0, 0.0, budget)->kind, LeakageKind::kNone);
  EXPECT_FALSE(ClassifyLeakage(0.0, 0.1, budget).ok());
  EXPECT_EQ(LeakageKindName(LeakageKind::kNegative), "negative");
}

TEST(ConversionTest, Examples) {
  EXPECT_DOUBLE_EQ(GammaFromRelative(0.3, 0.0).value(), 0.3);
  EXPECT_NEAR(GammaFromRelative(0.1, std::log(2.0)).value(), 0.2, 1e-15);
  absl::StatusOr<double> degenerate = GammaFromRelative(0.5, 1.0);
  ASSERT_FALSE(degenerate.ok());
  EXPECT_NE(degenerate.status().message().find("budget degenerate"),
            std::string::npos);

  EXPECT_NEAR(DeltaFromAbsolute(0.1, 0.2).value(), std::log(2.25), 1e-15);
  EXPECT_NEAR(DeltaFromAbsolute(0.1, 0.2).value(), 0.8109, 1e-4);
  EXPECT_LT(DeltaFromAbsolute(0.1, 0.1 + 1e-9).value(), 1e-7);
  EXPECT_FALSE(DeltaFromAbsolute(0.2, 0.1).ok());

  EXPECT_NEAR(EpsilonFromRelative(0.0).value(), 2.0 * std::log(2.0), 1e-15);
  EXPECT_NEAR(EpsilonFromRelative(std::log(2.0)).value(), 4.0 * std::log(2.0),
              1e-15);
  EXPECT_LT(EpsilonFromRelative(0.1).value(), EpsilonFromRelative(0.2).value());
}

TEST(ConversionTest, RoundTripDominatesGamma) {
  for (double d = 0.01; d < 0.9; d += 0.07) {
    for (double gamma = d + 0.01; gamma < 0.99; gamma += 0.05) {
      ASSERT_OK_AND_ASSIGN(double delta, DeltaFromAbsolute(d, gamma));
      absl::StatusOr<double> back = GammaFromRelative(d, delta);
      // d e^delta may leave (0,1); then the conversion is degenerate.
      if (back.ok()) {
        EXPECT_GE(*back, gamma - 1e-12);
      }
    }
  }
}

TEST(ImpossibilityFrontierTest, Examples) {
  EXPECT_NEAR(ImpossibilityFrontier(100, 1000000, 0.2, 1.0).value(), 0.025,
              1e-15);
  EXPECT_LT(ImpossibilityFrontier(100, 1000000, 1e-9, 1.0).value(), 1e-9);
  const double a = ImpossibilityFrontier(100, 10000, 0.3, 2.0).value();
  const double b = ImpossibilityFrontier(100, 40000, 0.3, 2.0).value();
  EXPECT_NEAR(a / b, 2.0, 1e-12);
  EXPECT_FALSE(ImpossibilityFrontier(100, 1000, 0.3, 0.0).ok());
}

TEST(ExactViewDistributionTest, Examples) {
  ASSERT_OK_AND_ASSIGN(ViewDistribution lossless,
                       ExactViewDistribution(4, 0b0101, {.alpha = 1, .beta = 0}));
  EXPECT_EQ(lossless[0b0101], 1.0);
  ASSERT_OK_AND_ASSIGN(ViewDistribution uniform,
                       ExactViewDistribution(4, 0b0011, {.alpha = 0.5, .beta = 0.5}));
  for (double p : uniform.probabilities()) EXPECT_DOUBLE_EQ(p, 1.0 / 16);
  ASSERT_OK_AND_ASSIGN(ViewDistribution two,
                       ExactViewDistribution(2, 0b01, {.alpha = 0.5, .beta = 0.25}));
  EXPECT_DOUBLE_EQ(two[0b01], 0.375);
  EXPECT_FALSE(ExactViewDistribution(21, 0, {.alpha = 0.5, .beta = 0.25}).ok());
}

TEST(ExactPosteriorTest, TwoTupleIndependentPrior) {
  ASSERT_OK_AND_ASSIGN(PriorModel prior, PriorModel::Independent(2, {0.5, 0.5}));
  const MechanismParams p{.alpha = 0.5, .beta = 0.25};
  ASSERT_OK_AND_ASSIGN(double posterior, ExactPosterior(prior, p, 0b01, 0));
  EXPECT_NEAR(posterior, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(posterior, 0.15625 / 0.234375, 1e-15);
  EXPECT_NEAR(posterior, PosteriorIndependent(0.5, p, true).value(), 1e-15);
}

TEST(ExactPosteriorTest, ExclusiveSetMatchesWorstCase) {
  const double third = 1.0 / 3.0;
  ASSERT_OK_AND_ASSIGN(
      PriorModel prior,
      PriorModel::Exclusive(3, {{{0, third}, {1, third}, {2, third}}}));
  const MechanismParams p{.alpha = 0.5, .beta = 0.1};
  ASSERT_OK_AND_ASSIGN(double posterior, ExactPosterior(prior, p, 0b001, 0));
  EXPECT_NEAR(posterior, PosteriorExclusiveWorstCase(third, p).value(), 1e-12);
}

TEST(ExactPosteriorTest, LosslessViewAndImpossibleView) {
  ASSERT_OK_AND_ASSIGN(PriorModel prior,
                       PriorModel::Independent(3, {0.2, 0.7, 0.4}));
  ASSERT_OK_AND_ASSIGN(double sure,
                       ExactPosterior(prior, {.alpha = 1, .beta = 0}, 0b011, 1));
  EXPECT_EQ(sure, 1.0);
  ASSERT_OK_AND_ASSIGN(PriorModel point, PriorModel::Explicit(3, {{0b001, 1.0}}));
  absl::StatusOr<double> impossible =
      ExactPosterior(point, {.alpha = 1, .beta = 0}, 0b010, 1);
  ASSERT_FALSE(impossible.ok());
  EXPECT_NE(impossible.status().message().find("view impossible under prior"),
            std::string::npos);
}

TEST(ExactPosteriorTest, AgreesWithDirectEnumerationOnExplicitPriors) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int m = 5;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<TupleMask, double>> instances;
    double total = 0.0;
    for (TupleMask i = 0; i < (1u << m); ++i) {
      const double w = unit(rng) < 0.5 ? 0.0 : unit(rng);
      instances.emplace_back(i, w);
      total += w;
    }
    for (auto& [mask, w] : instances) w /= total;
    ASSERT_OK_AND_ASSIGN(PriorModel prior, PriorModel::Explicit(m, instances));
    const double alpha = 0.2 + 0.7 * unit(rng);
    const double beta = 0.05 + 0.9 * unit(rng) * alpha;
    const TupleMask view = rng() % (1u << m);
    const DomainIndex t = rng() % m;
    double joint = 0.0, evidence = 0.0;
    for (const auto& [mask, w] : instances) {
      const double l = Likelihood(m, mask, view, alpha, beta) * w;
      evidence += l;
      if ((mask >> t) & 1) joint += l;
    }
    ASSERT_OK_AND_ASSIGN(double posterior,
                         ExactPosterior(prior, {.alpha = alpha, .beta = beta},
                                        view, t));
    EXPECT_NEAR(posterior, joint / evidence, 1e-12);
  }
}

TEST(PriorModelTest, MarginalsAndBounds) {
  ASSERT_OK_AND_ASSIGN(PriorModel prior,
                       PriorModel::Independent(3, {0.05, 1.0, 0.1}));
  EXPECT_TRUE(prior.IsBounded(0.1));
  EXPECT_FALSE(prior.IsBounded(0.08));
  EXPECT_DOUBLE_EQ(prior.Marginal(2), 0.1);
  EXPECT_FALSE(PriorModel::Independent(3, {0.5, 0.5}).ok());
  EXPECT_FALSE(PriorModel::Exclusive(4, {{{0, 0.5}, {1, 0.4}}}).ok());
  EXPECT_FALSE(
      PriorModel::Exclusive(4, {{{0, 0.5}, {1, 0.5}}, {{1, 1.0}}}).ok());
  ASSERT_OK_AND_ASSIGN(
      PriorModel exclusive,
      PriorModel::Exclusive(4, {{{0, 0.5}, {1, 0.5}}, {{2, 0.25}, {3, 0.75}}}));
  EXPECT_EQ(exclusive.Instances().size(), 4u);
  EXPECT_DOUBLE_EQ(exclusive.Marginal(3), 0.75);
}

TEST(StatisticalDifferenceTest, Examples) {
  std::vector<double> a = {0.5, 0.5}, b = {0.75, 0.25};
  EXPECT_DOUBLE_EQ(StatisticalDifference(a, b).value(), 0.5);
  EXPECT_DOUBLE_EQ(StatisticalDifference(a, a).value(), 0.0);
  std::vector<double> left = {1.0, 0.0}, right = {0.0, 1.0};
  EXPECT_DOUBLE_EQ(StatisticalDifference(left, right).value(), 2.0);
  std::vector<double> three = {0.2, 0.3, 0.5};
  EXPECT_FALSE(StatisticalDifference(a, three).ok());
}

TEST(StatisticalDifferenceTest, MetricProperties) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_distribution = [&]() {
    std::vector<double> p(16);
    for (double& x : p) x = unit(rng);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= total;
    return p;
  };
  for (int i = 0; i < 200; ++i) {
    const auto a = random_distribution(), b = random_distribution(),
               c = random_distribution();
    const double ab = StatisticalDifference(a, b).value();
    EXPECT_DOUBLE_EQ(ab, StatisticalDifference(b, a).value());
    EXPECT_GT(ab, 0.0);
    EXPECT_LE(ab, 2.0);
    EXPECT_LE(ab, StatisticalDifference(a, c).value() +
                      StatisticalDifference(c, b).value() + 1e-12);
  }
}

TEST(MeaningfulnessTest, Extremes) {
  ASSERT_OK_AND_ASSIGN(
      MeaningfulnessReport blind,
      MeaningfulnessExperiment(8, 2, {.alpha = 0.3, .beta = 0.3}, 0.25));
  EXPECT_EQ(blind.fraction_below, 1.0);
  EXPECT_TRUE(blind.meaningless);
  ASSERT_OK_AND_ASSIGN(
      MeaningfulnessReport lossless,
      MeaningfulnessExperiment(8, 2, {.alpha = 1.0, .beta = 0.0}, 0.25));
  EXPECT_EQ(lossless.fraction_below, 0.0);
  EXPECT_FALSE(lossless.meaningless);
  for (const QueryDifference& q : lossless.per_query) {
    EXPECT_NEAR(q.sd, 2.0, 1e-12);
    const int size = std::popcount(q.query);
    EXPECT_GE(size, 3);
    EXPECT_LE(size, 5);
  }
  EXPECT_FALSE(MeaningfulnessExperiment(13, 2, {.alpha = 1, .beta = 0}, 0.2).ok());
}

TEST(IndistinguishabilityTest, Examples) {
  EXPECT_NEAR(IndistinguishabilityEpsilon({.alpha = 0.4, .beta = 0.4}, 5, 2).value(),
              0.0, 1e-15);
  EXPECT_NEAR(IndistinguishabilityEpsilon({.alpha = 0.5, .beta = 0.1}, 5, 2).value(),
              std::log(9.0), 1e-12);
  EXPECT_TRUE(std::isinf(
      IndistinguishabilityEpsilon({.alpha = 1.0, .beta = 0.0}, 5, 2).value()));
}

TEST(IndistinguishabilityTest, DependsOnlyOnParameters) {
  const MechanismParams p{.alpha = 0.7, .beta = 0.2};
  const double reference = std::log((0.7 / 0.2) * (0.8 / 0.3));
  for (int m : {4, 6, 8}) {
    for (int n : {1, 2}) {
      EXPECT_NEAR(IndistinguishabilityEpsilon(p, m, n).value(), reference, 1e-12)
          << "m=" << m << " n=" << n;
    }
  }
}

Relation GridRelation(int rows, int cols, const std::vector<int>& cells,
                      DomainDescriptor* domain) {
  Schema schema = Schema::Create({{"r", ValueKind::kInteger},
                                  {"c", ValueKind::kInteger}})
                      .value();
  std::vector<Value> rv, cv;
  for (int64_t i = 0; i < rows; ++i) rv.push_back(Value(i));
  for (int64_t i = 0; i < cols; ++i) cv.push_back(Value(i));
  *domain = DomainDescriptor::Create(schema, {rv, cv}).value();
  std::vector<Tuple> tuples;
  for (int cell : cells) tuples.push_back(domain->Decode(cell));
  return Relation::Create(schema, tuples).value();
}

TEST(CorrelatedBreachTest, Examples) {
  DomainDescriptor domain;
  Relation instance = GridRelation(3, 4, {0, 2, 5, 7, 11}, &domain);
  ASSERT_OK_AND_ASSIGN(BreachReport lossless,
                       CorrelatedBreachDemo(instance, domain,
                                            {.alpha = 1, .beta = 0}, 1));
  EXPECT_EQ(lossless.posterior_of_s, 1.0);
  ASSERT_OK_AND_ASSIGN(BreachReport blind,
                       CorrelatedBreachDemo(instance, domain,
                                            {.alpha = 0.3, .beta = 0.3}, 1));
  EXPECT_NEAR(blind.posterior_of_s, 0.5, 1e-12);

  const double alpha = 0.5, beta = 0.05;
  ASSERT_OK_AND_ASSIGN(BreachReport report,
                       CorrelatedBreachDemo(instance, domain,
                                            {.alpha = alpha, .beta = beta}, 3));
  const uint32_t secret = (1u << 0) | (1u << 2) | (1u << 5) | (1u << 7) | (1u << 11);
  double expected = 0.0;
  for (uint32_t v = 0; v < (1u << 12); ++v) {
    const double with = Likelihood(12, secret, v, alpha, beta);
    const double without = Likelihood(12, 0, v, alpha, beta);
    expected += with * with / (with + without);
  }
  EXPECT_NEAR(report.expected_posterior, expected, 1e-12);
  EXPECT_GT(report.expected_posterior, 0.5);
}

}  // namespace
}  // namespace anonview
