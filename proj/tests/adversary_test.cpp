// Copyright 2026 The robustht Authors
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

#include "robustht/adversary.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "robustht/complexity.hpp"
#include "robustht/errors.hpp"
#include "robustht/experiments.hpp"
#include "robustht/random.hpp"

namespace robustht {
namespace {

// Unqualified Test names gtest's base class inside TEST bodies.
using HypothesisTest = robustht::Test;

TestSpec ClippedLr(Model m, double eps) {
  TestSpec s;
  s.kind = TestKind::kClippedLr;
  s.calib_model = m;
  s.calib_eps = eps;
  return s;
}

AdversarySpec Adaptive(AdversaryModel m, double eps) {
  AdversarySpec a;
  a.model = m;
  a.eps = eps;
  a.strategy = Strategy::kGreedyAdaptive;
  return a;
}

TEST(StatisticTest, ClippedLrSumsLogRatios) {
  Dist p({0.1, 0.3, 0.6});
  Dist q({0.4, 0.3, 0.3});
  HypothesisTest t = HypothesisTest::Make(p, q, ClippedLr(Model::kTv, 0.02));
  const LfdPair& l = *t.lfds();
  Sample x{0, 2, 2, 1, kBottom};
  double expected = std::log(l.p_star[0] / l.q_star[0]) +
                    2 * std::log(l.p_star[2] / l.q_star[2]);
  EXPECT_NEAR(ClippedLrStatistic(x, l), expected, 1e-14);
  EXPECT_NEAR(t.Statistic(x), expected, 1e-14);
  for (double s : t.scores()) {
    EXPECT_GE(s, std::log(l.clips.lower) - 1e-12);
    EXPECT_LE(s, std::log(l.clips.upper) + 1e-12);
  }
  EXPECT_EQ(t.ArgMinSymbol(), 0);
  EXPECT_EQ(t.ArgMaxSymbol(), 2);
  EXPECT_THROW(t.Score(3), DomainError);
}

TEST(StatisticTest, SubDegenerateSymbolForcesP) {
  Dist p({0.2, 0.5, 0.3});
  Dist q({0.5, 0.5, 0.0});
  HypothesisTest t = HypothesisTest::Make(p, q, ClippedLr(Model::kSub, 0.05));
  EXPECT_TRUE(std::isinf(t.Score(2)));
  Sample x{0, 0, 0, 0, 2};
  EXPECT_TRUE(Decide(t, t.Statistic(x), 0.99));
}

TEST(StatisticTest, TiesUseTheRandomization) {
  Dist p({0.3, 0.7});
  Dist q({0.7, 0.3});
  TestSpec s = ClippedLr(Model::kTv, 0.01);
  s.tie_randomization = 0.25;
  HypothesisTest t = HypothesisTest::Make(p, q, s);
  Sample x{0, 1};
  EXPECT_NEAR(t.Statistic(x), 0.0, 1e-15);
  EXPECT_TRUE(Decide(t, 0.0, 0.2));
  EXPECT_FALSE(Decide(t, 0.0, 0.3));
  s.tie_randomization = 1.5;
  EXPECT_THROW(HypothesisTest::Make(p, q, s), PreconditionViolated);
}

TEST(HStatisticTest, MeanGapIsHellinger) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    KeyedRng rng(41, i);
    std::size_t k = 2 + i % 7;
    Dist p = Dist::Normalized(rng.FlatDirichlet(k));
    Dist q = Dist::Normalized(rng.FlatDirichlet(k));
    auto [mp, mq] = HMeans(p, q);
    ASSERT_NEAR(mp - mq, HellingerSq(p, q), 1e-12) << i;
    HypothesisTest t = HypothesisTest::Make(p, q, TestSpec{.kind = TestKind::kHStat});
    for (double s : t.scores()) ASSERT_LE(std::abs(s), 1.0);
    ASSERT_DOUBLE_EQ(t.threshold(), 0.5 * (mp + mq));
  }
}

TEST(HStatisticTest, ExamplesAndEdgeCases) {
  Dist p({1.0, 0.0});
  Dist q({0.25, 0.75});
  // h(0) = (1 - 0.5)/(1 + 0.5), h(1) = -1.
  EXPECT_NEAR(HStatistic({0, 1}, p, q), 0.5 * (1.0 / 3.0 - 1.0), 1e-15);
  EXPECT_NEAR(HStatistic({0, kBottom}, p, q), 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(std::isnan(HStatistic({kBottom}, p, q)));
  EXPECT_THROW(HStatistic({}, p, q), PreconditionViolated);
}

TEST(HStatisticTest, MonteCarloMeanMatches) {
  Dist p({0.2, 0.3, 0.5});
  Dist q({0.4, 0.4, 0.2});
  auto [mp, mq] = HMeans(p, q);
  KeyedRng rng(43, 0);
  Sample x;
  double cdf1 = p[0], cdf2 = p[0] + p[1];
  for (int i = 0; i < 200000; ++i) {
    double u = rng.Uniform();
    x.push_back(u < cdf1 ? 0 : u < cdf2 ? 1 : 2);
  }
  EXPECT_NEAR(HStatistic(x, p, q), mp, 5e-3);
}

TEST(ScheffeTest, DecidesBySetFrequency) {
  Dist p({0.6, 0.3, 0.1});
  Dist q({0.2, 0.3, 0.5});
  // A = {0, 1}; p(A) = 0.9, q(A) = 0.5, threshold 0.7.
  EXPECT_TRUE(ScheffeTest({0, 0, 1, 0}, p, q));
  EXPECT_FALSE(ScheffeTest({2, 2, 0, 1}, p, q));
  HypothesisTest t = HypothesisTest::Make(p, q, TestSpec{.kind = TestKind::kScheffe});
  EXPECT_DOUBLE_EQ(t.threshold(), 0.7);
}

TEST(TrialTest, IdenticalTruthsGiveErrorSumNearOne) {
  Dist p({0.3, 0.7});
  Dist q({0.7, 0.3});
  HypothesisTest t = HypothesisTest::Make(p, q, TestSpec{.kind = TestKind::kHStat});
  TrialReport r = RunObliviousTrial(p, p, t, 9, 4000, 5);
  EXPECT_NEAR(r.type1 + r.type2, 1.0, 0.05);
}

TEST(TrialTest, MonteCarloMatchesExactTv) {
  Dist p({0.3, 0.7});
  Dist q({0.7, 0.3});
  HypothesisTest t = HypothesisTest::Make(p, q, ClippedLr(Model::kTv, 1e-9));
  for (int n : {1, 4, 7}) {
    TrialReport r = RunObliviousTrial(p, q, t, n, 20000, 7);
    double exact = 1.0 - ProductTv(p, q, n);
    EXPECT_NEAR(r.type1 + r.type2, exact, 4 * (r.ci1 + r.ci2)) << n;
  }
}

TEST(TrialTest, ReproducibleAcrossJobs) {
  auto [p, q] = JumpPair(0.05);
  HypothesisTest t = HypothesisTest::Make(p, q, ClippedLr(Model::kTv, 0.1));
  AdversarySpec a = Adaptive(AdversaryModel::kATv, 0.05);
  TrialReport one = RunAdversaryTrial(p, q, a, t, 200, 300, 99, 1);
  TrialReport four = RunAdversaryTrial(p, q, a, t, 200, 300, 99, 4);
  EXPECT_EQ(one, four);
  EXPECT_EQ(one, RunAdversaryTrial(p, q, a, t, 200, 300, 99, 3));
  EXPECT_FALSE(one == RunAdversaryTrial(p, q, a, t, 200, 300, 100, 1));
}

TEST(TrialTest, ZeroEpsAdaptiveEqualsClean) {
  auto [p, q] = JumpPair(0.05);
  HypothesisTest t = HypothesisTest::Make(p, q, ClippedLr(Model::kTv, 0.05));
  TrialReport clean = RunObliviousTrial(p, q, t, 50, 500, 3);
  for (AdversaryModel m :
       {AdversaryModel::kATv, AdversaryModel::kAHub, AdversaryModel::kASub}) {
    EXPECT_EQ(RunAdaptiveTrial(p, q, Adaptive(m, 0.0), t, 50, 500, 3), clean)
        << AdversaryModelName(m);
  }
  AdversarySpec obl;
  obl.model = AdversaryModel::kTv;
  obl.eps = 0.0;
  EXPECT_EQ(RunAdversaryTrial(p, q, obl, t, 50, 500, 3), clean);
}

TEST(TrialTest, GreedyReplacementOnlyAddsErrors) {
  auto [p, q] = JumpPair(0.05);
  HypothesisTest t = HypothesisTest::Make(p, q, ClippedLr(Model::kTv, 0.05));
  TrialReport clean = RunObliviousTrial(p, q, t, 60, 2000, 8);
  TrialReport adv =
      RunAdaptiveTrial(p, q, Adaptive(AdversaryModel::kATv, 0.03), t, 60, 2000, 8);
  EXPECT_GE(adv.type1, clean.type1);
  EXPECT_GE(adv.type2, clean.type2);
  TrialReport del =
      RunAdaptiveTrial(p, q, Adaptive(AdversaryModel::kASub, 0.03), t, 60, 2000, 8);
  EXPECT_GE(del.type1, clean.type1);
  EXPECT_GE(del.type2, clean.type2);
}

TEST(TrialTest, HStatisticUnderReplacementStaysWithinShift) {
  Dist p({0.2, 0.3, 0.5});
  Dist q({0.4, 0.4, 0.2});
  HypothesisTest t = HypothesisTest::Make(p, q, TestSpec{.kind = TestKind::kHStat});
  EXPECT_NO_THROW(RunAdaptiveTrial(p, q, Adaptive(AdversaryModel::kATv, 0.02),
                                   t, 500, 200, 1));
}

TEST(TrialTest, CalibratedTestSurvivesGreedyAdversaries) {
  const double eps = 0.05;
  auto [p, q] = JumpPair(eps);
  for (auto [adv, m] : {std::pair{AdversaryModel::kATv, Model::kTv},
                        std::pair{AdversaryModel::kAHub, Model::kHub}}) {
    HypothesisTest t = HypothesisTest::Make(p, q, ClippedLr(m, 2 * eps));
    const LfdPair& l = *t.lfds();
    auto n = static_cast<std::int64_t>(
        std::ceil(40.0 / HellingerSq(l.p_star, l.q_star)));
    TrialReport r = RunAdaptiveTrial(p, q, Adaptive(adv, eps), t, n, 500, 21);
    EXPECT_LE(r.type1 + r.type2, 0.2) << AdversaryModelName(adv);
  }
}

TEST(TrialTest, RejectsBadArguments) {
  Dist p({0.3, 0.7});
  Dist q({0.7, 0.3});
  HypothesisTest t = HypothesisTest::Make(p, q, TestSpec{.kind = TestKind::kHStat});
  EXPECT_THROW(RunObliviousTrial(p, q, t, 5, 0, 1), PreconditionViolated);
  EXPECT_THROW(RunObliviousTrial(Dist({1.0}), q, t, 5, 10, 1), AlphabetMismatch);
  AdversarySpec fixed;
  fixed.model = AdversaryModel::kTv;
  fixed.eps = 0.01;
  fixed.strategy = Strategy::kFixedDist;
  fixed.fixed_p = Dist({0.5, 0.5});
  fixed.fixed_q = q;
  EXPECT_THROW(RunAdversaryTrial(p, q, fixed, t, 5, 10, 1), PreconditionViolated);
  EXPECT_THROW(
      RunAdaptiveTrial(p, q, Adaptive(AdversaryModel::kTv, 0.1), t, 5, 10, 1),
      PreconditionViolated);
}

TEST(SearchTest, FarApartPairNeedsFewSamples) {
  Dist p({0.99, 0.01});
  Dist q({0.01, 0.99});
  HypothesisTest t = HypothesisTest::Make(p, q, ClippedLr(Model::kTv, 1e-6));
  AdversarySpec none;
  none.eps = 0.0;
  std::int64_t n = EmpiricalComplexitySearch(p, q, none, t, 0.1, 2000, 4);
  EXPECT_GE(n, 1);
  EXPECT_LE(n, 2);
}

TEST(SearchTest, CleanPairNearExactComplexity) {
  Dist p({0.3, 0.7});
  Dist q({0.7, 0.3});
  HypothesisTest t = HypothesisTest::Make(p, q, ClippedLr(Model::kTv, 1e-9));
  AdversarySpec none;
  none.eps = 0.0;
  std::int64_t n = EmpiricalComplexitySearch(p, q, none, t, 0.1, 20000, 6);
  EXPECT_GE(n, 15);
  EXPECT_LE(n, 19);
}

TEST(SearchTest, IndistinguishableDataExhaustsBudget) {
  Dist p({0.4, 0.6});
  Dist q({0.6, 0.4});
  HypothesisTest t = HypothesisTest::Make(p, q, TestSpec{.kind = TestKind::kScheffe});
  AdversarySpec a;
  a.model = AdversaryModel::kTv;
  a.eps = 0.1;
  a.strategy = Strategy::kFixedDist;
  a.fixed_p = Dist({0.5, 0.5});
  a.fixed_q = Dist({0.5, 0.5});
  EXPECT_THROW(EmpiricalComplexitySearch(p, q, a, t, 0.1, 200, 1, 64),
               BudgetExhausted);
}

TEST(NamesTest, RoundTrip) {
  for (AdversaryModel m :
       {AdversaryModel::kHub, AdversaryModel::kTv, AdversaryModel::kSub,
        AdversaryModel::kAHub, AdversaryModel::kATv, AdversaryModel::kASub}) {
    EXPECT_EQ(ParseAdversaryModel(AdversaryModelName(m)), m);
  }
  for (TestKind k : {TestKind::kClippedLr, TestKind::kScheffe, TestKind::kHStat}) {
    EXPECT_EQ(ParseTestKind(TestKindName(k)), k);
  }
  EXPECT_THROW(ParseTestKind("lr"), DomainError);
  EXPECT_TRUE(IsAdaptive(AdversaryModel::kASub));
  EXPECT_FALSE(IsAdaptive(AdversaryModel::kSub));
}

}  // namespace
}  // namespace robustht
