// Copyright 2026 The deceptive-pi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deceptive/metrics.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "deceptive/oracle.h"
#include "deceptive/sampler.h"
#include "support/finite_instances.h"

namespace deceptive {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(KLDivergenceTest, Basics) {
  const std::vector<double> r = {0.5, 0.5};
  const std::vector<double> q = {0.75, 0.25};
  EXPECT_EQ(KLDivergence(r, r), 0.0);
  EXPECT_NEAR(KLDivergence(q, r), 0.75 * std::log(1.5) + 0.25 * std::log(0.5), 1e-15);
  EXPECT_EQ(KLDivergence(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0}), kInf);
  EXPECT_EQ(KLDivergence(std::vector<double>{1.0, 0.0}, std::vector<double>{0.5, 0.5}),
            std::log(2.0));
  EXPECT_THROW(KLDivergence(r, std::vector<double>{1.0}), ConfigError);
}

TEST(TotalVariationTest, HalfL1) {
  EXPECT_DOUBLE_EQ(TotalVariation(std::vector<double>{0.75, 0.25},
                                  std::vector<double>{0.5, 0.5}),
                   0.25);
  EXPECT_EQ(TotalVariation(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0);
}

TEST(EpisodeLLRTest, SingleIncrement) {
  EpisodeRecord rec;
  StepRecord s;
  s.samples = 2;
  s.selected = 0;
  s.selected_weight = 3.0;
  s.total_weight = 4.0;
  rec.steps.push_back(s);
  const auto llr = EpisodeLLR(rec);
  ASSERT_EQ(llr.size(), 2u);
  EXPECT_EQ(llr[0], 0.0);
  EXPECT_DOUBLE_EQ(llr[1], std::log(1.5));
}

TEST(EpisodeLLRTest, EmptyAndImpossibleRecords) {
  EXPECT_EQ(EpisodeLLR({}), std::vector<double>{0.0});
  EpisodeRecord rec;
  rec.steps.push_back({0, 0.0, 1.0, 3, {}, {}});
  EXPECT_THROW(EpisodeLLR(rec), ConfigError);
  rec.steps[0] = {0, 2.0, 1.0, 3, {}, {}};
  EXPECT_THROW(EpisodeLLR(rec), ConfigError);
}

TEST(AggregateLLRTest, MeanAndSampleStddev) {
  const LLRSeries s = AggregateLLR({{0, 1, 3}, {0, 3, 5}});
  EXPECT_EQ(s.mean, (std::vector<double>{0, 2, 4}));
  EXPECT_DOUBLE_EQ(s.stddev[1], std::sqrt(2.0));
  EXPECT_EQ(s.stddev[0], 0.0);
  EXPECT_THROW(AggregateLLR({{0, 1}, {0}}), ConfigError);
  EXPECT_EQ(AggregateLLR({{0, 7}}).stddev[1], 0.0);
}

// Zero costs make every weight equal, so each increment is log(N / N) = 0.
TEST(EpisodeLLRTest, ZeroCostIncrementsVanish) {
  const FiniteKLProblem problem = LoadFiniteProblem(testing::FixturePath("zero_cost.json"));
  const FiniteModel model(problem);
  SamplerSettings settings;
  settings.samples = 50;
  for (uint64_t e = 0; e < 50; ++e) {
    const Episode ep = RunEpisode(model.problem(), {0.0}, settings, e);
    for (double v : EpisodeLLR(ep.record)) EXPECT_EQ(v, 0.0);
  }
}

// The conditional mean of one increment given the batch is
// D(r/r_t || uniform over the N samples).
TEST(EpisodeLLRTest, MeanMatchesBatchConditionalKL) {
  const FiniteKLProblem problem = testing::RandomFiniteInstance(71);
  const FiniteModel model(problem);
  const ControlProblem cp = model.problem();
  const size_t n = 20;
  const int episodes = 4000;
  double diff_sum = 0.0, diff_sq = 0.0, llr_sum = 0.0;
  for (int e = 0; e < episodes; ++e) {
    StateVector x{static_cast<double>(problem.initial_state)};
    EpisodeRecord rec;
    double kl_proxy = 0.0;
    for (int t = 0; t < problem.horizon(); ++t) {
      const uint64_t seed = DeriveSeed(9, {static_cast<uint64_t>(e), static_cast<uint64_t>(t)});
      const RolloutBatch batch = SampleRollouts(cp, t, x, n, seed);
      const WeightTable table = BuildWeightTable(batch, problem.lambda);
      std::vector<double> p(n), uniform(n, 1.0 / static_cast<double>(n));
      for (size_t i = 0; i < n; ++i) p[i] = table.Probability(i);
      kl_proxy += KLDivergence(p, uniform);
      RandomStream rng(seed + 1);
      const Selection s = SelectAction(table, batch, rng);
      rec.steps.push_back({s.index, table.weights[s.index], table.total, n, s.control, x});
      x = Step(cp.dynamics, t, x, s.control);
    }
    const double llr = EpisodeLLR(rec).back();
    llr_sum += llr;
    diff_sum += llr - kl_proxy;
    diff_sq += (llr - kl_proxy) * (llr - kl_proxy);
  }
  const double mean = diff_sum / episodes;
  const double se = std::sqrt((diff_sq / episodes - mean * mean) / episodes);
  EXPECT_GT(llr_sum / episodes, 0.0);
  EXPECT_LT(std::abs(mean), 3.0 * se);
}

TEST(PrSafeTest, Basics) {
  Trajectory inside, outside;
  inside.states = {{0, 0}, {1, 0}, {2, 0}};
  outside.states = {{0, 5}, {1, 5}, {2, 5}};
  const RegionSet region({Rect{0.5, 1.5, -1, 1}});
  EXPECT_EQ(PrSafe(std::vector<Trajectory>{inside, outside}, RegionSet()), 1.0);
  EXPECT_EQ(PrSafe(std::vector<Trajectory>{inside, inside}, region), 0.0);
  EXPECT_EQ(PrSafe(std::vector<Trajectory>{inside, outside, outside, outside}, region), 0.75);
  EXPECT_EQ(PrSafe(std::vector<Trajectory>{}, region), 1.0);
}

TEST(StagewiseKLTest, ReferenceAgainstItself) {
  const FiniteKLProblem problem = testing::RandomFiniteInstance(5);
  EXPECT_EQ(StagewiseKL(problem, ReferenceTables(problem)), 0.0);
  EXPECT_NEAR(JointPathKL(problem, ReferenceTables(problem)), 0.0, 1e-12);
}

TEST(StagewiseKLTest, TwoTermExample) {
  const FiniteKLProblem problem = testing::TwoActionInstance(1.0);
  const PolicyTables q = {{0.75, 0.25}};
  const double expected = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
  EXPECT_NEAR(StagewiseKL(problem, q), expected, 1e-15);
  EXPECT_NEAR(JointPathKL(problem, q), expected, 1e-15);
}

TEST(StagewiseKLTest, NotAbsolutelyContinuous) {
  FiniteKLProblem problem = testing::TwoActionInstance(1.0);
  problem.stages[0].reference = {1.0, 0.0};
  const PolicyTables q = {{0.5, 0.5}};
  EXPECT_EQ(StagewiseKL(problem, q), kInf);
  EXPECT_EQ(JointPathKL(problem, q), kInf);
}

TEST(StagewiseKLTest, EqualsJointPathKL) {
  for (bool stochastic : {false, true}) {
    testing::RandomInstanceOptions opts;
    opts.stochastic = stochastic;
    for (uint64_t seed = 0; seed < 30; ++seed) {
      const FiniteKLProblem problem = testing::RandomFiniteInstance(seed, opts);
      RandomStream rng(seed);
      const PolicyTables q =
          testing::PerturbPolicy(problem, EnumerateDP(problem).policy, rng, 1.0);
      const double a = StagewiseKL(problem, q);
      const double b = JointPathKL(problem, q);
      EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, std::abs(b))) << seed;
    }
  }
}

TEST(StateVisitationTest, RowsSumToOne) {
  testing::RandomInstanceOptions opts;
  opts.stochastic = true;
  const FiniteKLProblem problem = testing::RandomFiniteInstance(2, opts);
  for (const auto& mu : StateVisitation(problem, ReferenceTables(problem))) {
    double total = 0.0;
    for (double v : mu) total += v;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(EnumeratePathsTest, CapIsEnforced) {
  testing::RandomInstanceOptions opts;
  opts.min_horizon = 5;
  const FiniteKLProblem problem = testing::RandomFiniteInstance(1, opts);
  EXPECT_THROW(EnumeratePaths(problem, ReferenceTables(problem), 3), EnumerationLimitError);
}

TEST(BretagnolleHuberTest, Values) {
  EXPECT_EQ(BretagnolleHuberBound(0.0), 0.5);
  EXPECT_DOUBLE_EQ(BretagnolleHuberBound(std::log(2.0)), 0.25);
  EXPECT_THROW(BretagnolleHuberBound(-0.1), ConfigError);
  EXPECT_EQ(BretagnolleHuberBound(kInf), 0.0);
}

TEST(DetectionSweepTest, IdenticalPoliciesAreIndistinguishable) {
  const FiniteKLProblem problem = testing::RandomFiniteInstance(8);
  const PolicyTables r = ReferenceTables(problem);
  const auto thresholds = DefaultThresholds(problem, r, 50);
  const DetectionReport report = DetectionSweep(problem, r, thresholds);
  EXPECT_EQ(report.bh_lower_bound, 0.5);
  for (const ThresholdPoint& p : report.sweep) {
    EXPECT_NEAR(p.false_positive + p.false_negative, 1.0, 1e-12);
  }
  EXPECT_TRUE(report.bound_holds);
}

TEST(DetectionSweepTest, VeryLowThresholdAlwaysRejects) {
  const FiniteKLProblem problem = testing::TwoActionInstance(1.0);
  const PolicyTables q = {{0.75, 0.25}};
  const std::vector<double> c = {-1e9};
  const DetectionReport report = DetectionSweep(problem, q, c);
  EXPECT_NEAR(report.sweep[0].false_positive, 1.0, 1e-15);
  EXPECT_EQ(report.sweep[0].false_negative, 0.0);
}

TEST(DetectionSweepTest, TwoActionBound) {
  const FiniteKLProblem problem = testing::TwoActionInstance(1.0);
  const PolicyTables q = EnumerateDP(problem).policy;
  const DetectionReport report = DetectionSweep(problem, q, DefaultThresholds(problem, q));
  const double kl = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
  EXPECT_NEAR(report.kl_estimate, kl, 1e-15);
  EXPECT_NEAR(report.bh_lower_bound, 0.5 * std::exp(-kl), 1e-15);
  EXPECT_GE(report.min_error_sum, report.bh_lower_bound);
  EXPECT_TRUE(report.bound_holds);
  EXPECT_EQ(report.sweep.size(), 200u);
}

TEST(DetectionSweepTest, BoundHoldsOnRandomPolicies) {
  for (uint64_t seed = 100; seed < 120; ++seed) {
    const FiniteKLProblem problem = testing::RandomFiniteInstance(seed);
    RandomStream rng(seed);
    const PolicyTables q =
        testing::PerturbPolicy(problem, ReferenceTables(problem), rng, 2.0);
    const DetectionReport report = DetectionSweep(problem, q, DefaultThresholds(problem, q));
    EXPECT_TRUE(report.bound_holds) << seed;
  }
}

}  // namespace
}  // namespace deceptive
