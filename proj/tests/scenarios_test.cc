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

#include "deceptive/scenarios.h"

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "deceptive/random.h"
#include "support/finite_instances.h"

namespace deceptive {
namespace {

double DistanceToGoal(const UnicycleScenario& s, const StateVector& x) {
  const double dx = x[0] - s.goal[0], dy = x[1] - s.goal[1];
  return std::sqrt(dx * dx + dy * dy);
}

TEST(UnicycleReferenceTest, MeanAtTheStart) {
  UnicycleScenario s;
  const ControlVector u = UnicycleReferenceMean(s, 0, {0.0, 0.0, 0.4, 0.0});
  EXPECT_DOUBLE_EQ(u[0], -0.1 * (0.4 - 0.9));
  EXPECT_DOUBLE_EQ(u[1], 0.0);
  const ControlVector turn = UnicycleReferenceMean(s, 0, {0.0, 0.0, 0.9, 0.3});
  EXPECT_DOUBLE_EQ(turn[0], 0.0);
  EXPECT_DOUBLE_EQ(turn[1], -0.2 * 0.3);
}

TEST(UnicycleReferenceTest, GoalCenterHoldsHeading) {
  UnicycleScenario s;
  const ControlVector u = UnicycleReferenceMean(s, 10, {45.0, 0.0, 0.2, 1.3});
  EXPECT_EQ(u[1], 0.0);
  EXPECT_DOUBLE_EQ(u[0], -0.1 * 0.2);
}

TEST(UnicycleReferenceTest, UndefinedAtHorizon) {
  UnicycleScenario s;
  EXPECT_THROW(UnicycleReferenceMean(s, s.horizon, s.initial_state()), ConfigError);
  EXPECT_THROW(UnicycleReferenceMean(s, -1, s.initial_state()), ConfigError);
}

TEST(UnicycleReferenceTest, MeanClosedLoopReachesGoal) {
  UnicycleScenario s;
  const UnicycleDynamics dyn = MakeUnicycleDynamics(s);
  StateVector x = s.initial_state();
  for (int t = 0; t < s.horizon; ++t) x = Step(dyn, t, x, UnicycleReferenceMean(s, t, x));
  EXPECT_LE(DistanceToGoal(s, x), s.goal_radius);
}

// Stated sanity check on the proportional controller. With the default
// covariance the heading noise accumulates to several radians over 50 steps,
// so this does not hold; kept so the gap stays visible.
TEST(UnicycleReferenceTest, NoisyClosedLoopReachesGoal) {
  UnicycleScenario s;
  const UnicycleModel model(s);
  int reached = 0;
  for (uint64_t e = 0; e < 100; ++e) {
    RandomStream rng(DeriveSeed(2024, {e}));
    const Trajectory traj = SimulateReference(model.problem(), 0, s.initial_state(), rng);
    if (DistanceToGoal(s, traj.states.back()) <= s.goal_radius) ++reached;
  }
  EXPECT_GE(reached, 95);
}

TEST(UnicycleDynamicsTest, Step) {
  const UnicycleDynamics dyn(0.5, 3);
  const StateVector y = dyn.Next(0, {1.0, 2.0, 2.0, 0.0}, {0.4, 1.0});
  EXPECT_DOUBLE_EQ(y[0], 2.0);
  EXPECT_DOUBLE_EQ(y[1], 2.0);
  EXPECT_DOUBLE_EQ(y[2], 2.2);
  EXPECT_DOUBLE_EQ(y[3], 0.5);
  EXPECT_THROW(UnicycleDynamics(0.0, 3), ConfigError);
}

TEST(FireCostTest, ClosedBoundary) {
  UnicycleScenario s;
  const FireCost cost = MakeFireCost(s);
  const ControlVector u{0.0, 0.0};
  EXPECT_EQ(cost.Stage(0, {3.0, 0.0, 0, 0}, u), 1.0);
  EXPECT_EQ(cost.Stage(0, {23.0, 20.0, 0, 0}, u), 1.0);
  EXPECT_EQ(cost.Stage(0, {2.999, 0.0, 0, 0}, u), 0.0);
  EXPECT_EQ(cost.Terminal({10.0, -20.0001, 0, 0}), 0.0);
  EXPECT_EQ(cost.Terminal({10.0, -5.0, 0, 0}), 1.0);
}

TEST(UnicycleScenarioTest, TranslationMovesPathsRigidly) {
  UnicycleScenario a;
  UnicycleScenario b = a;
  const double dx = 7.0, dy = -3.0;
  b.goal = {a.goal[0] + dx, a.goal[1] + dy};
  b.x0 = {a.x0[0] + dx, a.x0[1] + dy, a.x0[2], a.x0[3]};
  b.fire = a.fire.Translated(dx, dy);
  const UnicycleModel ma(a), mb(b);
  for (uint64_t e = 0; e < 20; ++e) {
    RandomStream ra(e), rb(e);
    const Trajectory pa = SimulateReference(ma.problem(), 0, a.initial_state(), ra);
    const Trajectory pb = SimulateReference(mb.problem(), 0, b.initial_state(), rb);
    ASSERT_EQ(pa.states.size(), pb.states.size());
    for (size_t t = 0; t < pa.states.size(); ++t) {
      EXPECT_NEAR(pb.states[t][0] - dx, pa.states[t][0], 1e-9);
      EXPECT_NEAR(pb.states[t][1] - dy, pa.states[t][1], 1e-9);
    }
    EXPECT_EQ(PathCost(ma.cost(), pa), PathCost(mb.cost(), pb));
  }
}

TEST(UnicycleScenarioTest, ValidationNamesTheField) {
  UnicycleScenario s;
  s.sigma = {1.0, 0.5, 0.4, 1.0};
  try {
    s.Validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("scenario.sigma"), std::string::npos);
  }
  s.sigma = {1.0, 2.0, 2.0, 1.0};
  EXPECT_THROW(s.Validate(), ConfigError);
  s = UnicycleScenario();
  s.goal_radius = 0.0;
  EXPECT_THROW(s.Validate(), ConfigError);
}

TEST(ConfigTest, MinimalFileKeepsDefaults) {
  const RunConfig c = ParseConfig("[run]\nlambda = 0.5\n");
  EXPECT_EQ(c.lambda, 0.5);
  EXPECT_EQ(c.scenario, UnicycleScenario());
  EXPECT_EQ(c.samples, 100000u);
}

TEST(ConfigTest, SampleFile) {
  const RunConfig c = LoadConfig(testing::FixturePath("sample_config.ini"));
  EXPECT_EQ(c.samples, 100000u);
  EXPECT_EQ(c.lambda, 2.0);
  EXPECT_EQ(c.policy, PolicyKind::kDeceptive);
  EXPECT_EQ(c.scenario.fire, UnicycleScenario::DefaultFireRegions());
  EXPECT_EQ(c.scenario, UnicycleScenario());
}

TEST(ConfigTest, RoundTrip) {
  RunConfig c;
  c.lambda = 0.123456789;
  c.samples = 17;
  c.policy = PolicyKind::kReference;
  c.scenario.fire = RegionSet({Rect{1, 2, 3, 4}, Disk{5, 6, 0.1}});
  c.scenario.sigma = {0.3, 0.1, 0.1, 0.2};
  c.out_dir = "some/dir";
  EXPECT_EQ(ParseConfig(SerializeConfig(c)), c);
}

TEST(ConfigTest, Errors) {
  auto message = [](const std::string& text) {
    try {
      ParseConfig(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("[run]\nlambda = 0\n").find("λ must be positive"), std::string::npos);
  EXPECT_NE(message("[run]\nbogus = 1\n").find("run.bogus"), std::string::npos);
  EXPECT_NE(message("[extra]\nx = 1\n").find("unknown section"), std::string::npos);
  EXPECT_NE(message("[scenario]\nsigma = 1, 0, 0\n").find("scenario.sigma"), std::string::npos);
  EXPECT_NE(message("[scenario]\nsigma = -1, 0, 0, 1\n").find("scenario.sigma"),
            std::string::npos);
  EXPECT_NE(message("[run]\nsamples = -4\n").find("run.samples"), std::string::npos);
  EXPECT_NE(message("[run]\npolicy = greedy\n").find("run.policy"), std::string::npos);
  EXPECT_THROW(LoadConfig("/nonexistent/run.ini"), ConfigError);
}

}  // namespace
}  // namespace deceptive
