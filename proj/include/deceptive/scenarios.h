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

#ifndef DECEPTIVE_SCENARIOS_H_
#define DECEPTIVE_SCENARIOS_H_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "deceptive/geometry.h"
#include "deceptive/model.h"

namespace deceptive {

// Unicycle navigation benchmark. State (px, py, speed, heading), control
// (acceleration, angular rate). Headings are never wrapped.
struct UnicycleScenario {
  std::array<double, 2> goal = {45.0, 0.0};
  double goal_radius = 2.5;
  double k_a = 0.1;
  double k_omega = 0.2;
  std::array<double, 4> sigma = {0.5, 0.0, 0.0, 0.5};  // row-major 2x2
  double h = 1.0;
  int horizon = 50;
  std::array<double, 4> x0 = {0.0, 0.0, 0.0, 0.0};
  RegionSet fire = DefaultFireRegions();

  // Calibrated so that about 4% of reference-policy paths avoid fire.
  static RegionSet DefaultFireRegions();

  // Throws ConfigError naming the offending field.
  void Validate() const;

  StateVector initial_state() const { return {x0[0], x0[1], x0[2], x0[3]}; }

  friend bool operator==(const UnicycleScenario&,
                         const UnicycleScenario&) = default;
};

class UnicycleDynamics : public DeterministicDynamics {
 public:
  UnicycleDynamics(double h, int horizon);

  int horizon() const override { return horizon_; }
  size_t state_dim() const override { return 4; }
  size_t control_dim() const override { return 2; }
  StateVector Next(int t, const StateVector& x,
                   const ControlVector& u) const override;

 private:
  double h_;
  int horizon_;
};

UnicycleDynamics MakeUnicycleDynamics(const UnicycleScenario& scenario);

// Mean control of the proportional reference controller at (t, x), t < T.
ControlVector UnicycleReferenceMean(const UnicycleScenario& scenario, int t,
                                    const StateVector& x);

// Gaussian reference policy around UnicycleReferenceMean.
GaussianPolicy MakeUnicycleReferencePolicy(const UnicycleScenario& scenario);

// Indicator cost: 1 for every pose t = 0..T inside the fire regions.
class FireCost : public CostModel {
 public:
  explicit FireCost(RegionSet regions) : regions_(std::move(regions)) {}

  double Stage(int, const StateVector& x,
               const ControlVector&) const override {
    return regions_.Contains(x[0], x[1]) ? 1.0 : 0.0;
  }
  double Terminal(const StateVector& x) const override {
    return regions_.Contains(x[0], x[1]) ? 1.0 : 0.0;
  }
  const RegionSet& regions() const { return regions_; }

 private:
  RegionSet regions_;
};

FireCost MakeFireCost(const UnicycleScenario& scenario);

// Owns the dynamics, reference policy and cost of one scenario.
class UnicycleModel {
 public:
  explicit UnicycleModel(const UnicycleScenario& scenario);

  const UnicycleScenario& scenario() const { return scenario_; }
  ControlProblem problem() const { return {dynamics_, reference_, cost_}; }
  const UnicycleDynamics& dynamics() const { return dynamics_; }
  const GaussianPolicy& reference() const { return reference_; }
  const FireCost& cost() const { return cost_; }

 private:
  UnicycleScenario scenario_;
  UnicycleDynamics dynamics_;
  GaussianPolicy reference_;
  FireCost cost_;
};

enum class PolicyKind { kDeceptive, kReference };

struct RunConfig {
  UnicycleScenario scenario;
  double lambda = 1.0;
  uint64_t samples = 100000;
  uint64_t episodes = 100;
  uint64_t seed = 1;
  std::string out_dir = "out";
  int threads = 1;
  PolicyKind policy = PolicyKind::kDeceptive;

  void Validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// INI-style text with [scenario] and [run] sections. Missing keys keep the
// defaults above; unknown sections or keys are rejected.
RunConfig ParseConfig(const std::string& text);
RunConfig LoadConfig(const std::string& path);
std::string SerializeConfig(const RunConfig& config);

}  // namespace deceptive

#endif  // DECEPTIVE_SCENARIOS_H_
