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

#ifndef DECEPTIVE_FINITE_PROBLEM_H_
#define DECEPTIVE_FINITE_PROBLEM_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "deceptive/model.h"

namespace deceptive {

// Exhaustive enumeration would visit more paths than the configured cap.
class EnumerationLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Successor {
  size_t state = 0;
  double probability = 1.0;
};

// Tables for one decision epoch t. States are 0..num_states-1 at time t,
// successor states index the state set at t+1.
struct FiniteStage {
  size_t num_states = 0;
  size_t num_actions = 0;
  std::vector<double> reference;  // R_t(u|x), row-major [x][u]
  std::vector<double> cost;       // C_t(x, u), row-major [x][u]
  std::vector<std::vector<Successor>> successors;  // [x * num_actions + u]

  size_t index(size_t x, size_t u) const { return x * num_actions + u; }
};

// Small enumerable instance of the KL control problem.
struct FiniteKLProblem {
  std::vector<FiniteStage> stages;  // t = 0..T-1
  std::vector<double> terminal_cost;  // C_T over the states at time T
  double lambda = 1.0;
  size_t initial_state = 0;

  int horizon() const { return static_cast<int>(stages.size()); }
  size_t num_states(int t) const {
    return t == horizon() ? terminal_cost.size()
                          : stages[static_cast<size_t>(t)].num_states;
  }
  // Exactly one successor per (t, x, u) at every stage.
  bool is_deterministic() const;

  // Throws ConfigError on shape errors, bad probabilities or lambda <= 0.
  void Validate() const;
};

// Per-t policy tables, same layout as FiniteStage::reference.
using PolicyTables = std::vector<std::vector<double>>;

PolicyTables ReferenceTables(const FiniteKLProblem& problem);

// JSON fixture format:
// {
//   "lambda": 1.0, "initial_state": 0, "terminal_cost": [0, 0],
//   "stages": [
//     {"reference": [[0.5, 0.5], ...],      // one row per state
//      "cost": [[0, 1.1], ...],             // numbers or "inf"
//      "next": [[0, 1], ...]}               // deterministic successors, or
//     {"transitions": [[[[0, 0.3], [1, 0.7]], ...], ...]}  // [x][u] -> [[s, p]]
//   ]
// }
FiniteKLProblem ParseFiniteProblem(const std::string& json_text);
FiniteKLProblem LoadFiniteProblem(const std::string& path);

// Sampler adapters: the state is a 1-D vector holding the state index and
// the control a 1-D vector holding the action index.
class FiniteDynamics : public DeterministicDynamics {
 public:
  explicit FiniteDynamics(const FiniteKLProblem& problem);
  int horizon() const override { return problem_.horizon(); }
  size_t state_dim() const override { return 1; }
  size_t control_dim() const override { return 1; }
  StateVector Next(int t, const StateVector& x,
                   const ControlVector& u) const override;

 private:
  const FiniteKLProblem& problem_;
};

class FiniteReferencePolicy : public StochasticPolicy {
 public:
  explicit FiniteReferencePolicy(const FiniteKLProblem& problem)
      : problem_(problem) {}
  size_t control_dim() const override { return 1; }
  ControlVector Sample(int t, const StateVector& x,
                       RandomStream& rng) const override;
  double LogDensity(int t, const StateVector& x,
                    const ControlVector& u) const override;

 private:
  const FiniteKLProblem& problem_;
};

class FiniteCost : public CostModel {
 public:
  explicit FiniteCost(const FiniteKLProblem& problem) : problem_(problem) {}
  double Stage(int t, const StateVector& x,
               const ControlVector& u) const override;
  double Terminal(const StateVector& x) const override;

 private:
  const FiniteKLProblem& problem_;
};

// Bundles the three adapters; `problem` must outlive it.
class FiniteModel {
 public:
  explicit FiniteModel(const FiniteKLProblem& problem);
  ControlProblem problem() const { return {dynamics_, reference_, cost_}; }

 private:
  FiniteDynamics dynamics_;
  FiniteReferencePolicy reference_;
  FiniteCost cost_;
};

}  // namespace deceptive

#endif  // DECEPTIVE_FINITE_PROBLEM_H_
