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

#include "finite_instances.h"

#include <cmath>

namespace deceptive::testing {

std::vector<double> RandomDistribution(RandomStream& rng, size_t n) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& v : p) {
    v = 0.05 + rng.Uniform01();
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

FiniteKLProblem RandomFiniteInstance(uint64_t seed,
                                     const RandomInstanceOptions& options) {
  RandomStream rng(seed);
  auto pick = [&](size_t lo, size_t hi) {
    return lo + static_cast<size_t>(rng.Uniform01() * static_cast<double>(hi - lo + 1));
  };
  FiniteKLProblem p;
  p.lambda = options.min_lambda +
             (options.max_lambda - options.min_lambda) * rng.Uniform01();
  const int horizon = static_cast<int>(pick(static_cast<size_t>(options.min_horizon),
                                            static_cast<size_t>(options.max_horizon)));
  std::vector<size_t> states(static_cast<size_t>(horizon) + 1);
  states[0] = pick(1, options.max_states);
  for (size_t t = 1; t < states.size(); ++t) states[t] = pick(1, options.max_states);
  p.initial_state = pick(0, states[0] - 1);

  for (int t = 0; t < horizon; ++t) {
    FiniteStage s;
    s.num_states = states[static_cast<size_t>(t)];
    s.num_actions = pick(2, options.max_actions);
    const size_t next_states = states[static_cast<size_t>(t) + 1];
    for (size_t x = 0; x < s.num_states; ++x) {
      const auto row = RandomDistribution(rng, s.num_actions);
      for (size_t u = 0; u < s.num_actions; ++u) {
        s.reference.push_back(row[u]);
        s.cost.push_back(options.max_cost * rng.Uniform01());
        if (options.stochastic && next_states > 1) {
          const auto split = RandomDistribution(rng, next_states);
          std::vector<Successor> succ;
          for (size_t n = 0; n < next_states; ++n) succ.push_back({n, split[n]});
          s.successors.push_back(std::move(succ));
        } else {
          s.successors.push_back({{pick(0, next_states - 1), 1.0}});
        }
      }
    }
    p.stages.push_back(std::move(s));
  }
  for (size_t x = 0; x < states.back(); ++x) {
    p.terminal_cost.push_back(options.max_cost * rng.Uniform01());
  }
  p.Validate();
  return p;
}

FiniteKLProblem TwoActionInstance(double lambda) {
  FiniteKLProblem p;
  p.lambda = lambda;
  FiniteStage s;
  s.num_states = 1;
  s.num_actions = 2;
  s.reference = {0.5, 0.5};
  s.cost = {0.0, lambda * std::log(3.0)};
  s.successors = {{{0, 1.0}}, {{0, 1.0}}};
  p.stages.push_back(s);
  p.terminal_cost = {0.0};
  return p;
}

FiniteKLProblem WithZeroCosts(FiniteKLProblem problem) {
  for (auto& s : problem.stages) {
    for (double& c : s.cost) c = 0.0;
  }
  for (double& c : problem.terminal_cost) c = 0.0;
  return problem;
}

PolicyTables PerturbPolicy(const FiniteKLProblem& problem, const PolicyTables& q,
                           RandomStream& rng, double scale) {
  PolicyTables out = q;
  for (size_t t = 0; t < problem.stages.size(); ++t) {
    const FiniteStage& s = problem.stages[t];
    for (size_t x = 0; x < s.num_states; ++x) {
      double total = 0.0;
      for (size_t u = 0; u < s.num_actions; ++u) {
        double& v = out[t][s.index(x, u)];
        v *= std::exp(scale * (2.0 * rng.Uniform01() - 1.0));
        total += v;
      }
      for (size_t u = 0; u < s.num_actions; ++u) out[t][s.index(x, u)] /= total;
    }
  }
  return out;
}

std::string FixturePath(const std::string& name) {
  return std::string(DECEPTIVE_FIXTURE_DIR) + "/" + name;
}

}  // namespace deceptive::testing
