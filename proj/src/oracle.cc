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

#include "deceptive/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "deceptive/metrics.h"

namespace deceptive {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double LogSumExp(std::span<const double> a) {
  double m = -kInf;
  for (double v : a) m = std::max(m, v);
  if (m == -kInf) return -kInf;
  double sum = 0.0;
  for (double v : a) sum += std::exp(v - m);
  return m + std::log(sum);
}

}  // namespace

DPolicySolution EnumerateDP(const FiniteKLProblem& problem) {
  problem.Validate();
  const int horizon = problem.horizon();
  const double lambda = problem.lambda;
  DPolicySolution sol;
  sol.value.resize(static_cast<size_t>(horizon) + 1);
  sol.policy.resize(static_cast<size_t>(horizon));
  sol.value[static_cast<size_t>(horizon)] = problem.terminal_cost;

  std::vector<double> logits;
  for (int t = horizon - 1; t >= 0; --t) {
    const size_t ti = static_cast<size_t>(t);
    const FiniteStage& s = problem.stages[ti];
    const auto& next_value = sol.value[ti + 1];
    auto& value = sol.value[ti];
    auto& policy = sol.policy[ti];
    value.assign(s.num_states, 0.0);
    policy.assign(s.num_states * s.num_actions, 0.0);
    logits.resize(s.num_actions);

    for (size_t x = 0; x < s.num_states; ++x) {
      for (size_t u = 0; u < s.num_actions; ++u) {
        const double r = s.reference[s.index(x, u)];
        if (r == 0.0) {
          logits[u] = -kInf;
          continue;
        }
        // rho_t(x, u) = C_t(x, u) + E[J_{t+1}(X')].
        double rho = s.cost[s.index(x, u)];
        for (const Successor& n : s.successors[s.index(x, u)]) {
          if (n.probability == 0.0) continue;
          rho += n.probability * next_value[n.state];
        }
        logits[u] = rho == kInf ? -kInf : std::log(r) - rho / lambda;
      }
      const double lse = LogSumExp(logits);
      if (lse == -kInf) {
        // Every allowed action is forbidden: J = +inf and Q* is arbitrary.
        value[x] = kInf;
        for (size_t u = 0; u < s.num_actions; ++u) {
          policy[s.index(x, u)] = s.reference[s.index(x, u)];
        }
        continue;
      }
      value[x] = -lambda * lse;
      for (size_t u = 0; u < s.num_actions; ++u) {
        policy[s.index(x, u)] =
            logits[u] == -kInf ? 0.0 : std::exp(logits[u] - lse);
      }
    }
  }

  sol.desirability.resize(sol.value.size());
  for (size_t t = 0; t < sol.value.size(); ++t) {
    sol.desirability[t].resize(sol.value[t].size());
    for (size_t x = 0; x < sol.value[t].size(); ++x) {
      sol.desirability[t][x] = std::exp(-sol.value[t][x] / lambda);
    }
  }
  return sol;
}

std::vector<std::vector<double>> ZRecursion(const FiniteKLProblem& problem) {
  problem.Validate();
  if (!problem.is_deterministic()) {
    throw ConfigError("the linear Z recursion needs deterministic transitions");
  }
  const int horizon = problem.horizon();
  const double lambda = problem.lambda;
  std::vector<std::vector<double>> z(static_cast<size_t>(horizon) + 1);
  auto& terminal = z[static_cast<size_t>(horizon)];
  terminal.resize(problem.terminal_cost.size());
  for (size_t x = 0; x < terminal.size(); ++x) {
    terminal[x] = std::exp(-problem.terminal_cost[x] / lambda);
  }
  for (int t = horizon - 1; t >= 0; --t) {
    const size_t ti = static_cast<size_t>(t);
    const FiniteStage& s = problem.stages[ti];
    z[ti].assign(s.num_states, 0.0);
    for (size_t x = 0; x < s.num_states; ++x) {
      double sum = 0.0;
      for (size_t u = 0; u < s.num_actions; ++u) {
        const size_t i = s.index(x, u);
        sum += s.reference[i] * std::exp(-s.cost[i] / lambda) *
               z[ti + 1][s.successors[i].front().state];
      }
      z[ti][x] = sum;
    }
  }
  return z;
}

double PathIntegralZ(const FiniteKLProblem& problem, int t, size_t x,
                     uint64_t cap) {
  problem.Validate();
  if (!problem.is_deterministic()) {
    throw ConfigError("path-integral enumeration needs deterministic transitions");
  }
  const int horizon = problem.horizon();
  if (t < 0 || t > horizon) throw ConfigError("time index out of range");
  if (x >= problem.num_states(t)) throw ConfigError("state index out of range");

  // Refuse up front so that no partial result is ever produced.
  uint64_t sequences = 1;
  for (int k = t; k < horizon; ++k) {
    const uint64_t a = problem.stages[static_cast<size_t>(k)].num_actions;
    if (sequences > cap / a) {
      throw EnumerationLimitError("enumerating action sequences from t=" +
                                  std::to_string(t) + " exceeds the cap of " +
                                  std::to_string(cap));
    }
    sequences *= a;
  }

  const double lambda = problem.lambda;
  double total = 0.0;
  auto recurse = [&](auto&& self, int k, size_t state, double prob,
                     double cost) -> void {
    if (k == horizon) {
      total += prob * std::exp(-(cost + problem.terminal_cost[state]) / lambda);
      return;
    }
    const FiniteStage& s = problem.stages[static_cast<size_t>(k)];
    for (size_t u = 0; u < s.num_actions; ++u) {
      const size_t i = s.index(state, u);
      if (s.reference[i] == 0.0) continue;
      self(self, k + 1, s.successors[i].front().state, prob * s.reference[i],
           cost + s.cost[i]);
    }
  };
  recurse(recurse, t, x, 1.0, 0.0);
  return total;
}

double KLControlObjective(const FiniteKLProblem& problem, const PolicyTables& q) {
  double expected_cost = 0.0;
  for (const PathOutcome& p : EnumeratePaths(problem, q)) {
    if (p.prob_q > 0.0) expected_cost += p.prob_q * p.cost;
  }
  return expected_cost + problem.lambda * JointPathKL(problem, q);
}

GaussianParams GaussianOneStep(const OneStepGaussian& p, double x) {
  if (!(p.q >= 0.0) || !(p.sigma2 > 0.0) || !(p.lambda > 0.0)) {
    throw ConfigError("one-step Gaussian needs q >= 0, sigma2 > 0, lambda > 0");
  }
  GaussianParams out;
  out.variance = 1.0 / (1.0 / p.sigma2 + p.q * p.b * p.b / p.lambda);
  out.mean = out.variance * (p.mu / p.sigma2 - p.q * p.a * p.b * x / p.lambda);
  return out;
}

DualityReport LegendreDualityCheck(std::span<const double> reference,
                                   std::span<const double> cost, double lambda,
                                   const std::vector<std::vector<double>>& trials,
                                   double tolerance) {
  if (reference.size() != cost.size() || reference.empty()) {
    throw ConfigError("reference and cost must be non-empty and equally sized");
  }
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  for (double r : reference) {
    if (!(r > 0.0)) throw ConfigError("reference must be strictly positive");
  }

  std::vector<double> logits(reference.size());
  for (size_t i = 0; i < reference.size(); ++i) {
    logits[i] = std::log(reference[i]) - cost[i] / lambda;
  }
  const double lse = LogSumExp(logits);

  DualityReport report;
  report.free_energy = -lambda * lse;
  report.optimal.resize(reference.size());
  for (size_t i = 0; i < reference.size(); ++i) {
    report.optimal[i] = std::exp(logits[i] - lse);
  }
  auto objective = [&](std::span<const double> p) {
    double energy = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 0.0) energy += p[i] * cost[i];
    }
    return energy + lambda * KLDivergence(p, reference);
  };
  report.optimal_objective = objective(report.optimal);

  report.min_slack = kInf;
  for (const auto& trial : trials) {
    if (trial.size() != reference.size()) {
      throw ConfigError("trial distribution has the wrong size");
    }
    report.min_slack = std::min(report.min_slack, objective(trial) - report.free_energy);
  }
  const double gap = std::abs(report.optimal_objective - report.free_energy);
  report.holds =
      (trials.empty() || report.min_slack >= -tolerance) &&
      gap <= tolerance * std::max(1.0, std::abs(report.free_energy));
  return report;
}

}  // namespace deceptive
