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

#include "deceptive/sampler.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "deceptive/parallel.h"

namespace deceptive {
namespace {

void CheckLambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be positive and finite");
  }
}

constexpr size_t kRolloutChunk = 1024;

}  // namespace

RolloutBatch SampleRollouts(const ControlProblem& problem, int t,
                            const StateVector& x, size_t n,
                            uint64_t batch_seed,
                            const RolloutOptions& options) {
  const auto& dyn = problem.dynamics;
  const int horizon = dyn.horizon();
  if (n == 0) throw ConfigError("rollout count must be at least 1");
  if (t < 0 || t >= horizon) {
    throw ConfigError("rollout origin time " + std::to_string(t) +
                      " outside [0, " + std::to_string(horizon) + ")");
  }
  if (x.size() != dyn.state_dim()) {
    throw ConfigError("rollout origin has dimension " +
                      std::to_string(x.size()) + ", dynamics expects " +
                      std::to_string(dyn.state_dim()));
  }
  if (problem.reference.control_dim() != dyn.control_dim()) {
    throw ConfigError("reference policy and dynamics disagree on control dimension");
  }

  RolloutBatch batch;
  batch.t = t;
  batch.origin = x;
  batch.first_controls.resize(n);
  batch.tail_costs.resize(n);
  if (options.keep_paths) batch.paths.resize(n);

  ParallelFor(n, options.threads, kRolloutChunk, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      RandomStream rng(RolloutSeed(batch_seed, i));
      if (options.keep_paths) {
        Trajectory traj = SimulateReference(problem, t, x, rng);
        batch.first_controls[i] = traj.controls.front();
        batch.tail_costs[i] = traj.path_cost;
        batch.paths[i] = std::move(traj);
        continue;
      }
      StateVector state = x;
      double cost = 0.0;
      for (int k = t; k < horizon; ++k) {
        const ControlVector u = problem.reference.Sample(k, state, rng);
        if (k == t) batch.first_controls[i] = u;
        cost += problem.costs.Stage(k, state, u);
        if (cost == kForbiddenCost) break;
        state = dyn.Next(k, state, u);
      }
      if (cost != kForbiddenCost) cost += problem.costs.Terminal(state);
      batch.tail_costs[i] = cost;
    }
  });
  return batch;
}

double WeightTable::Cumulative(double x) const {
  if (!(x >= 1.0)) return 0.0;
  const size_t k = std::min(static_cast<size_t>(std::floor(x)), weights.size());
  return cumulative[k - 1];
}

size_t WeightTable::Invert(double d) const {
  if (d <= 0.0) {
    for (size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] > 0.0) return i;
    }
    throw NoAdmissibleRollout();
  }
  const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), d);
  if (it == cumulative.end()) {
    // Only reachable when d exceeds r_t through rounding by the caller.
    for (size_t i = weights.size(); i-- > 0;) {
      if (weights[i] > 0.0) return i;
    }
    throw NoAdmissibleRollout();
  }
  return static_cast<size_t>(it - cumulative.begin());
}

WeightTable BuildWeightTable(std::span<const double> tail_costs,
                             double lambda) {
  CheckLambda(lambda);
  if (tail_costs.empty()) throw ConfigError("weight table needs at least one rollout");

  double shift = std::numeric_limits<double>::infinity();
  for (double c : tail_costs) {
    if (std::isnan(c) || c == -std::numeric_limits<double>::infinity()) {
      throw ConfigError("rollout costs must be finite or +inf");
    }
    shift = std::min(shift, c);
  }
  if (shift == kForbiddenCost) throw NoAdmissibleRollout();

  WeightTable table;
  table.lambda = lambda;
  table.cost_shift = shift;
  table.weights.resize(tail_costs.size());
  table.cumulative.resize(tail_costs.size());
  double running = 0.0;
  for (size_t i = 0; i < tail_costs.size(); ++i) {
    const double c = tail_costs[i];
    const double w = c == kForbiddenCost ? 0.0 : std::exp(-(c - shift) / lambda);
    table.weights[i] = w;
    running += w;
    table.cumulative[i] = running;
  }
  table.total = running;
  return table;
}

Selection SelectAction(const WeightTable& table, const RolloutBatch& batch,
                       RandomStream& rng) {
  if (table.size() != batch.size()) {
    throw ConfigError("weight table and rollout batch sizes differ");
  }
  Selection s;
  s.draw = rng.Uniform01() * table.total;
  s.index = table.Invert(s.draw);
  s.control = batch.first_controls[s.index];
  return s;
}

Decision DeceptiveAction(const ControlProblem& problem, int t,
                         const StateVector& x, const SamplerSettings& settings,
                         uint64_t step_seed) {
  CheckLambda(settings.lambda);
  RolloutOptions options;
  options.threads = settings.threads;
  options.keep_paths = settings.keep_paths;
  const RolloutBatch batch =
      SampleRollouts(problem, t, x, settings.samples,
                     DeriveSeed(step_seed, {0x6261746368ULL}), options);
  const WeightTable table = BuildWeightTable(batch, settings.lambda);
  RandomStream select_rng(DeriveSeed(step_seed, {0x73656c656374ULL}));
  const Selection s = SelectAction(table, batch, select_rng);

  Decision decision;
  decision.control = s.control;
  decision.record.selected = s.index;
  decision.record.selected_weight = table.weights[s.index];
  decision.record.total_weight = table.total;
  decision.record.samples = batch.size();
  decision.record.control = s.control;
  decision.record.state = x;
  return decision;
}

Episode RunEpisode(const ControlProblem& problem, const StateVector& x0,
                   const SamplerSettings& settings, uint64_t episode_seed) {
  const int horizon = problem.dynamics.horizon();
  if (x0.size() != problem.dynamics.state_dim()) {
    throw ConfigError("initial state dimension mismatch");
  }
  Episode ep;
  ep.trajectory.start = 0;
  ep.trajectory.states.reserve(static_cast<size_t>(horizon) + 1);
  ep.trajectory.controls.reserve(static_cast<size_t>(horizon));
  ep.record.steps.reserve(static_cast<size_t>(horizon));
  ep.trajectory.states.push_back(x0);

  StateVector x = x0;
  double cost = 0.0;
  for (int t = 0; t < horizon; ++t) {
    Decision d =
        DeceptiveAction(problem, t, x, settings, StepSeed(episode_seed, t));
    cost += problem.costs.Stage(t, x, d.control);
    x = Step(problem.dynamics, t, x, d.control);
    ep.trajectory.controls.push_back(d.control);
    ep.trajectory.states.push_back(x);
    ep.record.steps.push_back(std::move(d.record));
  }
  ep.trajectory.path_cost = cost + problem.costs.Terminal(x);
  return ep;
}

ZEstimate EstimateZ(const RolloutBatch& batch, double lambda) {
  CheckLambda(lambda);
  if (batch.size() == 0) throw ConfigError("cannot estimate Z from an empty batch");
  double shift = std::numeric_limits<double>::infinity();
  for (double c : batch.tail_costs) shift = std::min(shift, c);
  if (shift == kForbiddenCost) {
    return {-std::numeric_limits<double>::infinity(), 0.0};
  }
  double sum = 0.0;
  for (double c : batch.tail_costs) {
    if (c != kForbiddenCost) sum += std::exp(-(c - shift) / lambda);
  }
  ZEstimate z;
  z.log_value = -shift / lambda + std::log(sum / static_cast<double>(batch.size()));
  z.value = std::exp(z.log_value);
  return z;
}

}  // namespace deceptive
