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

#ifndef DECEPTIVE_SAMPLER_H_
#define DECEPTIVE_SAMPLER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "deceptive/model.h"
#include "deceptive/random.h"

namespace deceptive {

// Every rollout in a batch has infinite cost, so no action can be selected.
class NoAdmissibleRollout : public std::runtime_error {
 public:
  NoAdmissibleRollout()
      : std::runtime_error("no admissible rollout: every sampled path is forbidden") {}
};

struct RolloutOptions {
  int threads = 1;
  // Keep full state/control tails. Off by default: the selector only needs
  // the first control and the tail cost of each rollout.
  bool keep_paths = false;
};

// N reference-policy tails sampled from (t, x_t).
struct RolloutBatch {
  int t = 0;
  StateVector origin;
  std::vector<ControlVector> first_controls;  // u_t(i)
  std::vector<double> tail_costs;             // C_{t:T}(i)
  std::vector<Trajectory> paths;              // only with keep_paths

  size_t size() const { return tail_costs.size(); }
};

// Seed of rollout i inside a batch. Rollouts never share a stream.
inline uint64_t RolloutSeed(uint64_t batch_seed, size_t i) {
  return DeriveSeed(batch_seed, {0x726f6c6cULL, static_cast<uint64_t>(i)});
}

RolloutBatch SampleRollouts(const ControlProblem& problem, int t,
                            const StateVector& x, size_t n,
                            uint64_t batch_seed,
                            const RolloutOptions& options = {});

// Exponentiated path weights r_t(i) = exp(-(C_{t:T}(i) - shift) / lambda),
// shift = min_i C_{t:T}(i). Forbidden rollouts keep weight 0 so indices
// stay aligned with the batch.
struct WeightTable {
  std::vector<double> weights;
  std::vector<double> cumulative;  // cumulative[i] = r(0) + ... + r(i)
  double total = 0.0;
  double cost_shift = 0.0;
  double lambda = 1.0;

  size_t size() const { return weights.size(); }

  // F_t(x) = sum of the first floor(x) weights, x in [0, N].
  double Cumulative(double x) const;

  // F_t^{-1}(d): smallest 0-based index i with cumulative[i] >= d. A draw on
  // a step boundary maps to the lower index; d <= 0 maps to the first
  // index with positive weight.
  size_t Invert(double d) const;

  double Probability(size_t i) const { return weights[i] / total; }
};

WeightTable BuildWeightTable(std::span<const double> tail_costs,
                             double lambda);
inline WeightTable BuildWeightTable(const RolloutBatch& batch, double lambda) {
  return BuildWeightTable(batch.tail_costs, lambda);
}

struct Selection {
  size_t index = 0;
  double draw = 0.0;
  ControlVector control;
};

// Draws d ~ unif[0, r_t) and returns u_t(F_t^{-1}(d)).
Selection SelectAction(const WeightTable& table, const RolloutBatch& batch,
                       RandomStream& rng);

// Selection evidence for one decision; enough to rebuild the LLR.
struct StepRecord {
  size_t selected = 0;  // 0-based rollout index j_t
  double selected_weight = 0.0;
  double total_weight = 0.0;
  size_t samples = 0;
  ControlVector control;
  StateVector state;  // x_t at which the decision was made
};

struct EpisodeRecord {
  std::vector<StepRecord> steps;
};

struct SamplerSettings {
  double lambda = 1.0;
  size_t samples = 1000;
  int threads = 1;
  bool keep_paths = false;
};

struct Decision {
  ControlVector control;
  StepRecord record;
};

// One pass of the sampling loop body: fresh batch, weights, selection.
Decision DeceptiveAction(const ControlProblem& problem, int t,
                         const StateVector& x, const SamplerSettings& settings,
                         uint64_t step_seed);

struct Episode {
  Trajectory trajectory;
  EpisodeRecord record;
};

// Closed loop from x_0 with a fresh decision at every t in [0, T).
Episode RunEpisode(const ControlProblem& problem, const StateVector& x0,
                   const SamplerSettings& settings, uint64_t episode_seed);

// Seed for decision t of an episode.
inline uint64_t StepSeed(uint64_t episode_seed, int t) {
  return DeriveSeed(episode_seed, {0x73746570ULL, static_cast<uint64_t>(t)});
}

struct ZEstimate {
  double log_value = 0.0;
  double value = 0.0;
};

// (1/N) sum_i exp(-C_{t:T}(i) / lambda), accumulated in shifted log space.
ZEstimate EstimateZ(const RolloutBatch& batch, double lambda);

}  // namespace deceptive

#endif  // DECEPTIVE_SAMPLER_H_
