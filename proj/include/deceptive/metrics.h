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

#ifndef DECEPTIVE_METRICS_H_
#define DECEPTIVE_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "deceptive/finite_problem.h"
#include "deceptive/geometry.h"
#include "deceptive/model.h"
#include "deceptive/sampler.h"

namespace deceptive {

// D(p || q) in nats for discrete distributions; +inf when p is not
// absolutely continuous with respect to q.
double KLDivergence(std::span<const double> p, std::span<const double> q);

// Half the L1 distance.
double TotalVariation(std::span<const double> p, std::span<const double> q);

// Cumulative LLR of one sampled episode: entry t is
// sum_{k<t} log(N * r_k(j_k) / r_k). Length T + 1, starts at 0.
std::vector<double> EpisodeLLR(const EpisodeRecord& record);

struct LLRSeries {
  std::vector<std::vector<double>> episodes;
  std::vector<double> mean;    // per t, across episodes
  std::vector<double> stddev;  // sample standard deviation (0 if one episode)
};

LLRSeries AggregateLLR(std::vector<std::vector<double>> cumulative);

// Fraction of paths whose every position (states[k][0], states[k][1])
// lies outside `region`. An empty path set yields 1.
double PrSafe(std::span<const Trajectory> paths, const RegionSet& region);

// Pr[X_t = x] under policy q, propagated forward from the initial state.
std::vector<std::vector<double>> StateVisitation(const FiniteKLProblem& problem,
                                                 const PolicyTables& q);

// E_q[ sum_t D(q_t(.|X_t) || R_t(.|X_t)) ] via forward visitation.
double StagewiseKL(const FiniteKLProblem& problem, const PolicyTables& q);

// One complete state-action path with its probability under q and under
// the reference, the LLR log(dQ/dR), and its path cost.
struct PathOutcome {
  double prob_q = 0.0;
  double prob_r = 0.0;
  double llr = 0.0;
  double cost = 0.0;
};

// All paths with positive probability under q or R (stochastic
// transitions included). Throws when more than `cap` partial paths would
// be visited.
std::vector<PathOutcome> EnumeratePaths(const FiniteKLProblem& problem,
                                        const PolicyTables& q,
                                        uint64_t cap = uint64_t{1} << 22);

// D(Q || R) on the full path space, from EnumeratePaths.
double JointPathKL(const FiniteKLProblem& problem, const PolicyTables& q);

// 0.5 * exp(-kl).
double BretagnolleHuberBound(double kl);

struct ThresholdPoint {
  double threshold = 0.0;
  double false_positive = 0.0;  // Pr_R[llr > c]
  double false_negative = 0.0;  // Pr_Q[llr <= c]
  bool bound_holds = false;
};

struct DetectionReport {
  double kl_estimate = 0.0;
  double bh_lower_bound = 0.5;
  std::vector<ThresholdPoint> sweep;
  double min_error_sum = 1.0;
  bool bound_holds = false;  // for every threshold
};

// Exact LLR-threshold detector performance by path enumeration.
DetectionReport DetectionSweep(const FiniteKLProblem& problem,
                               const PolicyTables& q,
                               std::span<const double> thresholds);

// `count` evenly spaced thresholds covering every finite LLR value with a
// margin of one nat on both sides.
std::vector<double> DefaultThresholds(const FiniteKLProblem& problem,
                                      const PolicyTables& q,
                                      size_t count = 200);

}  // namespace deceptive

#endif  // DECEPTIVE_METRICS_H_
