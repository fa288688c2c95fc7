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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace deceptive {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckPolicyShape(const FiniteKLProblem& problem, const PolicyTables& q) {
  if (q.size() != problem.stages.size()) {
    throw ConfigError("policy has " + std::to_string(q.size()) +
                      " stages, problem has " +
                      std::to_string(problem.stages.size()));
  }
  for (size_t t = 0; t < q.size(); ++t) {
    const auto& s = problem.stages[t];
    if (q[t].size() != s.num_states * s.num_actions) {
      throw ConfigError("policy table " + std::to_string(t) + " has the wrong shape");
    }
  }
}

}  // namespace

double KLDivergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ConfigError("KL arguments differ in size");
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

double TotalVariation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ConfigError("TV arguments differ in size");
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

std::vector<double> EpisodeLLR(const EpisodeRecord& record) {
  std::vector<double> cum;
  cum.reserve(record.steps.size() + 1);
  cum.push_back(0.0);
  for (const StepRecord& s : record.steps) {
    if (!(s.selected_weight > 0.0) || !(s.total_weight >= s.selected_weight)) {
      throw ConfigError("episode record has an impossible selection weight");
    }
    cum.push_back(cum.back() + std::log(static_cast<double>(s.samples) *
                                        s.selected_weight / s.total_weight));
  }
  return cum;
}

LLRSeries AggregateLLR(std::vector<std::vector<double>> cumulative) {
  LLRSeries series;
  series.episodes = std::move(cumulative);
  if (series.episodes.empty()) return series;
  const size_t len = series.episodes.front().size();
  for (const auto& e : series.episodes) {
    if (e.size() != len) throw ConfigError("LLR series have different lengths");
  }
  const double n = static_cast<double>(series.episodes.size());
  series.mean.assign(len, 0.0);
  series.stddev.assign(len, 0.0);
  for (size_t t = 0; t < len; ++t) {
    double sum = 0.0;
    for (const auto& e : series.episodes) sum += e[t];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& e : series.episodes) ss += (e[t] - mean) * (e[t] - mean);
    series.mean[t] = mean;
    series.stddev[t] = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return series;
}

double PrSafe(std::span<const Trajectory> paths, const RegionSet& region) {
  if (paths.empty()) return 1.0;
  size_t safe = 0;
  for (const Trajectory& p : paths) {
    const bool hit = std::any_of(p.states.begin(), p.states.end(),
                                 [&](const StateVector& x) {
                                   return region.Contains(x[0], x[1]);
                                 });
    if (!hit) ++safe;
  }
  return static_cast<double>(safe) / static_cast<double>(paths.size());
}

std::vector<std::vector<double>> StateVisitation(const FiniteKLProblem& problem,
                                                 const PolicyTables& q) {
  CheckPolicyShape(problem, q);
  const int horizon = problem.horizon();
  std::vector<std::vector<double>> mu(static_cast<size_t>(horizon) + 1);
  mu[0].assign(problem.num_states(0), 0.0);
  mu[0][problem.initial_state] = 1.0;
  for (int t = 0; t < horizon; ++t) {
    const FiniteStage& s = problem.stages[static_cast<size_t>(t)];
    auto& next = mu[static_cast<size_t>(t) + 1];
    next.assign(problem.num_states(t + 1), 0.0);
    for (size_t x = 0; x < s.num_states; ++x) {
      const double px = mu[static_cast<size_t>(t)][x];
      if (px == 0.0) continue;
      for (size_t u = 0; u < s.num_actions; ++u) {
        const double pu = q[static_cast<size_t>(t)][s.index(x, u)];
        if (pu == 0.0) continue;
        for (const Successor& n : s.successors[s.index(x, u)]) {
          next[n.state] += px * pu * n.probability;
        }
      }
    }
  }
  return mu;
}

double StagewiseKL(const FiniteKLProblem& problem, const PolicyTables& q) {
  const auto mu = StateVisitation(problem, q);
  double total = 0.0;
  for (size_t t = 0; t < problem.stages.size(); ++t) {
    const FiniteStage& s = problem.stages[t];
    for (size_t x = 0; x < s.num_states; ++x) {
      if (mu[t][x] == 0.0) continue;
      const std::span<const double> qx(q[t].data() + s.index(x, 0), s.num_actions);
      const std::span<const double> rx(s.reference.data() + s.index(x, 0),
                                       s.num_actions);
      const double kl = KLDivergence(qx, rx);
      if (kl == kInf) return kInf;
      total += mu[t][x] * kl;
    }
  }
  return total;
}

std::vector<PathOutcome> EnumeratePaths(const FiniteKLProblem& problem,
                                        const PolicyTables& q, uint64_t cap) {
  CheckPolicyShape(problem, q);
  std::vector<PathOutcome> out;
  uint64_t visited = 0;
  const int horizon = problem.horizon();

  // Depth-first over (action, successor) choices.
  auto recurse = [&](auto&& self, int t, size_t x, double pq, double pr,
                     double llr, double cost) -> void {
    if (++visited > cap) {
      throw EnumerationLimitError("path enumeration exceeds the cap of " +
                              std::to_string(cap) + " partial paths");
    }
    if (t == horizon) {
      out.push_back({pq, pr, llr, cost + problem.terminal_cost[x]});
      return;
    }
    const FiniteStage& s = problem.stages[static_cast<size_t>(t)];
    for (size_t u = 0; u < s.num_actions; ++u) {
      const double qu = q[static_cast<size_t>(t)][s.index(x, u)];
      const double ru = s.reference[s.index(x, u)];
      if (qu == 0.0 && ru == 0.0) continue;
      double step_llr;
      if (qu == 0.0) {
        step_llr = -kInf;
      } else if (ru == 0.0) {
        step_llr = kInf;
      } else {
        step_llr = std::log(qu / ru);
      }
      // Infinite LLRs are sticky; mixing +inf and -inf cannot happen on one
      // path because a path with q = 0 and r = 0 is skipped.
      const double next_llr =
          std::isinf(llr) ? llr : (std::isinf(step_llr) ? step_llr : llr + step_llr);
      for (const Successor& n : s.successors[s.index(x, u)]) {
        if (n.probability == 0.0) continue;
        const double nq = pq * qu * n.probability;
        const double nr = pr * ru * n.probability;
        if (nq == 0.0 && nr == 0.0) continue;
        self(self, t + 1, n.state, nq, nr, next_llr,
             cost + s.cost[s.index(x, u)]);
      }
    }
  };
  recurse(recurse, 0, problem.initial_state, 1.0, 1.0, 0.0, 0.0);
  return out;
}

double JointPathKL(const FiniteKLProblem& problem, const PolicyTables& q) {
  double kl = 0.0;
  for (const PathOutcome& p : EnumeratePaths(problem, q)) {
    if (p.prob_q == 0.0) continue;
    if (p.llr == kInf) return kInf;
    kl += p.prob_q * p.llr;
  }
  return kl;
}

double BretagnolleHuberBound(double kl) {
  if (!(kl >= 0.0)) throw ConfigError("KL divergence must be non-negative");
  return 0.5 * std::exp(-kl);
}

DetectionReport DetectionSweep(const FiniteKLProblem& problem,
                               const PolicyTables& q,
                               std::span<const double> thresholds) {
  const std::vector<PathOutcome> paths = EnumeratePaths(problem, q);
  DetectionReport report;
  double kl = 0.0;
  for (const PathOutcome& p : paths) {
    if (p.prob_q == 0.0) continue;
    kl = p.llr == kInf ? kInf : kl + p.prob_q * p.llr;
    if (kl == kInf) break;
  }
  // Rounding can leave a tiny negative value when Q = R.
  report.kl_estimate = std::max(kl, 0.0);
  report.bh_lower_bound = BretagnolleHuberBound(report.kl_estimate);
  report.bound_holds = true;
  report.min_error_sum = kInf;
  report.sweep.reserve(thresholds.size());
  for (double c : thresholds) {
    ThresholdPoint pt;
    pt.threshold = c;
    for (const PathOutcome& p : paths) {
      if (p.llr > c) {
        pt.false_positive += p.prob_r;
      } else {
        pt.false_negative += p.prob_q;
      }
    }
    pt.bound_holds =
        pt.false_positive + pt.false_negative >= report.bh_lower_bound;
    report.bound_holds = report.bound_holds && pt.bound_holds;
    report.min_error_sum =
        std::min(report.min_error_sum, pt.false_positive + pt.false_negative);
    report.sweep.push_back(pt);
  }
  return report;
}

std::vector<double> DefaultThresholds(const FiniteKLProblem& problem,
                                      const PolicyTables& q, size_t count) {
  double lo = kInf;
  double hi = -kInf;
  for (const PathOutcome& p : EnumeratePaths(problem, q)) {
    if (std::isinf(p.llr)) continue;
    lo = std::min(lo, p.llr);
    hi = std::max(hi, p.llr);
  }
  if (lo == kInf) {
    lo = 0.0;
    hi = 0.0;
  }
  lo -= 1.0;
  hi += 1.0;
  std::vector<double> out(count);
  for (size_t i = 0; i < count; ++i) {
    out[i] = count == 1 ? lo
                        : lo + (hi - lo) * static_cast<double>(i) /
                                   static_cast<double>(count - 1);
  }
  return out;
}

}  // namespace deceptive
