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

#include "deceptive/grid_dp.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

namespace deceptive {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckAxes(const std::vector<GridAxis>& axes, const char* what) {
  if (axes.empty() || axes.size() > 2) {
    throw ConfigError(std::string(what) + " grid must have 1 or 2 axes");
  }
  for (const GridAxis& a : axes) {
    if (a.points < 2 || !(a.hi > a.lo) || !std::isfinite(a.lo) ||
        !std::isfinite(a.hi)) {
      throw ConfigError(std::string(what) +
                        " axis needs lo < hi (finite) and at least 2 points");
    }
  }
}

double LogSumExp(const std::vector<double>& a) {
  double m = -kInf;
  for (double v : a) m = std::max(m, v);
  if (m == -kInf) return -kInf;
  double sum = 0.0;
  for (double v : a) sum += std::exp(v - m);
  return m + std::log(sum);
}

// Evaluates the soft-min backup at (t, x) given J_{t+1} on the grid.
void BackUp(const ControlProblem& problem, const GridDPSolution& sol, int t,
            const StateVector& x, std::vector<double>& log_ref,
            std::vector<double>& logits, double* value, uint64_t* clamps) {
  const int horizon = problem.dynamics.horizon();
  const double lambda = sol.lambda;
  const size_t nu = sol.controls.size();
  log_ref.resize(nu);
  logits.resize(nu);
  for (size_t k = 0; k < nu; ++k) {
    const ControlVector u = sol.controls.Node<ControlVector>(k);
    log_ref[k] = problem.reference.LogDensity(t, x, u);
    const StateVector next = problem.dynamics.Next(t, x, u);
    double continuation;
    if (t + 1 == horizon) {
      continuation = problem.costs.Terminal(next);
    } else {
      bool clamped = false;
      continuation = InterpolateOnGrid(sol.states, sol.value[static_cast<size_t>(t) + 1],
                                       next.coords(), &clamped);
      if (clamped) {
        if (sol.off_grid == OffGridPolicy::kError) {
          throw OffGridError("F_t(x, u) leaves the state grid at t=" +
                             std::to_string(t));
        }
        if (clamps != nullptr) ++*clamps;
      }
    }
    const double rho = problem.costs.Stage(t, x, u) + continuation;
    logits[k] = rho == kInf ? -kInf : log_ref[k] - rho / lambda;
  }
  const double log_norm = LogSumExp(log_ref);
  if (log_norm == -kInf) {
    throw ConfigError("reference density vanishes on the whole control grid");
  }
  // Reference masses are exp(log_ref - log_norm); fold the normalizer in.
  for (double& l : logits) l -= log_norm;
  if (value != nullptr) {
    const double lse = LogSumExp(logits);
    *value = lse == -kInf ? kInf : -lambda * lse;
  }
}

}  // namespace

TensorGrid::TensorGrid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
  for (const GridAxis& a : axes_) size_ *= a.points;
}

double InterpolateOnGrid(const TensorGrid& grid, const std::vector<double>& values,
                         std::span<const double> point, bool* clamped) {
  const size_t dim = grid.dim();
  if (point.size() != dim) throw ConfigError("interpolation point has the wrong dimension");
  bool outside = false;
  size_t base[2] = {0, 0};
  double frac[2] = {0.0, 0.0};
  for (size_t d = 0; d < dim; ++d) {
    const GridAxis& a = grid.axes()[d];
    double p = point[d];
    if (!(p >= a.lo)) {
      outside = true;
      p = a.lo;
    } else if (p > a.hi) {
      outside = true;
      p = a.hi;
    }
    const double s = (p - a.lo) / a.spacing();
    size_t i = static_cast<size_t>(std::floor(s));
    if (i >= a.points - 1) i = a.points - 2;
    base[d] = i;
    frac[d] = std::clamp(s - static_cast<double>(i), 0.0, 1.0);
  }
  if (clamped != nullptr) *clamped = outside;

  double result = 0.0;
  for (size_t corner = 0; corner < (size_t{1} << dim); ++corner) {
    double w = 1.0;
    size_t flat = 0;
    for (size_t d = 0; d < dim; ++d) {
      const size_t bit = (corner >> d) & 1;
      w *= bit ? frac[d] : 1.0 - frac[d];
      flat = flat * grid.axes()[d].points + base[d] + bit;
    }
    if (w == 0.0) continue;
    result += w * values[flat];
  }
  return result;
}

GridDPSolution GridDP(const ControlProblem& problem, double lambda,
                      const GridSpec& spec) {
  CheckAxes(spec.state_axes, "state");
  CheckAxes(spec.control_axes, "control");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (problem.dynamics.state_dim() != spec.state_axes.size() ||
      problem.dynamics.control_dim() != spec.control_axes.size() ||
      problem.reference.control_dim() != spec.control_axes.size()) {
    throw ConfigError("grid dimensions do not match the problem");
  }
  const int horizon = problem.dynamics.horizon();
  if (horizon < 0) throw ConfigError("horizon must be non-negative");

  GridDPSolution sol{TensorGrid(spec.state_axes), TensorGrid(spec.control_axes),
                     lambda, spec.off_grid, {}, {}, 0};
  const size_t ns = sol.states.size();
  sol.value.assign(static_cast<size_t>(horizon) + 1, std::vector<double>(ns));
  for (size_t i = 0; i < ns; ++i) {
    sol.value[static_cast<size_t>(horizon)][i] =
        problem.costs.Terminal(sol.states.Node<StateVector>(i));
  }
  std::vector<double> log_ref, logits;
  for (int t = horizon - 1; t >= 0; --t) {
    auto& value = sol.value[static_cast<size_t>(t)];
    for (size_t i = 0; i < ns; ++i) {
      BackUp(problem, sol, t, sol.states.Node<StateVector>(i), log_ref, logits,
             &value[i], &sol.off_grid_clamps);
    }
  }
  if (sol.off_grid_clamps > 0) {
    std::clog << "warning: grid DP clamped " << sol.off_grid_clamps
              << " successor states to the state box\n";
  }

  sol.desirability.resize(sol.value.size());
  for (size_t t = 0; t < sol.value.size(); ++t) {
    sol.desirability[t].resize(ns);
    for (size_t i = 0; i < ns; ++i) {
      sol.desirability[t][i] = std::exp(-sol.value[t][i] / lambda);
    }
  }
  return sol;
}

std::vector<double> GridPolicy(const ControlProblem& problem,
                               const GridDPSolution& solution, int t,
                               const StateVector& x) {
  if (t < 0 || t >= problem.dynamics.horizon()) {
    throw ConfigError("policy time index out of range");
  }
  if (x.size() != solution.states.dim()) {
    throw ConfigError("policy state has the wrong dimension");
  }
  std::vector<double> log_ref, logits;
  BackUp(problem, solution, t, x, log_ref, logits, nullptr, nullptr);
  const double lse = LogSumExp(logits);
  std::vector<double> q(logits.size(), 0.0);
  if (lse == -kInf) {
    // Every control is forbidden: fall back to the reference masses.
    const double norm = LogSumExp(log_ref);
    for (size_t k = 0; k < q.size(); ++k) q[k] = std::exp(log_ref[k] - norm);
    return q;
  }
  for (size_t k = 0; k < q.size(); ++k) {
    q[k] = logits[k] == -kInf ? 0.0 : std::exp(logits[k] - lse);
  }
  return q;
}

}  // namespace deceptive
