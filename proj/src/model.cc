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

#include "deceptive/model.h"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace deceptive {

StateVector Step(const DeterministicDynamics& dynamics, int t,
                 const StateVector& x, const ControlVector& u) {
  if (t < 0 || t >= dynamics.horizon()) {
    throw ConfigError("time index " + std::to_string(t) +
                      " outside [0, " + std::to_string(dynamics.horizon()) +
                      ")");
  }
  if (x.size() != dynamics.state_dim()) {
    throw ConfigError("state has dimension " + std::to_string(x.size()) +
                      ", dynamics expects " +
                      std::to_string(dynamics.state_dim()));
  }
  if (u.size() != dynamics.control_dim()) {
    throw ConfigError("control has dimension " + std::to_string(u.size()) +
                      ", dynamics expects " +
                      std::to_string(dynamics.control_dim()));
  }
  return dynamics.Next(t, x, u);
}

ControlVector SampleReference(const StochasticPolicy& policy, int t,
                              const StateVector& x, RandomStream& rng) {
  return policy.Sample(t, x, rng);
}

GaussianPolicy::GaussianPolicy(size_t dim, MeanFn mean,
                               std::vector<double> covariance)
    : dim_(dim), mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (dim_ == 0 || dim_ > ControlVector::kMaxDim) {
    throw ConfigError("Gaussian policy dimension must be in [1, " +
                      std::to_string(ControlVector::kMaxDim) + "]");
  }
  if (covariance_.size() != dim_ * dim_) {
    throw ConfigError("covariance must have " + std::to_string(dim_ * dim_) +
                      " entries");
  }
  Eigen::MatrixXd cov(dim_, dim_);
  for (size_t r = 0; r < dim_; ++r) {
    for (size_t c = 0; c < dim_; ++c) cov(r, c) = covariance_[r * dim_ + c];
  }
  if (!cov.isApprox(cov.transpose(), 1e-12)) {
    throw ConfigError("covariance is not symmetric");
  }
  for (size_t i = 0; i < dim_; ++i) {
    if (!(cov(i, i) >= kMinVariance)) {
      throw ConfigError("covariance diagonal below the minimum variance 1e-12");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("covariance is not positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();
  cholesky_.assign(dim_ * dim_, 0.0);
  double log_det = 0.0;
  for (size_t r = 0; r < dim_; ++r) {
    for (size_t c = 0; c <= r; ++c) cholesky_[r * dim_ + c] = lower(r, c);
    if (!(lower(r, r) > 0.0)) {
      throw ConfigError("covariance is not positive definite");
    }
    log_det += 2.0 * std::log(lower(r, r));
  }
  log_normalizer_ =
      -0.5 * (static_cast<double>(dim_) * std::log(2.0 * std::numbers::pi) +
              log_det);
}

ControlVector GaussianPolicy::Sample(int t, const StateVector& x,
                                     RandomStream& rng) const {
  ControlVector u = mean_(t, x);
  std::array<double, ControlVector::kMaxDim> xi;
  for (size_t i = 0; i < dim_; ++i) xi[i] = rng.Normal();
  for (size_t r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (size_t c = 0; c <= r; ++c) acc += cholesky_[r * dim_ + c] * xi[c];
    u[r] += acc;
  }
  return u;
}

double GaussianPolicy::LogDensity(int t, const StateVector& x,
                                  const ControlVector& u) const {
  if (u.size() != dim_) {
    throw ConfigError("control dimension mismatch in LogDensity");
  }
  const ControlVector mu = mean_(t, x);
  // Forward substitution L z = u - mu.
  std::array<double, ControlVector::kMaxDim> z{};
  double quad = 0.0;
  for (size_t r = 0; r < dim_; ++r) {
    double acc = u[r] - mu[r];
    for (size_t c = 0; c < r; ++c) acc -= cholesky_[r * dim_ + c] * z[c];
    z[r] = acc / cholesky_[r * dim_ + r];
    quad += z[r] * z[r];
  }
  return log_normalizer_ - 0.5 * quad;
}

double PathCost(const CostModel& costs, const Trajectory& traj, int from) {
  if (traj.states.size() != traj.controls.size() + 1) {
    throw ConfigError("trajectory needs exactly one more state than controls");
  }
  const int end = traj.start + static_cast<int>(traj.controls.size());
  if (from < traj.start || from > end) {
    throw ConfigError("tail start " + std::to_string(from) +
                      " outside trajectory span");
  }
  double total = 0.0;
  for (int k = from; k < end; ++k) {
    const size_t i = static_cast<size_t>(k - traj.start);
    total += costs.Stage(k, traj.states[i], traj.controls[i]);
  }
  return total + costs.Terminal(traj.states.back());
}

bool IsDynamicsConsistent(const DeterministicDynamics& dynamics,
                          const Trajectory& traj) {
  if (traj.states.size() != traj.controls.size() + 1) return false;
  StateVector x = traj.states.front();
  for (size_t k = 0; k < traj.controls.size(); ++k) {
    x = Step(dynamics, traj.start + static_cast<int>(k), x, traj.controls[k]);
    if (!(x == traj.states[k + 1])) return false;
  }
  return true;
}

Trajectory SimulateReference(const ControlProblem& problem, int t,
                             const StateVector& x, RandomStream& rng) {
  const int horizon = problem.dynamics.horizon();
  Trajectory traj;
  traj.start = t;
  traj.states.reserve(static_cast<size_t>(horizon - t + 1));
  traj.controls.reserve(static_cast<size_t>(horizon - t));
  traj.states.push_back(x);
  double cost = 0.0;
  StateVector state = x;
  for (int k = t; k < horizon; ++k) {
    const ControlVector u = problem.reference.Sample(k, state, rng);
    cost += problem.costs.Stage(k, state, u);
    state = Step(problem.dynamics, k, state, u);
    traj.controls.push_back(u);
    traj.states.push_back(state);
  }
  traj.path_cost = cost + problem.costs.Terminal(state);
  return traj;
}

}  // namespace deceptive
