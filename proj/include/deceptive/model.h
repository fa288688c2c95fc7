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

#ifndef DECEPTIVE_MODEL_H_
#define DECEPTIVE_MODEL_H_

#include <array>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "deceptive/random.h"

namespace deceptive {

// Raised for malformed inputs: dimension mismatches, invalid parameters,
// unparsable configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Stage or terminal cost value that excludes a path (weight 0 downstream).
inline constexpr double kForbiddenCost = std::numeric_limits<double>::infinity();

// Fixed-capacity real vector. The tag keeps states and controls from being
// mixed up; the inline storage keeps rollouts allocation-free.
template <class Tag>
class CoordVector {
 public:
  static constexpr size_t kMaxDim = 8;

  CoordVector() = default;
  explicit CoordVector(size_t dim) : dim_(CheckDim(dim)) {}
  CoordVector(std::initializer_list<double> values)
      : dim_(CheckDim(values.size())) {
    size_t i = 0;
    for (double v : values) data_[i++] = v;
  }
  explicit CoordVector(std::span<const double> values)
      : dim_(CheckDim(values.size())) {
    for (size_t i = 0; i < dim_; ++i) data_[i] = values[i];
  }

  size_t size() const { return dim_; }
  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }
  std::span<const double> coords() const { return {data_.data(), dim_}; }
  std::span<double> coords() { return {data_.data(), dim_}; }

  friend bool operator==(const CoordVector& a, const CoordVector& b) {
    if (a.dim_ != b.dim_) return false;
    for (size_t i = 0; i < a.dim_; ++i) {
      if (a.data_[i] != b.data_[i]) return false;
    }
    return true;
  }

 private:
  static size_t CheckDim(size_t dim) {
    if (dim > kMaxDim) {
      throw ConfigError("vector dimension " + std::to_string(dim) +
                        " exceeds the supported maximum of " +
                        std::to_string(kMaxDim));
    }
    return dim;
  }

  std::array<double, kMaxDim> data_{};
  size_t dim_ = 0;
};

using StateVector = CoordVector<struct StateTag>;
using ControlVector = CoordVector<struct ControlTag>;

// x_{t+1} = F_t(x_t, u_t). Implementations must be pure.
class DeterministicDynamics {
 public:
  virtual ~DeterministicDynamics() = default;

  virtual int horizon() const = 0;
  virtual size_t state_dim() const = 0;
  virtual size_t control_dim() const = 0;

  // Unchecked transition; use Step() at API boundaries.
  virtual StateVector Next(int t, const StateVector& x,
                           const ControlVector& u) const = 0;
};

// Checked transition: validates the time index and both dimensions.
StateVector Step(const DeterministicDynamics& dynamics, int t,
                 const StateVector& x, const ControlVector& u);

// Reference kernel R(du | x) at each time step.
class StochasticPolicy {
 public:
  virtual ~StochasticPolicy() = default;

  virtual size_t control_dim() const = 0;
  virtual ControlVector Sample(int t, const StateVector& x,
                               RandomStream& rng) const = 0;
  // Natural-log density (or mass, for discrete policies) of u.
  virtual double LogDensity(int t, const StateVector& x,
                            const ControlVector& u) const = 0;
};

ControlVector SampleReference(const StochasticPolicy& policy, int t,
                              const StateVector& x, RandomStream& rng);

// Gaussian policy N(mean(t, x), covariance). The covariance is fixed.
class GaussianPolicy : public StochasticPolicy {
 public:
  using MeanFn = std::function<ControlVector(int, const StateVector&)>;

  // Smallest admissible variance along any axis.
  static constexpr double kMinVariance = 1e-12;

  // `covariance` is row-major dim x dim, symmetric positive definite.
  GaussianPolicy(size_t dim, MeanFn mean, std::vector<double> covariance);

  size_t control_dim() const override { return dim_; }
  ControlVector Mean(int t, const StateVector& x) const { return mean_(t, x); }
  ControlVector Sample(int t, const StateVector& x,
                       RandomStream& rng) const override;
  double LogDensity(int t, const StateVector& x,
                    const ControlVector& u) const override;

  const std::vector<double>& covariance() const { return covariance_; }

 private:
  size_t dim_;
  MeanFn mean_;
  std::vector<double> covariance_;
  std::vector<double> cholesky_;  // lower triangular, row-major
  double log_normalizer_ = 0.0;
};

// Additive path cost: stage costs C_t(x, u) and terminal cost C_T(x).
class CostModel {
 public:
  virtual ~CostModel() = default;
  virtual double Stage(int t, const StateVector& x,
                       const ControlVector& u) const = 0;
  virtual double Terminal(const StateVector& x) const = 0;
};

class ZeroCost : public CostModel {
 public:
  double Stage(int, const StateVector&, const ControlVector&) const override {
    return 0.0;
  }
  double Terminal(const StateVector&) const override { return 0.0; }
};

// The three ingredients every solver consumes. Non-owning.
struct ControlProblem {
  const DeterministicDynamics& dynamics;
  const StochasticPolicy& reference;
  const CostModel& costs;
};

// One state-action path starting at time `start` (0 for full episodes).
struct Trajectory {
  int start = 0;
  std::vector<StateVector> states;
  std::vector<ControlVector> controls;
  double path_cost = 0.0;
};

// C_{from:T}: stage costs from index `from` (absolute time) plus terminal.
double PathCost(const CostModel& costs, const Trajectory& traj, int from);
inline double PathCost(const CostModel& costs, const Trajectory& traj) {
  return PathCost(costs, traj, traj.start);
}

// Re-steps traj.controls from traj.states.front() and compares bit-for-bit.
bool IsDynamicsConsistent(const DeterministicDynamics& dynamics,
                          const Trajectory& traj);

// Closed-loop path from (t, x) to T under the reference policy.
Trajectory SimulateReference(const ControlProblem& problem, int t,
                             const StateVector& x, RandomStream& rng);

}  // namespace deceptive

#endif  // DECEPTIVE_MODEL_H_
