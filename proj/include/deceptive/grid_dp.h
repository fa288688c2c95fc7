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

#ifndef DECEPTIVE_GRID_DP_H_
#define DECEPTIVE_GRID_DP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "deceptive/model.h"

namespace deceptive {

// Uniform grid lo, lo + h, ..., hi with `points` nodes (points >= 2).
struct GridAxis {
  double lo = 0.0;
  double hi = 1.0;
  size_t points = 2;

  double spacing() const { return (hi - lo) / static_cast<double>(points - 1); }
  double node(size_t i) const { return lo + spacing() * static_cast<double>(i); }
  // Same box, half the spacing.
  GridAxis Refined() const { return {lo, hi, 2 * points - 1}; }
};

enum class OffGridPolicy { kClamp, kError };

// Raised under OffGridPolicy::kError when F_t(x, u) leaves the state box.
class OffGridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  std::vector<GridAxis> state_axes;    // 1 or 2 axes
  std::vector<GridAxis> control_axes;  // 1 or 2 axes
  OffGridPolicy off_grid = OffGridPolicy::kClamp;
};

// Tensor grid; node index is row-major with the last axis fastest.
class TensorGrid {
 public:
  explicit TensorGrid(std::vector<GridAxis> axes);

  size_t dim() const { return axes_.size(); }
  size_t size() const { return size_; }
  const std::vector<GridAxis>& axes() const { return axes_; }
  template <class Vec>
  Vec Node(size_t flat) const {
    Vec v(axes_.size());
    for (size_t d = axes_.size(); d-- > 0;) {
      v[d] = axes_[d].node(flat % axes_[d].points);
      flat /= axes_[d].points;
    }
    return v;
  }

 private:
  std::vector<GridAxis> axes_;
  size_t size_ = 1;
};

// Value tables on the state grid for t = 0..T. The policy is not stored;
// GridPolicy recomputes Q*_t(.|x) at any state from value[t + 1].
struct GridDPSolution {
  TensorGrid states;
  TensorGrid controls;
  double lambda = 1.0;
  OffGridPolicy off_grid = OffGridPolicy::kClamp;
  std::vector<std::vector<double>> value;         // J_t on state nodes
  std::vector<std::vector<double>> desirability;  // exp(-J_t / lambda)
  uint64_t off_grid_clamps = 0;  // interpolation queries clamped to the box
};

// Backward recursion with the reference kernel replaced by its density on
// the control grid, normalized per state. J_{t+1} is interpolated
// multilinearly at F_t(x, u) for t + 1 < T; C_T is evaluated directly.
GridDPSolution GridDP(const ControlProblem& problem, double lambda,
                      const GridSpec& spec);

// Q*_t(u|x) as probability masses over solution.controls nodes.
std::vector<double> GridPolicy(const ControlProblem& problem,
                               const GridDPSolution& solution, int t,
                               const StateVector& x);

// Multilinear interpolation of node values; clamps coordinates to the box.
// `clamped` is set when any coordinate fell outside.
double InterpolateOnGrid(const TensorGrid& grid, const std::vector<double>& values,
                         std::span<const double> point, bool* clamped);

}  // namespace deceptive

#endif  // DECEPTIVE_GRID_DP_H_
