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

#ifndef DECEPTIVE_GEOMETRY_H_
#define DECEPTIVE_GEOMETRY_H_

#include <string>
#include <variant>
#include <vector>

namespace deceptive {

// Closed axis-aligned rectangle.
struct Rect {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Closed disk.
struct Disk {
  double cx = 0.0;
  double cy = 0.0;
  double r = 0.0;
  friend bool operator==(const Disk&, const Disk&) = default;
};

using Shape = std::variant<Rect, Disk>;

bool Contains(const Shape& shape, double x, double y);

// Union of closed planar shapes. Boundary points count as inside.
class RegionSet {
 public:
  RegionSet() = default;
  explicit RegionSet(std::vector<Shape> shapes);

  bool Contains(double x, double y) const;
  bool empty() const { return shapes_.empty(); }
  const std::vector<Shape>& shapes() const { return shapes_; }

  RegionSet Translated(double dx, double dy) const;

  friend bool operator==(const RegionSet&, const RegionSet&) = default;

 private:
  std::vector<Shape> shapes_;
};

// "rect{xmin,xmax,ymin,ymax}" or "disk{cx,cy,r}".
std::string FormatShape(const Shape& shape);
Shape ParseShape(const std::string& text);

}  // namespace deceptive

#endif  // DECEPTIVE_GEOMETRY_H_
