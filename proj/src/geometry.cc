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

#include "deceptive/geometry.h"

#include <cctype>
#include <cmath>
#include <utility>

#include "deceptive/format.h"
#include "deceptive/model.h"

namespace deceptive {
namespace {

std::string Trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

void Validate(const Shape& shape) {
  if (const auto* rect = std::get_if<Rect>(&shape)) {
    if (!(rect->xmin <= rect->xmax) || !(rect->ymin <= rect->ymax)) {
      throw ConfigError("rect needs xmin <= xmax and ymin <= ymax");
    }
  } else {
    const auto& disk = std::get<Disk>(shape);
    if (!(disk.r >= 0.0) || !std::isfinite(disk.cx) ||
        !std::isfinite(disk.cy)) {
      throw ConfigError("disk needs a finite center and r >= 0");
    }
  }
}

}  // namespace

bool Contains(const Shape& shape, double x, double y) {
  if (const auto* rect = std::get_if<Rect>(&shape)) {
    return x >= rect->xmin && x <= rect->xmax && y >= rect->ymin &&
           y <= rect->ymax;
  }
  const auto& disk = std::get<Disk>(shape);
  const double dx = x - disk.cx;
  const double dy = y - disk.cy;
  return dx * dx + dy * dy <= disk.r * disk.r;
}

RegionSet::RegionSet(std::vector<Shape> shapes) : shapes_(std::move(shapes)) {
  for (const auto& s : shapes_) Validate(s);
}

bool RegionSet::Contains(double x, double y) const {
  for (const auto& s : shapes_) {
    if (deceptive::Contains(s, x, y)) return true;
  }
  return false;
}

RegionSet RegionSet::Translated(double dx, double dy) const {
  std::vector<Shape> moved;
  moved.reserve(shapes_.size());
  for (const auto& s : shapes_) {
    if (const auto* rect = std::get_if<Rect>(&s)) {
      moved.push_back(Rect{rect->xmin + dx, rect->xmax + dx, rect->ymin + dy,
                           rect->ymax + dy});
    } else {
      const auto& disk = std::get<Disk>(s);
      moved.push_back(Disk{disk.cx + dx, disk.cy + dy, disk.r});
    }
  }
  return RegionSet(std::move(moved));
}

std::string FormatShape(const Shape& shape) {
  if (const auto* rect = std::get_if<Rect>(&shape)) {
    return "rect{" + FormatReal(rect->xmin) + ", " + FormatReal(rect->xmax) +
           ", " + FormatReal(rect->ymin) + ", " + FormatReal(rect->ymax) + "}";
  }
  const auto& disk = std::get<Disk>(shape);
  return "disk{" + FormatReal(disk.cx) + ", " + FormatReal(disk.cy) + ", " +
         FormatReal(disk.r) + "}";
}

Shape ParseShape(const std::string& text) {
  const std::string s = Trim(text);
  const size_t open = s.find('{');
  if (open == std::string::npos || s.back() != '}') {
    throw ConfigError("region '" + s + "' must look like rect{...} or disk{...}");
  }
  const std::string kind = Trim(s.substr(0, open));
  const std::vector<double> values =
      ParseRealList(s.substr(open + 1, s.size() - open - 2));
  Shape shape;
  if (kind == "rect") {
    if (values.size() != 4) {
      throw ConfigError("rect takes 4 values {xmin,xmax,ymin,ymax}");
    }
    shape = Rect{values[0], values[1], values[2], values[3]};
  } else if (kind == "disk") {
    if (values.size() != 3) throw ConfigError("disk takes 3 values {cx,cy,r}");
    shape = Disk{values[0], values[1], values[2]};
  } else {
    throw ConfigError("unknown region kind '" + kind + "'");
  }
  Validate(shape);
  return shape;
}

}  // namespace deceptive
