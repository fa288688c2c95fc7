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

#include <gtest/gtest.h>

#include "deceptive/model.h"

namespace deceptive {
namespace {

TEST(GeometryTest, RectangleIsClosed) {
  const Shape r = Rect{0.0, 2.0, -1.0, 1.0};
  EXPECT_TRUE(Contains(r, 1.0, 0.0));
  EXPECT_TRUE(Contains(r, 0.0, 0.0));
  EXPECT_TRUE(Contains(r, 2.0, 1.0));
  EXPECT_FALSE(Contains(r, 2.0 + 1e-12, 0.0));
  EXPECT_FALSE(Contains(r, 1.0, -1.0 - 1e-12));
}

TEST(GeometryTest, DiskIsClosed) {
  const Shape d = Disk{1.0, 1.0, 2.0};
  EXPECT_TRUE(Contains(d, 1.0, 1.0));
  EXPECT_TRUE(Contains(d, 3.0, 1.0));
  EXPECT_FALSE(Contains(d, 3.0001, 1.0));
}

TEST(RegionSetTest, UnionAndEmpty) {
  const RegionSet empty;
  EXPECT_TRUE(empty.empty());
  EXPECT_FALSE(empty.Contains(0.0, 0.0));
  const RegionSet set({Rect{0, 1, 0, 1}, Disk{5, 5, 1}});
  EXPECT_TRUE(set.Contains(0.5, 0.5));
  EXPECT_TRUE(set.Contains(5.5, 5.0));
  EXPECT_FALSE(set.Contains(3.0, 3.0));
}

TEST(RegionSetTest, TranslationMovesMembership) {
  const RegionSet set({Rect{0, 1, 0, 1}, Disk{5, 5, 1}});
  const RegionSet moved = set.Translated(10.0, -2.0);
  for (double x = -1.0; x < 7.0; x += 0.25) {
    for (double y = -1.0; y < 7.0; y += 0.25) {
      EXPECT_EQ(set.Contains(x, y), moved.Contains(x + 10.0, y - 2.0));
    }
  }
}

TEST(RegionSetTest, RejectsMalformedShapes) {
  EXPECT_THROW(RegionSet({Rect{1, 0, 0, 1}}), ConfigError);
  EXPECT_THROW(RegionSet({Disk{0, 0, -1}}), ConfigError);
}

TEST(ShapeTextTest, RoundTrip) {
  for (const Shape& s : {Shape{Rect{3, 23, -20, 0}}, Shape{Disk{1.5, -2, 0.25}}}) {
    EXPECT_EQ(ParseShape(FormatShape(s)), s);
  }
  EXPECT_EQ(ParseShape(" rect{ 1, 2 ,3,4 } "), Shape(Rect{1, 2, 3, 4}));
  EXPECT_THROW(ParseShape("rect{1,2,3}"), ConfigError);
  EXPECT_THROW(ParseShape("square{1,2,3,4}"), ConfigError);
  EXPECT_THROW(ParseShape("disk{1,2,3"), ConfigError);
}

}  // namespace
}  // namespace deceptive
