// Copyright 2026 The bias-audit Authors.
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

#include "core/geo.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

namespace bias_audit {
namespace {

TEST(GeoTest, KnownCities) {
  EXPECT_EQ(ContinentOf(52.02, 8.53), "europe");      // Bielefeld
  EXPECT_EQ(ContinentOf(51.51, -0.13), "europe");     // London
  EXPECT_EQ(ContinentOf(40.71, -74.01), "north_america");
  EXPECT_EQ(ContinentOf(-23.55, -46.63), "south_america");
  EXPECT_EQ(ContinentOf(35.68, 139.69), "asia");      // Tokyo
  EXPECT_EQ(ContinentOf(28.61, 77.21), "asia");       // Delhi
  EXPECT_EQ(ContinentOf(-1.29, 36.82), "africa");     // Nairobi
  EXPECT_EQ(ContinentOf(30.04, 31.24), "africa");     // Cairo
  EXPECT_EQ(ContinentOf(-33.87, 151.21), "oceania");  // Sydney
  EXPECT_EQ(ContinentOf(-85.0, 0.0), "antarctica");
}

TEST(GeoTest, OpenOceanIsOther) {
  EXPECT_EQ(ContinentOf(0, -30), "other");
  EXPECT_EQ(ContinentOf(-40, -120), "other");
}

TEST(GeoTest, PolygonContainsSquare) {
  std::vector<GeoPoint> square = {{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  EXPECT_TRUE(PolygonContains(square, 5, 5));
  EXPECT_FALSE(PolygonContains(square, 15, 5));
  EXPECT_FALSE(PolygonContains(square, -1, -1));
  EXPECT_FALSE(PolygonContains({}, 0, 0));
}

TEST(GeoTest, ParseTable) {
  auto table = ParseContinentTable("# c\tp\nx\t0,0 1,0 1,1\ny\t2,2 3,2 3,3 2,3\n");
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table[1].continent, "y");
  EXPECT_EQ(table[1].vertices.size(), 4u);
  EXPECT_DOUBLE_EQ(table[1].vertices[2].lat, 3);
}

TEST(GeoPropertyTest, TotalFunctionOverTheGlobe) {
  std::set<std::string> known = {"africa", "antarctica", "asia", "europe",
                                 "north_america", "oceania", "south_america", "other"};
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  for (int i = 0; i < 5000; ++i) {
    EXPECT_TRUE(known.count(ContinentOf(lat(rng), lon(rng))));
  }
  for (const auto &p : ContinentPolygons()) {
    EXPECT_GE(p.vertices.size(), 3u);
    for (const auto &v : p.vertices) {
      EXPECT_LE(std::abs(v.lat), 90);
      EXPECT_LE(std::abs(v.lon), 180);
    }
  }
}

}  // namespace
}  // namespace bias_audit
