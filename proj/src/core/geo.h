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

#ifndef BIAS_AUDIT_CORE_GEO_H_
#define BIAS_AUDIT_CORE_GEO_H_

#include <string>
#include <string_view>
#include <vector>

namespace bias_audit {

struct GeoPoint {
  double lon = 0;
  double lat = 0;
};

struct ContinentPolygon {
  std::string continent;
  std::vector<GeoPoint> vertices;
};

// Coarse continent outlines bundled with the library.
const std::vector<ContinentPolygon> &ContinentPolygons();
std::vector<ContinentPolygon> ParseContinentTable(std::string_view tsv);

// Even-odd ray casting; points on an edge may fall either way.
bool PolygonContains(const std::vector<GeoPoint> &polygon, double lon, double lat);

// First continent whose outline contains the point, else "other".
std::string ContinentOf(double latitude, double longitude);

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_GEO_H_
