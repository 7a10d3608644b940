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

#include <cstdlib>

#include "core/errors.h"
#include "core/text.h"
#include "embedded_continents.h"

namespace bias_audit {

std::vector<ContinentPolygon> ParseContinentTable(std::string_view tsv) {
  std::vector<ContinentPolygon> out;
  for (const auto &raw : text::Split(tsv, '\n')) {
    std::string line = text::Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ConfigError("continent table line without tab");
    ContinentPolygon poly;
    poly.continent = line.substr(0, tab);
    for (const auto &pair : text::Split(text::Trim(line.substr(tab + 1)), ' ')) {
      if (pair.empty()) continue;
      auto comma = pair.find(',');
      if (comma == std::string::npos) throw ConfigError("bad vertex in continent table: " + pair);
      poly.vertices.push_back({std::strtod(pair.substr(0, comma).c_str(), nullptr),
                               std::strtod(pair.substr(comma + 1).c_str(), nullptr)});
    }
    if (poly.vertices.size() < 3) throw ConfigError("continent polygon with < 3 vertices");
    out.push_back(std::move(poly));
  }
  return out;
}

const std::vector<ContinentPolygon> &ContinentPolygons() {
  static const std::vector<ContinentPolygon> table = ParseContinentTable(embedded::kContinents);
  return table;
}

bool PolygonContains(const std::vector<GeoPoint> &polygon, double lon, double lat) {
  bool inside = false;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
    const auto &a = polygon[i];
    const auto &b = polygon[j];
    if ((a.lat > lat) != (b.lat > lat)) {
      double x = (b.lon - a.lon) * (lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (lon < x) inside = !inside;
    }
  }
  return inside;
}

std::string ContinentOf(double latitude, double longitude) {
  for (const auto &poly : ContinentPolygons()) {
    if (PolygonContains(poly.vertices, longitude, latitude)) return poly.continent;
  }
  return "other";
}

}  // namespace bias_audit
