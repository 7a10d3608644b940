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

#include "core/render.h"

#include <algorithm>
#include <cstdio>

#include "core/errors.h"
#include "core/geo.h"
#include "core/text.h"

namespace bias_audit {

using Json = nlohmann::json;

namespace {

constexpr struct {
  ChartKind kind;
  const char *name;
} kCharts[] = {
    {ChartKind::kGenderBars, "gender_bars"},
    {ChartKind::kOccupationGrid, "occupation_grid"},
    {ChartKind::kReligionBars, "religion_bars"},
    {ChartKind::kWorldMap, "world_map"},
    {ChartKind::kChecklistTable, "checklist_table"},
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string SvgOpen(int width, int height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
         " " + std::to_string(height) + "\">\n";
}

std::string Text(double x, double y, std::string_view s, const char *cls) {
  return "  <text class=\"" + std::string(cls) + "\" x=\"" + Num(x) + "\" y=\"" + Num(y) + "\">" +
         text::XmlEscape(s) + "</text>\n";
}

constexpr int kRowHeight = 24;
constexpr int kLabelWidth = 220;
constexpr int kPercentWidth = 60;

// Appends one bar per entry; the widest bar is the largest count.
void AppendBars(std::string &svg, const RankedCounts &rows, long total, int width, int top) {
  long max_count = 0;
  for (const auto &[label, n] : rows) max_count = std::max(max_count, n);
  double max_px = std::max(1, width - kLabelWidth - kPercentWidth - 20);
  int y = top;
  for (const auto &[label, n] : rows) {
    double w = max_count > 0 ? max_px * static_cast<double>(n) / max_count : 0;
    long pct = total > 0 ? text::RoundedPercent(static_cast<double>(n) / total) : 0;
    svg += Text(10, y + 16, label, "label");
    svg += "  <rect class=\"bar\" x=\"" + std::to_string(kLabelWidth) + "\" y=\"" +
           std::to_string(y + 4) + "\" width=\"" + Num(w) + "\" height=\"" +
           std::to_string(kRowHeight - 8) + "\" data-count=\"" + std::to_string(n) + "\"/>\n";
    svg += Text(kLabelWidth + w + 6, y + 16, std::to_string(pct) + "%", "percent");
    y += kRowHeight;
  }
}

std::string Placeholder(std::string_view title, long total, long threshold, int width) {
  std::string svg = SvgOpen(width, 80);
  svg += Text(10, 24, title, "title");
  svg += Text(10, 56,
              "below threshold: " + std::to_string(total) + " values (needs " +
                  std::to_string(threshold) + ")",
              "placeholder");
  svg += "</svg>\n";
  return svg;
}

std::string RankedCsv(const RankedCounts &rows, long total) {
  std::string out = "label,count,percent\n";
  for (const auto &[label, n] : rows) {
    std::string quoted = label;
    if (quoted.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : quoted) {
        if (c == '"') q += '"';
        q += c;
      }
      quoted = q + "\"";
    }
    long pct = total > 0 ? text::RoundedPercent(static_cast<double>(n) / total) : 0;
    out += quoted + "," + std::to_string(n) + "," + std::to_string(pct) + "\n";
  }
  return out;
}

Json RankedJson(const RankedCounts &rows) {
  Json arr = Json::array();
  for (const auto &[label, n] : rows) arr.push_back({{"label", label}, {"count", n}});
  return arr;
}

Json DistributionChartJson(const Distribution &d, std::size_t k) {
  return {{"included", d.included},
          {"total", d.total},
          {"threshold", d.threshold},
          {"bars", RankedJson(d.Top(k))}};
}

}  // namespace

const char *ChartName(ChartKind kind) {
  for (const auto &c : kCharts) {
    if (c.kind == kind) return c.name;
  }
  return "unknown";
}

std::optional<ChartKind> ParseChartKind(std::string_view name) {
  for (const auto &c : kCharts) {
    if (name == c.name) return c.kind;
  }
  return std::nullopt;
}

std::vector<ChartKind> AllCharts() {
  std::vector<ChartKind> out;
  for (const auto &c : kCharts) out.push_back(c.kind);
  return out;
}

std::pair<double, double> ProjectEquirectangular(double latitude, double longitude, int width,
                                                 int height) {
  return {(longitude + 180.0) / 360.0 * width, (90.0 - latitude) / 180.0 * height};
}

std::string RenderWorldMap(const std::vector<Coordinates> &points, int width, int height) {
  std::string svg = SvgOpen(width, height);
  svg += "  <rect class=\"ocean\" x=\"0\" y=\"0\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" fill=\"#dde8f0\"/>\n";
  for (const auto &poly : ContinentPolygons()) {
    svg += "  <polygon class=\"land\" data-continent=\"" + poly.continent +
           "\" fill=\"#c8c8c8\" points=\"";
    bool first = true;
    for (const auto &v : poly.vertices) {
      auto [x, y] = ProjectEquirectangular(v.lat, v.lon, width, height);
      if (!first) svg += ' ';
      svg += Num(x) + "," + Num(y);
      first = false;
    }
    svg += "\"/>\n";
  }
  for (const auto &c : points) {
    auto [x, y] = ProjectEquirectangular(c.latitude, c.longitude, width, height);
    svg += "  <circle class=\"marker\" cx=\"" + Num(x) + "\" cy=\"" + Num(y) +
           "\" r=\"2\" fill=\"#c0392b\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string RenderBars(const Distribution &d, std::string_view title, std::size_t k, int width) {
  if (!d.included) return Placeholder(title, d.total, d.threshold, width);
  RankedCounts rows = d.Top(k);
  int height = 40 + static_cast<int>(rows.size()) * kRowHeight + 10;
  std::string svg = SvgOpen(width, height);
  svg += Text(10, 24, title, "title");
  AppendBars(svg, rows, d.total, width, 40);
  svg += "</svg>\n";
  return svg;
}

std::string RenderOccupationGrid(const OccupationsByGender &occ, std::size_t k, int width) {
  const Distribution &d = occ.occupations;
  if (!d.included) return Placeholder("Occupations by gender", d.total, d.threshold, width);
  int height = 40;
  for (const auto &[gender, ranked] : occ.top) {
    height += 30 + static_cast<int>(std::min(k, ranked.size())) * kRowHeight;
  }
  std::string svg = SvgOpen(width, height + 10);
  svg += Text(10, 24, "Occupations by gender", "title");
  int y = 40;
  for (const auto &[gender, ranked] : occ.top) {
    RankedCounts rows(ranked.begin(), ranked.begin() + std::min(k, ranked.size()));
    long total = 0;
    for (const auto &[label, n] : ranked) total += n;
    svg += "  <g class=\"panel\" data-gender=\"" + text::XmlEscape(gender) + "\">\n";
    svg += Text(10, y + 20, gender, "panel-title");
    AppendBars(svg, rows, total, width, y + 30);
    svg += "  </g>\n";
    y += 30 + static_cast<int>(rows.size()) * kRowHeight;
  }
  svg += "</svg>\n";
  return svg;
}

std::string RenderChecklistTable(const EntityCountSummary &summary) {
  static const char *kColumns[] = {"entities",  "instance_of", "gender",      "occupation",
                                   "ethnicity", "religion",    "coordinates", "location_names"};
  auto values = [](const CountRow &r) {
    return std::vector<long>{r.entities,  r.instance_of, r.gender,      r.occupation,
                             r.ethnicity, r.religion,    r.coordinates, r.location_names};
  };
  const int col = 110;
  const int width = 140 + col * 8;
  std::string svg = SvgOpen(width, 110);
  for (int i = 0; i < 8; ++i) svg += Text(140 + col * i, 24, kColumns[i], "header");
  int y = 56;
  for (const auto &[name, row] : {std::pair{"per mention", &summary.per_mention},
                                  std::pair{"per unique entity", &summary.per_unique_entity}}) {
    svg += Text(10, y, name, "row-label");
    auto v = values(*row);
    for (int i = 0; i < 8; ++i) svg += Text(140 + col * i, y, std::to_string(v[i]), "cell");
    y += 32;
  }
  svg += "</svg>\n";
  return svg;
}

std::string RenderChart(const AuditReport &report, const RenderSpec &spec) {
  std::string ext = text::AsciiLower(spec.output.extension().string());
  if (ext != ".svg" && ext != ".json" && ext != ".csv") {
    throw ConfigError("unsupported chart format '" + ext + "' (use .svg, .json or .csv)");
  }
  const std::string title_suffix = " (" + report.benchmark_name + ")";
  switch (spec.kind) {
    case ChartKind::kGenderBars:
    case ChartKind::kReligionBars: {
      bool gender = spec.kind == ChartKind::kGenderBars;
      const Distribution &d = gender ? report.gender : report.religion.distribution;
      if (ext == ".svg") {
        return RenderBars(d, (gender ? "Gender" : "Religion") + title_suffix, spec.top_k,
                          spec.width);
      }
      if (ext == ".json") return DistributionChartJson(d, spec.top_k).dump(2) + "\n";
      return RankedCsv(d.Top(spec.top_k), d.total);
    }
    case ChartKind::kOccupationGrid: {
      const auto &occ = report.occupations_by_gender;
      if (ext == ".svg") return RenderOccupationGrid(occ, spec.top_k, spec.width);
      if (ext == ".json") {
        Json panels = Json::object();
        for (const auto &[g, ranked] : occ.top) {
          RankedCounts rows(ranked.begin(), ranked.begin() + std::min(spec.top_k, ranked.size()));
          panels[g] = RankedJson(rows);
        }
        return Json{{"included", occ.occupations.included},
                    {"total", occ.occupations.total},
                    {"threshold", occ.occupations.threshold},
                    {"panels", panels}}
                   .dump(2) +
               "\n";
      }
      std::string out = "gender,occupation,count\n";
      for (const auto &[g, ranked] : occ.top) {
        for (std::size_t i = 0; i < ranked.size() && i < spec.top_k; ++i) {
          out += g + "," + ranked[i].first + "," + std::to_string(ranked[i].second) + "\n";
        }
      }
      return out;
    }
    case ChartKind::kWorldMap: {
      const auto &geo = report.geo;
      if (ext == ".svg") {
        if (!geo.map_included) {
          return Placeholder("Coordinates" + title_suffix,
                             static_cast<long>(geo.coordinates.size()), kCoordinateMapThreshold,
                             spec.width);
        }
        return RenderWorldMap(geo.coordinates, spec.width, spec.height);
      }
      if (ext == ".json") {
        Json pts = Json::array();
        for (const auto &c : geo.coordinates) {
          pts.push_back({{"latitude", c.latitude}, {"longitude", c.longitude}});
        }
        return Json{{"included", geo.map_included}, {"continents", geo.continents}, {"points", pts}}
                   .dump(2) +
               "\n";
      }
      std::string out = "latitude,longitude\n";
      for (const auto &c : geo.coordinates) {
        out += Json(c.latitude).dump() + "," + Json(c.longitude).dump() + "\n";
      }
      return out;
    }
    case ChartKind::kChecklistTable:
      if (ext == ".svg") return RenderChecklistTable(report.entity_count_summary);
      if (ext == ".json") return ReportToJson(report)["entity_count_summary"].dump(2) + "\n";
      return SummaryCsv(report);
  }
  throw AuditError(ErrorKind::kInternal, "unhandled chart kind");
}

}  // namespace bias_audit
