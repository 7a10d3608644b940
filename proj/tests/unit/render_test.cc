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

#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <random>
#include <sstream>

#include "core/errors.h"

namespace bias_audit {
namespace {

namespace pt = boost::property_tree;

pt::ptree ParseSvg(const std::string &svg) {
  std::istringstream in(svg);
  pt::ptree tree;
  pt::read_xml(in, tree);
  return tree;
}

// Children of the root <svg> element with the given tag.
std::vector<pt::ptree> Elements(const pt::ptree &tree, const std::string &tag) {
  std::vector<pt::ptree> out;
  for (const auto &[name, child] : tree.get_child("svg")) {
    if (name == tag) out.push_back(child);
    if (name == "g") {
      for (const auto &[n2, c2] : child) {
        if (n2 == tag) out.push_back(c2);
      }
    }
  }
  return out;
}

Distribution Dist(std::map<std::string, long> counts, long threshold = 30) {
  Distribution d;
  d.counts = std::move(counts);
  d.threshold = threshold;
  d.Finalize();
  return d;
}

TEST(RenderTest, ProjectionCorners) {
  auto [x0, y0] = ProjectEquirectangular(0, 0, 800, 400);
  EXPECT_DOUBLE_EQ(x0, 400);
  EXPECT_DOUBLE_EQ(y0, 200);
  auto [x1, y1] = ProjectEquirectangular(90, -180, 800, 400);
  EXPECT_DOUBLE_EQ(x1, 0);
  EXPECT_DOUBLE_EQ(y1, 0);
  auto [x2, y2] = ProjectEquirectangular(-90, 180, 360, 180);
  EXPECT_DOUBLE_EQ(x2, 360);
  EXPECT_DOUBLE_EQ(y2, 180);
}

TEST(RenderPropertyTest, MarkersStayInsideViewBox) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  std::vector<Coordinates> points;
  for (int i = 0; i < 100; ++i) points.push_back({lat(rng), lon(rng)});
  points.push_back({90, 180});
  points.push_back({-90, -180});
  auto tree = ParseSvg(RenderWorldMap(points, 640, 320));
  auto markers = Elements(tree, "circle");
  ASSERT_EQ(markers.size(), points.size());
  for (std::size_t i = 0; i < markers.size(); ++i) {
    double cx = markers[i].get<double>("<xmlattr>.cx");
    double cy = markers[i].get<double>("<xmlattr>.cy");
    EXPECT_GE(cx, 0);
    EXPECT_LE(cx, 640);
    EXPECT_GE(cy, 0);
    EXPECT_LE(cy, 320);
    auto [ex, ey] = ProjectEquirectangular(points[i].latitude, points[i].longitude, 640, 320);
    EXPECT_NEAR(cx, ex, 0.006);
    EXPECT_NEAR(cy, ey, 0.006);
  }
  EXPECT_GE(Elements(tree, "polygon").size(), 7u);
  EXPECT_EQ(tree.get<std::string>("svg.<xmlattr>.viewBox"), "0 0 640 320");
}

TEST(RenderTest, BarWidthsAreProportional) {
  auto svg = RenderBars(Dist({{"male", 28}, {"female", 5}}, 30), "Gender", 10, 800);
  auto bars = Elements(ParseSvg(svg), "rect");
  ASSERT_EQ(bars.size(), 2u);
  double w_male = bars[0].get<double>("<xmlattr>.width");
  double w_female = bars[1].get<double>("<xmlattr>.width");
  EXPECT_EQ(bars[0].get<long>("<xmlattr>.data-count"), 28);
  EXPECT_NEAR(w_male / w_female, 28.0 / 5.0, 0.01);
  auto texts = Elements(ParseSvg(svg), "text");
  std::vector<std::string> percents;
  for (const auto &t : texts) {
    if (t.get<std::string>("<xmlattr>.class") == "percent") percents.push_back(t.data());
  }
  EXPECT_EQ(percents, (std::vector<std::string>{"85%", "15%"}));
}

TEST(RenderTest, BelowThresholdPlaceholder) {
  auto svg = RenderBars(Dist({{"male", 20}, {"female", 10}}, 30), "Gender", 10, 800);
  auto tree = ParseSvg(svg);
  EXPECT_TRUE(Elements(tree, "rect").empty());
  EXPECT_NE(svg.find("below threshold: 30 values (needs 30)"), std::string::npos);
}

TEST(RenderTest, TopKLimitsBars) {
  std::map<std::string, long> counts;
  for (int i = 0; i < 15; ++i) counts["label" + std::to_string(i)] = 10 + i;
  auto bars = Elements(ParseSvg(RenderBars(Dist(counts), "T", 10, 800)), "rect");
  ASSERT_EQ(bars.size(), 10u);
  EXPECT_EQ(bars[0].get<long>("<xmlattr>.data-count"), 24);
  EXPECT_EQ(bars[9].get<long>("<xmlattr>.data-count"), 15);
}

TEST(RenderTest, LabelsAreEscaped) {
  auto svg = RenderBars(Dist({{"<Ben & Jerry's>", 40}}), "A \"title\"", 10, 800);
  auto tree = ParseSvg(svg);
  bool found = false;
  for (const auto &t : Elements(tree, "text")) found = found || t.data() == "<Ben & Jerry's>";
  EXPECT_TRUE(found);
}

AuditReport SampleReport() {
  AuditReport r;
  r.benchmark_name = "Sample";
  r.gender = Dist({{"male", 40}, {"female", 10}});
  r.religion.distribution = Dist({{"Islam", 3}});
  r.occupations_by_gender.occupations = Dist({{"nurse", 310}}, 300);
  r.occupations_by_gender.occupations.rule = ThresholdRule::kAtLeast;
  r.occupations_by_gender.top = {{"female", {{"nurse", 300}}}, {"male", {{"nurse", 10}}}};
  r.geo.coordinates = {{1, 2}};
  r.entity_count_summary.per_mention.entities = 12;
  return r;
}

TEST(RenderTest, EveryChartParsesInEveryFormat) {
  auto report = SampleReport();
  for (auto kind : AllCharts()) {
    EXPECT_EQ(ParseChartKind(ChartName(kind)), kind);
    RenderSpec spec;
    spec.kind = kind;
    spec.output = std::string(ChartName(kind)) + ".svg";
    std::string svg = RenderChart(report, spec);
    EXPECT_NO_THROW(ParseSvg(svg)) << ChartName(kind);
    spec.output = "x.json";
    EXPECT_NO_THROW((void)nlohmann::json::parse(RenderChart(report, spec)));
    spec.output = "x.CSV";
    EXPECT_FALSE(RenderChart(report, spec).empty());
    spec.output = "x.png";
    EXPECT_THROW(RenderChart(report, spec), ConfigError);
  }
  EXPECT_FALSE(ParseChartKind("pie").has_value());
}

TEST(RenderTest, MapBelowThresholdIsPlaceholder) {
  auto report = SampleReport();
  RenderSpec spec;
  spec.kind = ChartKind::kWorldMap;
  spec.output = "m.svg";
  EXPECT_NE(RenderChart(report, spec).find("below threshold"), std::string::npos);
  report.geo.map_included = true;
  EXPECT_EQ(Elements(ParseSvg(RenderChart(report, spec)), "circle").size(), 1u);
}

TEST(RenderTest, OccupationPanelsPerGender) {
  auto tree = ParseSvg(RenderOccupationGrid(SampleReport().occupations_by_gender, 10, 800));
  int panels = 0;
  for (const auto &[name, child] : tree.get_child("svg")) panels += name == "g";
  EXPECT_EQ(panels, 2);
}

TEST(RenderTest, SvgIsDeterministic) {
  auto report = SampleReport();
  RenderSpec spec;
  spec.kind = ChartKind::kGenderBars;
  spec.output = "g.svg";
  EXPECT_EQ(RenderChart(report, spec), RenderChart(report, spec));
}

}  // namespace
}  // namespace bias_audit
