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

#ifndef BIAS_AUDIT_CORE_RENDER_H_
#define BIAS_AUDIT_CORE_RENDER_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/report.h"

namespace bias_audit {

enum class ChartKind { kGenderBars, kOccupationGrid, kReligionBars, kWorldMap, kChecklistTable };

const char *ChartName(ChartKind kind);
std::optional<ChartKind> ParseChartKind(std::string_view name);
std::vector<ChartKind> AllCharts();

struct RenderSpec {
  ChartKind kind = ChartKind::kGenderBars;
  // Extension selects the format: .svg, .json or .csv.
  std::filesystem::path output;
  int width = 800;
  int height = 400;
  std::size_t top_k = 10;
};

// Equirectangular projection onto a width x height canvas.
std::pair<double, double> ProjectEquirectangular(double latitude, double longitude, int width,
                                                 int height);

std::string RenderWorldMap(const std::vector<Coordinates> &points, int width, int height);
// Bar widths are proportional to counts; labels carry rounded percentages.
// A below-threshold distribution renders a placeholder instead of bars.
std::string RenderBars(const Distribution &d, std::string_view title, std::size_t k, int width);
std::string RenderOccupationGrid(const OccupationsByGender &occ, std::size_t k, int width);
std::string RenderChecklistTable(const EntityCountSummary &summary);

// Chart content in the format chosen by spec.output's extension. Throws
// ConfigError for an unsupported extension.
std::string RenderChart(const AuditReport &report, const RenderSpec &spec);

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_RENDER_H_
