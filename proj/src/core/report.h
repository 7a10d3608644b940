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

#ifndef BIAS_AUDIT_CORE_REPORT_H_
#define BIAS_AUDIT_CORE_REPORT_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "core/metrics.h"
#include "json.hpp"

namespace bias_audit {

inline constexpr int kReportSchemaVersion = 1;

// Everything computed for one benchmark split. Serialized as report.json;
// the JSON Schema lives in docs/report.schema.json.
struct AuditReport {
  int schema_version = kReportSchemaVersion;
  std::string benchmark_name;
  std::string split;
  std::string snapshot_id;
  std::string analysis_category;
  // "wikipedia_identifiers" or "entity_linking".
  std::string scenario;
  std::string linker;
  CountingBasis basis = CountingBasis::kPerMention;
  long records = 0;
  long links = 0;
  std::vector<std::string> location_sources;

  EntityCountSummary entity_count_summary;
  Distribution instance_classes;
  Distribution gender;
  OccupationsByGender occupations_by_gender;
  ReligionResult religion;
  GeoResult geo;
  KeywordMatch keyword_match;
  std::vector<std::string> exclusion_flags;
  std::map<std::string, std::size_t> warnings;

  bool operator==(const AuditReport &) const = default;
};

struct AnalysisOptions {
  CountingBasis basis = CountingBasis::kPerMention;
  std::size_t top_k = 10;
  std::set<Property> location_sources = DefaultLocationSources();
  std::vector<std::string> male_terms = DefaultMaleTerms();
  std::vector<std::string> female_terms = DefaultFemaleTerms();
  const ClassMap *classes = nullptr;
};

// Runs every metric. Header fields (benchmark, split, snapshot, scenario,
// linker, category) are left for the caller to fill.
AuditReport BuildAuditReport(const std::vector<DatasetRecord> &records,
                             const std::vector<EntityLink> &links,
                             const std::map<Qid, EntityProfile> &profiles,
                             const AnalysisOptions &options);

// Names of dimensions that fall below their inclusion threshold.
std::vector<std::string> ExclusionFlags(const AuditReport &report);

nlohmann::json ReportToJson(const AuditReport &report);
// Throws DataError when the document does not follow the schema.
AuditReport ReportFromJson(const nlohmann::json &json);
// Pretty-printed JSON with a trailing newline; byte-stable for equal reports.
std::string SerializeReport(const AuditReport &report);
AuditReport LoadReport(const std::filesystem::path &path);

// One row per entity-count column: column,per_mention,per_unique_entity.
std::string SummaryCsv(const AuditReport &report);

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_REPORT_H_
