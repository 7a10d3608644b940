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

#ifndef BIAS_AUDIT_CORE_PIPELINE_H_
#define BIAS_AUDIT_CORE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/agreement.h"
#include "core/dataset.h"
#include "core/linking.h"
#include "core/render.h"
#include "core/report.h"
#include "core/transport.h"

namespace bias_audit {

enum class FetchMode { kLive, kRecord, kReplay };

const char *FetchModeName(FetchMode mode);
std::optional<FetchMode> ParseFetchMode(std::string_view name);

enum class LinkerKind { kAuto, kIdentifiers, kSidecar, kGazetteer };

const char *LinkerKindName(LinkerKind kind);
std::optional<LinkerKind> ParseLinkerKind(std::string_view name);

inline constexpr char kFixtureFileName[] = "fixtures.jsonl";

struct AuditConfig {
  std::filesystem::path manifest;
  std::optional<Split> split;
  std::optional<FieldMapping> fields;
  bool strict = false;
  // Keeps a deterministic sample of this many records; 0 keeps all.
  std::size_t sample = 0;
  std::uint64_t seed = 13;

  FetchMode mode = FetchMode::kLive;
  std::filesystem::path fixtures_dir;
  std::optional<std::filesystem::path> cache_path;
  std::string sparql_endpoint = "https://query.wikidata.org/sparql";
  std::string wiki_api = "https://en.wikipedia.org/w/api.php";
  std::string user_agent = "bias-audit/1.0 (https://example.org/bias-audit)";
  double rate_limit = 5.0;
  std::size_t batch_size = 50;
  std::size_t parallelism = 1;
  RetryPolicy retry;
  // Empty: today's date in live/record mode, the fixture date in replay.
  std::string snapshot;

  LinkerKind linker = LinkerKind::kAuto;
  std::optional<std::filesystem::path> sidecar_path;
  std::optional<std::filesystem::path> gazetteer_path;
  double min_confidence = 0.0;
  bool include_question = true;
  bool include_answers = true;
  bool include_context = false;

  CountingBasis basis = CountingBasis::kPerMention;
  std::size_t top_k = 10;
  std::set<Property> location_sources = DefaultLocationSources();
  std::vector<std::string> male_terms = DefaultMaleTerms();
  std::vector<std::string> female_terms = DefaultFemaleTerms();
  std::optional<std::filesystem::path> class_map_path;

  std::filesystem::path out_dir = "out";
  std::vector<ChartKind> charts = AllCharts();
  int chart_width = 800;
  int chart_height = 400;

  // Applies BIAS_AUDIT_SPARQL_ENDPOINT, BIAS_AUDIT_WIKI_API and
  // BIAS_AUDIT_USER_AGENT when set.
  void ApplyEnvironment();
  // Throws ConfigError for inconsistent settings.
  void Validate() const;
};

// Transport stack and cache for one run. `network` replaces the HTTP client
// (tests inject fakes); it must outlive the session.
class Session {
 public:
  explicit Session(const AuditConfig &config, Transport *network = nullptr);
  ~Session();

  Transport &transport() { return *top_; }
  PropertyCache *cache() { return cache_.get(); }
  const std::string &snapshot() const { return snapshot_; }
  std::size_t network_calls() const { return top_->network_calls(); }

 private:
  std::unique_ptr<Transport> http_;
  std::unique_ptr<ResilientTransport> resilient_;
  std::unique_ptr<RecordingTransport> recording_;
  std::unique_ptr<ReplayTransport> replay_;
  std::unique_ptr<PropertyCache> cache_;
  Transport *top_ = nullptr;
  std::string snapshot_;
};

struct IngestResult {
  DatasetManifest manifest;
  Split split = Split::kTest;
  std::vector<DatasetRecord> records;
};

IngestResult IngestStage(const AuditConfig &config, Warnings *warnings);
std::vector<EntityLink> LinkStage(const AuditConfig &config,
                                  const std::vector<DatasetRecord> &records, Session &session,
                                  Warnings *warnings, std::string *linker_used = nullptr);
std::map<Qid, EntityProfile> FetchStage(const AuditConfig &config,
                                        const std::vector<EntityLink> &links, Session &session);
AuditReport AnalyzeStage(const AuditConfig &config, const std::vector<DatasetRecord> &records,
                         const std::vector<EntityLink> &links,
                         const std::map<Qid, EntityProfile> &profiles);

// Output file name -> content, in write order.
using OutputFiles = std::vector<std::pair<std::string, std::string>>;

OutputFiles ReportOutputs(const AuditReport &report, const AuditConfig &config);
// Creates the directory and writes each file atomically.
void WriteOutputs(const std::filesystem::path &dir, const OutputFiles &files);

struct AuditRun {
  AuditReport report;
  OutputFiles files;
  std::size_t network_calls = 0;
};

// ingest -> link -> fetch -> analyze, all in memory; nothing is written.
// Stage failures are rethrown with a "[stage]" prefix and the original kind.
AuditRun RunAudit(const AuditConfig &config, Transport *network = nullptr);

struct KappaConfig {
  AnnotationLoadOptions load;
  bool pooled = false;
};

// JSON document with per-unit results, the mean/SD summary and optionally
// the pooled coefficient.
std::string KappaReportJson(const std::filesystem::path &csv, const KappaConfig &config,
                            Warnings *warnings);

std::vector<DatasetRecord> SampleRecords(std::vector<DatasetRecord> records, std::size_t n,
                                         std::uint64_t seed);

std::string TodayUtc();

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_PIPELINE_H_
