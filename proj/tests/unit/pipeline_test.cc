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

#include "core/pipeline.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "core/errors.h"
#include "support/fake_wikimedia.h"
#include "support/test_paths.h"

namespace bias_audit {
namespace {

using testing::DataPath;
using testing::FakeWikimedia;
using testing::TempDir;

AuditConfig BaseConfig(const std::filesystem::path &fixtures) {
  AuditConfig c;
  c.manifest = DataPath("boolq_mini/manifest.json");
  c.fixtures_dir = fixtures;
  c.rate_limit = 1000;
  c.snapshot = "2026-10-16";
  return c;
}

std::string ErrorOf(const std::function<void()> &fn, ErrorKind *kind) {
  try {
    fn();
  } catch (const AuditError &e) {
    *kind = e.kind();
    return e.what();
  }
  return "";
}

TEST(PipelineTest, RecordThenReplayIsIdentical) {
  TempDir dir;
  auto fake = FakeWikimedia::FromFile(DataPath("world.json"));
  AuditConfig record = BaseConfig(dir.path());
  record.mode = FetchMode::kRecord;
  AuditRun live = RunAudit(record, &fake);
  EXPECT_GT(live.network_calls, 0u);
  EXPECT_TRUE(std::filesystem::exists(dir / kFixtureFileName));

  AuditConfig replay = BaseConfig(dir.path());
  replay.mode = FetchMode::kReplay;
  replay.snapshot.clear();
  AuditRun again = RunAudit(replay);
  EXPECT_EQ(again.network_calls, 0u);
  EXPECT_EQ(again.report, live.report);
  EXPECT_EQ(again.files, live.files);
  EXPECT_EQ(again.report.snapshot_id, "2026-10-16");
  EXPECT_EQ(again.report.scenario, "wikipedia_identifiers");
  EXPECT_EQ(again.report.benchmark_name, "BoolQ-mini");
  EXPECT_EQ(again.report.split, "dev");
}

TEST(PipelineTest, CommittedFixturesReplayWithoutNetwork) {
  AuditConfig c = BaseConfig(DataPath("boolq_mini/fixtures"));
  c.mode = FetchMode::kReplay;
  c.snapshot.clear();
  AuditRun a = RunAudit(c);
  AuditRun b = RunAudit(c);
  EXPECT_EQ(a.network_calls, 0u);
  EXPECT_EQ(a.files, b.files);
  std::set<std::string> names;
  for (const auto &[name, content] : a.files) names.insert(name);
  for (const char *n : {"report.json", "summary.csv", "gender_bars.svg", "world_map.svg",
                        "occupation_grid.svg", "religion_bars.svg", "checklist_table.svg"}) {
    EXPECT_TRUE(names.count(n)) << n;
  }
}

TEST(PipelineTest, ReplayMissIsDataError) {
  TempDir dir;
  testing::WriteFile(dir / kFixtureFileName, "");
  AuditConfig c = BaseConfig(dir.path());
  c.mode = FetchMode::kReplay;
  ErrorKind kind = ErrorKind::kInternal;
  std::string msg = ErrorOf([&] { RunAudit(c); }, &kind);
  EXPECT_EQ(kind, ErrorKind::kData);
  EXPECT_NE(msg.find("replay miss"), std::string::npos) << msg;
  EXPECT_EQ(msg.rfind("[link]", 0), 0u) << msg;
}

TEST(PipelineTest, MissingManifestIsConfigErrorAndWritesNothing) {
  TempDir dir;
  AuditConfig c = BaseConfig(dir.path());
  c.manifest = dir / "nope.json";
  c.out_dir = dir / "out";
  ErrorKind kind = ErrorKind::kInternal;
  std::string msg = ErrorOf([&] { RunAudit(c); }, &kind);
  EXPECT_EQ(kind, ErrorKind::kConfig);
  EXPECT_EQ(msg.rfind("[ingest]", 0), 0u) << msg;
  EXPECT_FALSE(std::filesystem::exists(dir / "out"));

  c.manifest.clear();
  msg = ErrorOf([&] { RunAudit(c); }, &kind);
  EXPECT_EQ(kind, ErrorKind::kConfig);
  EXPECT_EQ(msg.rfind("[config]", 0), 0u) << msg;
}

TEST(PipelineTest, ValidateRejectsBadSettings) {
  AuditConfig c = BaseConfig("");
  c.mode = FetchMode::kReplay;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = BaseConfig("x");
  c.batch_size = 51;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = BaseConfig("x");
  c.linker = LinkerKind::kSidecar;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = BaseConfig("x");
  c.min_confidence = 1.5;
  EXPECT_THROW(c.Validate(), ConfigError);
  EXPECT_NO_THROW(BaseConfig("x").Validate());
}

TEST(PipelineTest, NetworkOutageIsNetworkError) {
  TempDir dir;
  auto fake = FakeWikimedia::FromFile(DataPath("world.json"));
  fake.FailNext(1000, 503);
  AuditConfig c = BaseConfig(dir.path());
  c.retry.max_retries = 1;
  c.retry.base_delay = std::chrono::milliseconds(1);
  ErrorKind kind = ErrorKind::kInternal;
  std::string msg = ErrorOf([&] { RunAudit(c, &fake); }, &kind);
  EXPECT_EQ(kind, ErrorKind::kNetwork) << msg;
}

TEST(PipelineTest, SidecarRun) {
  TempDir dir;
  testing::WriteFile(dir / "manifest.json",
                     R"({"benchmark_name":"Sidecar","format_id":"jsonl","available_splits":["dev"],)"
                     R"("test_hidden":false,"analysis_category":"commonsense",)"
                     R"("files":{"dev":")" + DataPath("sidecar/records.jsonl").string() + R"("}})");
  auto fake = FakeWikimedia::FromFile(DataPath("world.json"));
  AuditConfig c = BaseConfig(dir.path());
  c.manifest = dir / "manifest.json";
  c.fields = FieldMapping::Parse("id=record_id");
  c.sidecar_path = DataPath("sidecar/links.jsonl");
  AuditRun run = RunAudit(c, &fake);
  EXPECT_EQ(run.report.scenario, "entity_linking");
  EXPECT_EQ(run.report.linker, "sidecar");
  EXPECT_EQ(run.report.links, 6);
  EXPECT_EQ(fake.mediawiki_requests(), 0u);
}

TEST(PipelineTest, SampleIsDeterministicSubset) {
  std::vector<DatasetRecord> records(100);
  for (int i = 0; i < 100; ++i) records[i].record_id = std::to_string(i);
  auto a = SampleRecords(records, 10, 7);
  auto b = SampleRecords(records, 10, 7);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 10u);
  std::set<std::string> ids;
  for (const auto &r : a) ids.insert(r.record_id);
  EXPECT_EQ(ids.size(), 10u);
  EXPECT_NE(SampleRecords(records, 10, 8), a);
  EXPECT_EQ(SampleRecords(records, 500, 7).size(), 100u);
  EXPECT_EQ(SampleRecords(records, 0, 7).size(), 100u);
}

TEST(PipelineTest, KappaReport) {
  TempDir dir;
  testing::WriteFile(dir / "k.csv",
                     "unit_id,question_id,question_category,annotator,answer\n"
                     "p1,q1,g,a,yes\np1,q1,g,b,yes\np1,q2,g,a,no\np1,q2,g,b,no\n"
                     "p2,q1,g,a,yes\np2,q1,g,b,no\np2,q2,g,a,no\np2,q2,g,b,no\n"
                     "p3,q1,suggest_other_annotation,a,no\np3,q1,suggest_other_annotation,b,no\n");
  Warnings w;
  auto j = nlohmann::json::parse(KappaReportJson(dir / "k.csv", {.pooled = true}, &w));
  ASSERT_EQ(j["units"].size(), 2u);
  EXPECT_DOUBLE_EQ(j["units"][0]["kappa"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j["units"][1]["kappa"].get<double>(), 0.0);
  EXPECT_DOUBLE_EQ(j["summary"]["mean"].get<double>(), 0.5);
  EXPECT_EQ(j["summary"]["sd_kind"], "sample");
  EXPECT_TRUE(j.contains("pooled"));
  EXPECT_EQ(w.Count("unit_without_eligible_items"), 1u);
  KappaConfig strict;
  strict.load.strict = true;
  EXPECT_THROW(KappaReportJson(dir / "k.csv", strict, &w), DataError);
}

}  // namespace
}  // namespace bias_audit
