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

#include "core/report.h"

#include <gtest/gtest.h>

#include <random>

#include "core/errors.h"
#include "support/test_paths.h"

namespace bias_audit {
namespace {

using Json = nlohmann::json;

struct Inputs {
  std::vector<DatasetRecord> records;
  std::vector<EntityLink> links;
  std::map<Qid, EntityProfile> profiles;
};

Inputs RandomInputs(std::uint32_t seed, int n_records) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  const char *genders[] = {"male", "female"};
  const char *jobs[] = {"nurse", "politician", "actor", "singer"};
  const char *faiths[] = {"Islam", "Catholicism",
                          "The Church of Jesus Christ of Latter-day Saints"};
  Inputs in;
  for (std::uint64_t q = 1; q <= 60; ++q) {
    EntityProfile p;
    p.qid = Qid(q);
    p.found = true;
    p.snapshot_id = "2026-10-16";
    p.instance_of = {{rng() % 2 ? kHumanClass : Qid(515), "c"}};
    if (rng() % 2) p.gender = {{Qid(100 + rng() % 2), genders[rng() % 2]}};
    for (int k = rng() % 3; k > 0; --k) p.occupations.push_back({Qid(200 + k), jobs[rng() % 4]});
    if (rng() % 3 == 0) p.religion = {{Qid(42504 + rng() % 3), faiths[rng() % 3]}};
    if (rng() % 2) p.coordinates = Coordinates{lat(rng), lon(rng)};
    if (rng() % 2) p.location_names = {{Qid(30), "United States", Property::kCountry}};
    in.profiles[p.qid] = p;
  }
  for (int i = 0; i < n_records; ++i) {
    DatasetRecord r;
    r.record_id = "r" + std::to_string(i);
    r.question = rng() % 3 ? "Did he go?" : "Was she there, the \"big\" one?";
    in.records.push_back(r);
    for (int k = rng() % 3; k > 0; --k) {
      EntityLink l;
      l.record_id = r.record_id;
      l.surface = "x";
      l.field = LinkField::kIdentifier;
      l.provenance = Provenance::kScenario1;
      l.qid = Qid(1 + rng() % 70);  // some have no profile
      in.links.push_back(l);
    }
  }
  return in;
}

AuditReport Sample(std::uint32_t seed = 1, int n = 200,
                   CountingBasis basis = CountingBasis::kPerMention) {
  auto in = RandomInputs(seed, n);
  AnalysisOptions options;
  options.basis = basis;
  auto r = BuildAuditReport(in.records, in.links, in.profiles, options);
  r.benchmark_name = "Sample, \"quoted\"";
  r.split = "dev";
  r.snapshot_id = "2026-10-16";
  r.analysis_category = "encyclopedic";
  r.scenario = "wikipedia_identifiers";
  r.linker = "identifiers";
  r.warnings = {{"unresolved_title", 3}};
  return r;
}

TEST(ReportTest, JsonRoundTripIsByteIdentical) {
  for (std::uint32_t seed : {1u, 2u, 3u}) {
    for (auto basis : {CountingBasis::kPerMention, CountingBasis::kPerUniqueEntity}) {
      AuditReport r = Sample(seed, 50 + 100 * seed, basis);
      std::string text = SerializeReport(r);
      AuditReport back = ReportFromJson(Json::parse(text));
      EXPECT_EQ(back, r);
      EXPECT_EQ(SerializeReport(back), text);
    }
  }
}

TEST(ReportTest, LoadFromDisk) {
  testing::TempDir dir;
  AuditReport r = Sample();
  testing::WriteFile(dir / "report.json", SerializeReport(r));
  EXPECT_EQ(LoadReport(dir / "report.json"), r);
  testing::WriteFile(dir / "bad.json", "{not json");
  EXPECT_THROW(LoadReport(dir / "bad.json"), DataError);
}

TEST(ReportTest, SchemaViolationsAreDataErrors) {
  Json good = ReportToJson(Sample());
  auto expect_bad = [](Json j) { EXPECT_THROW(ReportFromJson(j), DataError) << j.dump().substr(0, 80); };
  {
    Json j = good;
    j["schema_version"] = 99;
    expect_bad(j);
  }
  {
    Json j = good;
    j.erase("gender");
    expect_bad(j);
  }
  {
    Json j = good;
    j["gender"]["total"] = j["gender"]["total"].get<long>() + 1;
    expect_bad(j);
  }
  {
    Json j = good;
    j["gender"]["counting_basis"] = "per_sentence";
    expect_bad(j);
  }
  {
    Json j = good;
    j["records"] = "many";
    expect_bad(j);
  }
  expect_bad(Json::array());
}

TEST(ReportTest, ThresholdMetadataIsExplicit) {
  Json j = ReportToJson(Sample());
  EXPECT_EQ(j["gender"]["threshold"], 30);
  EXPECT_EQ(j["gender"]["threshold_rule"], "greater_than");
  EXPECT_EQ(j["religion"]["threshold_rule"], "greater_than");
  EXPECT_EQ(j["occupations_by_gender"]["occupations"]["threshold"], 300);
  EXPECT_EQ(j["occupations_by_gender"]["occupations"]["threshold_rule"], "at_least");
  EXPECT_EQ(j["coordinates"]["threshold"], 30);
  EXPECT_EQ(j["location_names"]["threshold_rule"], "at_least");
  EXPECT_EQ(j["gender"]["counting_basis"], "per_mention");
}

TEST(ReportTest, ExclusionFlagsFollowInclusion) {
  for (std::uint32_t seed = 1; seed < 12; ++seed) {
    AuditReport r = Sample(seed, 5 + 40 * seed);
    std::set<std::string> flags(r.exclusion_flags.begin(), r.exclusion_flags.end());
    EXPECT_EQ(flags.count("gender") == 0, r.gender.total > 30);
    EXPECT_EQ(flags.count("religion") == 0, r.religion.distribution.total > 30);
    EXPECT_EQ(flags.count("occupation_chart") == 0,
              r.occupations_by_gender.occupations.total >= 300);
    EXPECT_EQ(flags.count("coordinates_map") == 0, r.geo.coordinates.size() >= 30);
    EXPECT_EQ(flags.count("location_names") == 0, r.geo.location_names.total >= 30);
  }
}

TEST(ReportTest, SummaryCsv) {
  AuditReport r;
  r.entity_count_summary.per_mention = {10, 9, 4, 6, 0, 1, 3, 5};
  r.entity_count_summary.per_unique_entity = {7, 6, 3, 4, 0, 1, 2, 4};
  EXPECT_EQ(SummaryCsv(r),
            "column,per_mention,per_unique_entity\n"
            "entities,10,7\ninstance_of,9,6\ngender,4,3\noccupation,6,4\n"
            "ethnicity,0,0\nreligion,1,1\ncoordinates,3,2\nlocation_names,5,4\n");
}

}  // namespace
}  // namespace bias_audit
