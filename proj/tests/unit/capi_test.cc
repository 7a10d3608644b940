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

// Exercises the library strictly through its C interface.

#include "bias_audit/bias_audit.h"

#include <gtest/gtest.h>
#include <stdlib.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

const fs::path kData = BA_TEST_DATA_DIR;

class CapiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    char tmpl[] = "/tmp/ba_capi_XXXXXX";
    dir_ = mkdtemp(tmpl);
    ctx_ = ba_context_create();
    ASSERT_NE(ctx_, nullptr);
  }
  void TearDown() override {
    ba_context_destroy(ctx_);
    fs::remove_all(dir_);
  }

  void Set(const char *key, const std::string &value) {
    ASSERT_EQ(ba_context_set_option(ctx_, key, value.c_str()), BA_OK)
        << key << ": " << ba_context_last_error(ctx_);
  }

  void ReplayConfig() {
    Set("manifest", (kData / "boolq_mini/manifest.json").string());
    Set("mode", "replay");
    Set("fixtures", (kData / "boolq_mini/fixtures").string());
  }

  static std::string Slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  ba_context *ctx_ = nullptr;
};

TEST_F(CapiTest, VersionAndStatusNames) {
  EXPECT_STRNE(ba_version(), "");
  EXPECT_STREQ(ba_status_name(BA_OK), "ok");
  EXPECT_STRNE(ba_status_name(BA_ERR_NETWORK), ba_status_name(BA_ERR_DATA));
}

TEST_F(CapiTest, NullAndUnknownArguments) {
  EXPECT_EQ(ba_context_set_option(nullptr, "seed", "1"), BA_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ba_context_set_option(ctx_, "no_such_option", "1"), BA_ERR_INVALID_ARGUMENT);
  EXPECT_STRNE(ba_context_last_error(ctx_), "");
  EXPECT_EQ(ba_context_set_option(ctx_, "batch_size", "many"), BA_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ba_context_set_option(ctx_, "mode", "sometimes"), BA_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ba_context_set_option(ctx_, "strict", "perhaps"), BA_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ba_context_set_option(ctx_, "location_sources", "P999"), BA_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ba_context_set_option(ctx_, "seed", "7"), BA_OK);
  EXPECT_STREQ(ba_context_last_error(ctx_), "");
  EXPECT_EQ(ba_audit(nullptr, nullptr), BA_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ba_ingest(ctx_, nullptr), BA_ERR_INVALID_ARGUMENT);
  ba_report_destroy(nullptr);
  ba_string_free(nullptr);
}

TEST_F(CapiTest, MissingManifestIsConfigError) {
  Set("manifest", (dir_ / "missing.json").string());
  Set("out", (dir_ / "out").string());
  EXPECT_EQ(ba_audit(ctx_, nullptr), BA_ERR_CONFIG);
  EXPECT_NE(std::string(ba_context_last_error(ctx_)).find("[ingest]"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(CapiTest, ReplayMissIsDataError) {
  Set("manifest", (kData / "boolq_mini/manifest.json").string());
  Set("mode", "replay");
  std::ofstream(dir_ / "fixtures.jsonl").close();
  Set("fixtures", dir_.string());
  EXPECT_EQ(ba_audit(ctx_, nullptr), BA_ERR_DATA);
  EXPECT_NE(std::string(ba_context_last_error(ctx_)).find("replay miss"), std::string::npos);
}

TEST_F(CapiTest, AuditWritesOutputsWithoutNetwork) {
  ReplayConfig();
  Set("out", (dir_ / "out").string());
  ba_report *report = nullptr;
  ASSERT_EQ(ba_audit(ctx_, &report), BA_OK) << ba_context_last_error(ctx_);
  ASSERT_NE(report, nullptr);
  EXPECT_EQ(ba_context_network_calls(ctx_), 0u);
  for (const char *f : {"report.json", "summary.csv", "gender_bars.svg", "world_map.svg"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  }
  char *json = nullptr;
  ASSERT_EQ(ba_report_to_json(ctx_, report, &json), BA_OK);
  Json j = Json::parse(json);
  EXPECT_EQ(j["benchmark_name"], "BoolQ-mini");
  EXPECT_EQ(j, Json::parse(Slurp(dir_ / "out" / "report.json")));
  ba_string_free(json);

  ba_report *loaded = nullptr;
  ASSERT_EQ(ba_report_load(ctx_, (dir_ / "out/report.json").c_str(), &loaded), BA_OK);
  ASSERT_EQ(ba_render(ctx_, loaded, "religion_bars", (dir_ / "r.csv").c_str()), BA_OK);
  EXPECT_EQ(Slurp(dir_ / "r.csv").rfind("label,count,percent\n", 0), 0u);
  EXPECT_EQ(ba_render(ctx_, loaded, "pie_chart", (dir_ / "p.svg").c_str()),
            BA_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ba_render(ctx_, loaded, "world_map", (dir_ / "p.gif").c_str()), BA_ERR_CONFIG);
  ASSERT_EQ(ba_report_write(ctx_, loaded, (dir_ / "copy").c_str()), BA_OK);
  EXPECT_EQ(Slurp(dir_ / "copy/report.json"), Slurp(dir_ / "out/report.json"));
  ba_report_destroy(loaded);
  ba_report_destroy(report);
}

TEST_F(CapiTest, StagesMatchFullAudit) {
  ReplayConfig();
  Set("charts", "none");
  ba_report *full = nullptr;
  ASSERT_EQ(ba_audit(ctx_, &full), BA_OK) << ba_context_last_error(ctx_);

  const auto records = (dir_ / "records.jsonl").string();
  const auto links = (dir_ / "links.jsonl").string();
  const auto profiles = (dir_ / "profiles.jsonl").string();
  ASSERT_EQ(ba_ingest(ctx_, records.c_str()), BA_OK) << ba_context_last_error(ctx_);
  ASSERT_EQ(ba_link(ctx_, records.c_str(), links.c_str()), BA_OK) << ba_context_last_error(ctx_);
  ASSERT_EQ(ba_fetch(ctx_, links.c_str(), profiles.c_str()), BA_OK)
      << ba_context_last_error(ctx_);
  ba_report *staged = nullptr;
  ASSERT_EQ(ba_analyze(ctx_, records.c_str(), links.c_str(), profiles.c_str(), &staged), BA_OK)
      << ba_context_last_error(ctx_);

  char *a = nullptr;
  char *b = nullptr;
  ASSERT_EQ(ba_report_to_json(ctx_, full, &a), BA_OK);
  ASSERT_EQ(ba_report_to_json(ctx_, staged, &b), BA_OK);
  Json ja = Json::parse(a), jb = Json::parse(b);
  ja.erase("warnings");
  jb.erase("warnings");
  EXPECT_EQ(ja, jb);
  ba_string_free(a);
  ba_string_free(b);
  ba_report_destroy(full);
  ba_report_destroy(staged);
}

TEST_F(CapiTest, Kappa) {
  std::ofstream(dir_ / "k.csv") << "unit_id,question_id,question_category,annotator,answer\n"
                                   "p,q1,g,a,yes\np,q1,g,b,yes\np,q2,g,a,no\np,q2,g,b,yes\n"
                                   "p,q3,g,a,no\np,q3,g,b,no\n";
  char *json = nullptr;
  ASSERT_EQ(ba_kappa(ctx_, (dir_ / "k.csv").c_str(), &json), BA_OK) << ba_context_last_error(ctx_);
  Json j = Json::parse(json);
  ba_string_free(json);
  ASSERT_EQ(j["units"].size(), 1u);
  // p_o = 2/3, p_e = (1/3)(2/3) + (2/3)(1/3) = 4/9.
  EXPECT_NEAR(j["units"][0]["kappa"].get<double>(), (2.0 / 3 - 4.0 / 9) / (1 - 4.0 / 9), 1e-12);
  EXPECT_TRUE(j["summary"]["sd"].is_null());
  EXPECT_EQ(ba_kappa(ctx_, (dir_ / "none.csv").c_str(), &json), BA_ERR_CONFIG);
}

}  // namespace
