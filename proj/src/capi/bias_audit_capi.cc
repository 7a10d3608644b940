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

#include "bias_audit/bias_audit.h"

#include <algorithm>
#include <charconv>
#include <memory>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <string_view>

#include "core/errors.h"
#include "core/pipeline.h"
#include "core/text.h"

using namespace bias_audit;  // NOLINT(build/namespaces)

struct ba_context {
  AuditConfig config;
  KappaConfig kappa;
  std::string last_error;
  std::size_t network_calls = 0;
};

struct ba_report {
  AuditReport report;
};

namespace {

class InvalidArgument : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Fn>
ba_status Guard(ba_context *ctx, Fn &&fn) {
  if (ctx == nullptr) return BA_ERR_INVALID_ARGUMENT;
  ctx->last_error.clear();
  try {
    fn();
    return BA_OK;
  } catch (const InvalidArgument &e) {
    ctx->last_error = e.what();
    return BA_ERR_INVALID_ARGUMENT;
  } catch (const AuditError &e) {
    ctx->last_error = e.what();
    switch (e.kind()) {
      case ErrorKind::kConfig:
        return BA_ERR_CONFIG;
      case ErrorKind::kNetwork:
        return BA_ERR_NETWORK;
      case ErrorKind::kData:
        return BA_ERR_DATA;
      case ErrorKind::kInternal:
        return BA_ERR_INTERNAL;
    }
    return BA_ERR_INTERNAL;
  } catch (const std::exception &e) {
    ctx->last_error = std::string("internal error: ") + e.what();
    return BA_ERR_INTERNAL;
  } catch (...) {
    ctx->last_error = "internal error";
    return BA_ERR_INTERNAL;
  }
}

void Require(const void *p, const char *what) {
  if (p == nullptr) throw InvalidArgument(std::string(what) + " must not be NULL");
}

bool ParseBool(std::string_view key, std::string_view v) {
  std::string s = text::AsciiLower(v);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw InvalidArgument("option '" + std::string(key) + "' expects a boolean, got '" +
                        std::string(v) + "'");
}

template <typename T>
T ParseInt(std::string_view key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw InvalidArgument("option '" + std::string(key) + "' expects an integer, got '" +
                          std::string(v) + "'");
  }
  return out;
}

double ParseDouble(std::string_view key, const std::string &v) {
  char *end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw InvalidArgument("option '" + std::string(key) + "' expects a number, got '" + v + "'");
  }
  return d;
}

std::vector<std::string> ParseList(std::string_view v) {
  std::vector<std::string> out;
  for (auto &part : text::Split(v, ',')) {
    std::string t(text::Trim(part));
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

void SetOption(ba_context *ctx, std::string_view key, const std::string &value) {
  AuditConfig &c = ctx->config;
  auto bad = [&](const char *expected) {
    throw InvalidArgument("option '" + std::string(key) + "' expects " + expected + ", got '" +
                          value + "'");
  };
  if (key == "manifest") {
    c.manifest = value;
  } else if (key == "split") {
    auto s = ParseSplit(value);
    if (!s) bad("train, dev or test");
    c.split = *s;
  } else if (key == "fields") {
    try {
      c.fields = FieldMapping::Parse(value);
    } catch (const AuditError &e) {
      throw InvalidArgument(e.what());
    }
  } else if (key == "strict") {
    c.strict = ParseBool(key, value);
    ctx->kappa.load.strict = c.strict;
  } else if (key == "sample") {
    c.sample = ParseInt<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = ParseInt<std::uint64_t>(key, value);
  } else if (key == "mode") {
    auto m = ParseFetchMode(value);
    if (!m) bad("live, record or replay");
    c.mode = *m;
  } else if (key == "fixtures") {
    c.fixtures_dir = value;
  } else if (key == "cache") {
    if (value.empty()) {
      c.cache_path.reset();
    } else {
      c.cache_path = value;
    }
  } else if (key == "endpoint") {
    c.sparql_endpoint = value;
  } else if (key == "wiki_api") {
    c.wiki_api = value;
  } else if (key == "user_agent") {
    c.user_agent = value;
  } else if (key == "rate_limit") {
    c.rate_limit = ParseDouble(key, value);
  } else if (key == "batch_size") {
    c.batch_size = ParseInt<std::size_t>(key, value);
  } else if (key == "parallelism") {
    c.parallelism = ParseInt<std::size_t>(key, value);
  } else if (key == "max_retries") {
    c.retry.max_retries = ParseInt<int>(key, value);
  } else if (key == "snapshot") {
    c.snapshot = value;
  } else if (key == "linker") {
    auto k = ParseLinkerKind(value);
    if (!k) bad("auto, identifiers, sidecar or gazetteer");
    c.linker = *k;
  } else if (key == "sidecar") {
    c.sidecar_path = value;
  } else if (key == "gazetteer") {
    c.gazetteer_path = value;
  } else if (key == "min_confidence") {
    c.min_confidence = ParseDouble(key, value);
  } else if (key == "include_question") {
    c.include_question = ParseBool(key, value);
  } else if (key == "include_answers") {
    c.include_answers = ParseBool(key, value);
  } else if (key == "include_context") {
    c.include_context = ParseBool(key, value);
  } else if (key == "basis") {
    auto b = ParseBasis(value);
    if (!b) bad("mention or unique");
    c.basis = *b;
  } else if (key == "top_k") {
    c.top_k = ParseInt<std::size_t>(key, value);
  } else if (key == "location_sources") {
    std::set<Property> sources;
    for (const auto &id : ParseList(value)) {
      auto p = ParsePropertyId(id);
      if (!p || (*p != Property::kCountry && *p != Property::kCitizenship &&
                 *p != Property::kAdminLocation)) {
        bad("a list drawn from P17, P27, P131");
      }
      sources.insert(*p);
    }
    if (sources.empty()) bad("at least one property");
    c.location_sources = std::move(sources);
  } else if (key == "male_terms") {
    c.male_terms = ParseList(value);
  } else if (key == "female_terms") {
    c.female_terms = ParseList(value);
  } else if (key == "class_map") {
    c.class_map_path = value;
  } else if (key == "out") {
    c.out_dir = value;
  } else if (key == "charts") {
    std::vector<ChartKind> charts;
    for (const auto &name : ParseList(value)) {
      if (name == "none") continue;
      if (name == "all") {
        charts = AllCharts();
        continue;
      }
      auto k = ParseChartKind(name);
      if (!k) bad("chart names or 'all'/'none'");
      if (std::find(charts.begin(), charts.end(), *k) == charts.end()) charts.push_back(*k);
    }
    c.charts = std::move(charts);
  } else if (key == "chart_width") {
    c.chart_width = ParseInt<int>(key, value);
  } else if (key == "chart_height") {
    c.chart_height = ParseInt<int>(key, value);
  } else if (key == "exclude_category") {
    auto &ex = ctx->kappa.load.excluded_categories;
    if (std::find(ex.begin(), ex.end(), value) == ex.end()) ex.push_back(value);
  } else if (key == "exclude_categories") {
    ctx->kappa.load.excluded_categories = ParseList(value);
  } else if (key == "pooled") {
    ctx->kappa.pooled = ParseBool(key, value);
  } else {
    throw InvalidArgument("unknown option '" + std::string(key) + "'");
  }
}

char *CopyString(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const char *LinkerOf(const std::vector<EntityLink> &links) {
  if (links.empty()) return "identifiers";
  switch (links.front().provenance) {
    case Provenance::kScenario1:
      return "identifiers";
    case Provenance::kSidecar:
      return "sidecar";
    case Provenance::kGazetteer:
      return "gazetteer";
  }
  return "unknown";
}

}  // namespace

extern "C" {

const char *ba_version(void) { return "1.0.0"; }

const char *ba_status_name(ba_status status) {
  switch (status) {
    case BA_OK:
      return "ok";
    case BA_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case BA_ERR_CONFIG:
      return "config_error";
    case BA_ERR_NETWORK:
      return "network_error";
    case BA_ERR_DATA:
      return "data_error";
    case BA_ERR_INTERNAL:
      return "internal_error";
  }
  return "unknown";
}

ba_context *ba_context_create(void) {
  auto *ctx = new (std::nothrow) ba_context();
  if (ctx) ctx->config.ApplyEnvironment();
  return ctx;
}

void ba_context_destroy(ba_context *ctx) { delete ctx; }

ba_status ba_context_set_option(ba_context *ctx, const char *key, const char *value) {
  return Guard(ctx, [&] {
    Require(key, "key");
    Require(value, "value");
    SetOption(ctx, key, value);
  });
}

const char *ba_context_last_error(const ba_context *ctx) {
  return ctx ? ctx->last_error.c_str() : "null context";
}

size_t ba_context_network_calls(const ba_context *ctx) { return ctx ? ctx->network_calls : 0; }

ba_status ba_ingest(ba_context *ctx, const char *records_out) {
  return Guard(ctx, [&] {
    Require(records_out, "records_out");
    ctx->config.Validate();
    Warnings warnings;
    IngestResult r = IngestStage(ctx->config, &warnings);
    files::WriteAtomic(records_out, RecordsToJsonl(r.records));
  });
}

ba_status ba_link(ba_context *ctx, const char *records_in, const char *links_out) {
  return Guard(ctx, [&] {
    Require(records_in, "records_in");
    Require(links_out, "links_out");
    ctx->network_calls = 0;
    auto records = ReadRecordsJsonl(records_in);
    Session session(ctx->config);
    Warnings warnings;
    auto links = LinkStage(ctx->config, records, session, &warnings);
    ctx->network_calls = session.network_calls();
    files::WriteAtomic(links_out, LinksToJsonl(links));
  });
}

ba_status ba_fetch(ba_context *ctx, const char *links_in, const char *profiles_out) {
  return Guard(ctx, [&] {
    Require(links_in, "links_in");
    Require(profiles_out, "profiles_out");
    ctx->network_calls = 0;
    auto links = ReadLinksJsonl(links_in);
    Session session(ctx->config);
    auto profiles = FetchStage(ctx->config, links, session);
    ctx->network_calls = session.network_calls();
    std::vector<EntityProfile> list;
    for (auto &[qid, p] : profiles) list.push_back(std::move(p));
    files::WriteAtomic(profiles_out, ProfilesToJsonl(list));
  });
}

ba_status ba_analyze(ba_context *ctx, const char *records_in, const char *links_in,
                     const char *profiles_in, ba_report **report_out) {
  return Guard(ctx, [&] {
    Require(records_in, "records_in");
    Require(links_in, "links_in");
    Require(profiles_in, "profiles_in");
    Require(report_out, "report_out");
    *report_out = nullptr;
    auto records = ReadRecordsJsonl(records_in);
    auto links = ReadLinksJsonl(links_in);
    std::map<Qid, EntityProfile> profiles;
    for (auto &p : ReadProfilesJsonl(profiles_in)) {
      Qid q = p.qid;
      profiles.emplace(q, std::move(p));
    }
    auto report = std::make_unique<ba_report>();
    AuditReport &r = report->report;
    r = AnalyzeStage(ctx->config, records, links, profiles);
    if (!ctx->config.manifest.empty()) {
      DatasetManifest m = DatasetManifest::Load(ctx->config.manifest);
      r.benchmark_name = m.benchmark_name;
      r.analysis_category = CategoryName(m.analysis_category);
    } else {
      r.benchmark_name = "unknown";
      r.analysis_category = CategoryName(AnalysisCategory::kEncyclopedic);
    }
    if (ctx->config.split) {
      r.split = SplitName(*ctx->config.split);
    } else {
      r.split = records.empty() ? "unknown" : SplitName(records.front().source_split);
    }
    r.snapshot_id = ctx->config.snapshot;
    if (r.snapshot_id.empty() && !profiles.empty()) {
      r.snapshot_id = profiles.begin()->second.snapshot_id;
    }
    if (r.snapshot_id.empty()) r.snapshot_id = "unknown";
    r.linker = LinkerOf(links);
    r.scenario = r.linker == std::string("identifiers") ? "wikipedia_identifiers"
                                                        : "entity_linking";
    *report_out = report.release();
  });
}

ba_status ba_audit(ba_context *ctx, ba_report **report_out) {
  return Guard(ctx, [&] {
    if (report_out) *report_out = nullptr;
    ctx->network_calls = 0;
    AuditRun run = RunAudit(ctx->config);
    ctx->network_calls = run.network_calls;
    WriteOutputs(ctx->config.out_dir, run.files);
    if (report_out) *report_out = new ba_report{std::move(run.report)};
  });
}

ba_status ba_report_load(ba_context *ctx, const char *path, ba_report **report_out) {
  return Guard(ctx, [&] {
    Require(path, "path");
    Require(report_out, "report_out");
    *report_out = nullptr;
    *report_out = new ba_report{LoadReport(path)};
  });
}

ba_status ba_report_write(ba_context *ctx, const ba_report *report, const char *out_dir) {
  return Guard(ctx, [&] {
    Require(report, "report");
    Require(out_dir, "out_dir");
    WriteOutputs(out_dir, ReportOutputs(report->report, ctx->config));
  });
}

ba_status ba_report_to_json(ba_context *ctx, const ba_report *report, char **json_out) {
  return Guard(ctx, [&] {
    Require(report, "report");
    Require(json_out, "json_out");
    *json_out = CopyString(SerializeReport(report->report));
  });
}

void ba_report_destroy(ba_report *report) { delete report; }

ba_status ba_render(ba_context *ctx, const ba_report *report, const char *chart,
                    const char *out_path) {
  return Guard(ctx, [&] {
    Require(report, "report");
    Require(chart, "chart");
    Require(out_path, "out_path");
    auto kind = ParseChartKind(chart);
    if (!kind) throw InvalidArgument("unknown chart '" + std::string(chart) + "'");
    RenderSpec spec;
    spec.kind = *kind;
    spec.output = out_path;
    spec.width = ctx->config.chart_width;
    spec.height = ctx->config.chart_height;
    spec.top_k = ctx->config.top_k;
    std::string content = RenderChart(report->report, spec);
    files::WriteAtomic(spec.output, content);
  });
}

ba_status ba_kappa(ba_context *ctx, const char *csv_path, char **json_out) {
  return Guard(ctx, [&] {
    Require(csv_path, "csv_path");
    Require(json_out, "json_out");
    *json_out = nullptr;
    Warnings warnings;
    *json_out = CopyString(KappaReportJson(csv_path, ctx->kappa, &warnings));
  });
}

void ba_string_free(char *s) { std::free(s); }

}  // extern "C"
