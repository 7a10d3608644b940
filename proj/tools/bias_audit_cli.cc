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

// bias-audit: command-line front end over the C API.
//
//   bias-audit audit --manifest boolq.json --mode replay --fixtures fx/ --out out/
//   bias-audit ingest|link|fetch|analyze --manifest m.json --out work/
//   bias-audit render --report out/report.json --chart world_map --output map.svg
//   bias-audit kappa annotations.csv [--exclude-category C]... [--pooled]

#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bias_audit/bias_audit.h"

namespace {

using Options = std::map<std::string, std::string>;

// Every flag maps onto one context option.
void Bind(CLI::App *app, Options *opts, const std::string &flag, const std::string &key,
          const std::string &help) {
  app->add_option_function<std::string>(
      flag, [opts, key](const std::string &v) { (*opts)[key] = v; }, help);
}

void BindFlag(CLI::App *app, Options *opts, const std::string &flag, const std::string &key,
              const std::string &value, const std::string &help) {
  app->add_flag_function(
      flag, [opts, key, value](std::int64_t) { (*opts)[key] = value; }, help);
}

void AddIngestFlags(CLI::App *app, Options *opts) {
  Bind(app, opts, "--manifest", "manifest", "dataset manifest (JSON)");
  Bind(app, opts, "--split", "split", "train, dev or test (default: test if public, else dev)");
  Bind(app, opts, "--fields", "fields", "field mapping, e.g. question=q,answers=a|b");
  Bind(app, opts, "--sample", "sample", "keep a deterministic sample of N records");
  Bind(app, opts, "--seed", "seed", "sampling seed");
  BindFlag(app, opts, "--strict", "strict", "true", "treat recoverable problems as fatal");
}

void AddNetworkFlags(CLI::App *app, Options *opts) {
  Bind(app, opts, "--mode", "mode", "live, record or replay");
  Bind(app, opts, "--fixtures", "fixtures", "fixture directory for record/replay");
  Bind(app, opts, "--cache", "cache", "property cache file (NDJSON)");
  Bind(app, opts, "--endpoint", "endpoint", "SPARQL endpoint URL");
  Bind(app, opts, "--wiki-api", "wiki_api", "MediaWiki Action API URL");
  Bind(app, opts, "--user-agent", "user_agent", "HTTP User-Agent");
  Bind(app, opts, "--rate-limit", "rate_limit", "requests per second (default 5)");
  Bind(app, opts, "--batch-size", "batch_size", "items per request, at most 50");
  Bind(app, opts, "--parallelism", "parallelism", "concurrent requests");
  Bind(app, opts, "--max-retries", "max_retries", "retries for 429/5xx/transport errors");
  Bind(app, opts, "--snapshot", "snapshot", "snapshot id stored with cached values");
}

void AddLinkFlags(CLI::App *app, Options *opts) {
  Bind(app, opts, "--linker", "linker", "auto, identifiers, sidecar or gazetteer");
  Bind(app, opts, "--sidecar", "sidecar", "entity-link sidecar (JSONL)");
  Bind(app, opts, "--gazetteer", "gazetteer", "label gazetteer (TSV: label, qid, rank)");
  Bind(app, opts, "--min-confidence", "min_confidence", "drop links below this confidence");
  BindFlag(app, opts, "--no-question", "include_question", "false", "do not link questions");
  BindFlag(app, opts, "--no-answers", "include_answers", "false", "do not link answers");
  BindFlag(app, opts, "--include-context", "include_context", "true", "also link contexts");
  Bind(app, opts, "--threads", "parallelism", "sidecar parsing threads");
}

void AddAnalyzeFlags(CLI::App *app, Options *opts) {
  Bind(app, opts, "--basis", "basis", "mention or unique (headline counting basis)");
  Bind(app, opts, "--top-k", "top_k", "labels per ranked list (default 10)");
  Bind(app, opts, "--location-sources", "location_sources", "subset of P17,P27,P131");
  Bind(app, opts, "--male-terms", "male_terms", "comma-separated keyword list");
  Bind(app, opts, "--female-terms", "female_terms", "comma-separated keyword list");
  Bind(app, opts, "--class-map", "class_map", "instance-of class table (TSV)");
  Bind(app, opts, "--charts", "charts", "comma-separated charts, 'all' or 'none'");
  Bind(app, opts, "--chart-width", "chart_width", "chart width in pixels");
  Bind(app, opts, "--chart-height", "chart_height", "chart height in pixels");
}

int ExitCode(ba_status status) {
  // Bad flag values are configuration errors from the user's point of view.
  return status == BA_ERR_INVALID_ARGUMENT ? BA_ERR_CONFIG : static_cast<int>(status);
}

int Fail(ba_context *ctx, ba_status status) {
  std::fprintf(stderr, "bias-audit: %s: %s\n", ba_status_name(status),
               ba_context_last_error(ctx));
  return ExitCode(status);
}

struct ContextDeleter {
  void operator()(ba_context *ctx) const { ba_context_destroy(ctx); }
};
struct ReportDeleter {
  void operator()(ba_report *r) const { ba_report_destroy(r); }
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Audit QA benchmarks for demographic and geographic skew via Wikidata"};
  app.set_version_flag("--version", std::string(ba_version()));
  app.require_subcommand(1);

  Options opts;
  std::string out_dir = "out";
  std::string report_path, chart, output, annotations;
  std::vector<std::string> excluded;
  bool pooled = false;

  auto *ingest = app.add_subcommand("ingest", "load a split and write records.jsonl");
  AddIngestFlags(ingest, &opts);
  auto *link = app.add_subcommand("link", "records.jsonl -> links.jsonl");
  AddIngestFlags(link, &opts);
  AddNetworkFlags(link, &opts);
  AddLinkFlags(link, &opts);
  auto *fetch = app.add_subcommand("fetch", "links.jsonl -> profiles.jsonl");
  AddNetworkFlags(fetch, &opts);
  auto *analyze = app.add_subcommand("analyze", "work files -> report.json, summary.csv, charts");
  AddIngestFlags(analyze, &opts);
  AddAnalyzeFlags(analyze, &opts);
  auto *audit = app.add_subcommand("audit", "ingest, link, fetch and analyze in one run");
  AddIngestFlags(audit, &opts);
  AddNetworkFlags(audit, &opts);
  AddLinkFlags(audit, &opts);
  AddAnalyzeFlags(audit, &opts);
  for (auto *sub : {ingest, link, fetch, analyze, audit}) {
    sub->add_option("--out", out_dir, "output (or work) directory")->capture_default_str();
  }

  auto *render = app.add_subcommand("render", "render one chart from a report.json");
  render->add_option("--report", report_path, "report.json")->required();
  render->add_option("--chart", chart,
                     "gender_bars, occupation_grid, religion_bars, world_map, checklist_table")
      ->required();
  render->add_option("--output", output, "output file (.svg, .json or .csv)")->required();
  AddAnalyzeFlags(render, &opts);

  auto *kappa = app.add_subcommand("kappa", "Cohen's kappa per annotation unit");
  kappa->add_option("annotations", annotations, "CSV: unit_id,question_id,question_category,"
                                                "annotator,answer")
      ->required();
  kappa->add_option("--exclude-category", excluded, "category left out of agreement (repeatable; replaces the default, 'none' clears it)");
  kappa->add_flag("--pooled", pooled, "also report kappa over all units pooled");
  kappa->add_option("--out", output, "write JSON here instead of stdout");
  BindFlag(kappa, &opts, "--strict", "strict", "true", "incomplete items are fatal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : BA_ERR_CONFIG;
  }

  std::unique_ptr<ba_context, ContextDeleter> ctx(ba_context_create());
  if (!ctx) {
    std::fprintf(stderr, "bias-audit: out of memory\n");
    return BA_ERR_INTERNAL;
  }
  for (const auto &[key, value] : opts) {
    if (ba_status s = ba_context_set_option(ctx.get(), key.c_str(), value.c_str()); s != BA_OK) {
      return Fail(ctx.get(), s);
    }
  }
  ba_context_set_option(ctx.get(), "out", out_dir.c_str());

  const std::filesystem::path work(out_dir);
  const std::string records = (work / "records.jsonl").string();
  const std::string links = (work / "links.jsonl").string();
  const std::string profiles = (work / "profiles.jsonl").string();
  ba_status s = BA_OK;

  if (*ingest) {
    std::error_code ec;
    std::filesystem::create_directories(work, ec);
    s = ba_ingest(ctx.get(), records.c_str());
    if (s == BA_OK) std::printf("wrote %s\n", records.c_str());
  } else if (*link) {
    s = ba_link(ctx.get(), records.c_str(), links.c_str());
    if (s == BA_OK) std::printf("wrote %s\n", links.c_str());
  } else if (*fetch) {
    s = ba_fetch(ctx.get(), links.c_str(), profiles.c_str());
    if (s == BA_OK) {
      std::printf("wrote %s (network calls: %zu)\n", profiles.c_str(),
                  ba_context_network_calls(ctx.get()));
    }
  } else if (*analyze) {
    ba_report *raw = nullptr;
    s = ba_analyze(ctx.get(), records.c_str(), links.c_str(), profiles.c_str(), &raw);
    std::unique_ptr<ba_report, ReportDeleter> report(raw);
    if (s == BA_OK) s = ba_report_write(ctx.get(), report.get(), out_dir.c_str());
    if (s == BA_OK) std::printf("wrote report to %s\n", out_dir.c_str());
  } else if (*audit) {
    s = ba_audit(ctx.get(), nullptr);
    if (s == BA_OK) {
      std::printf("wrote report to %s (network calls: %zu)\n", out_dir.c_str(),
                  ba_context_network_calls(ctx.get()));
    }
  } else if (*render) {
    ba_report *raw = nullptr;
    s = ba_report_load(ctx.get(), report_path.c_str(), &raw);
    std::unique_ptr<ba_report, ReportDeleter> report(raw);
    if (s == BA_OK) s = ba_render(ctx.get(), report.get(), chart.c_str(), output.c_str());
    if (s == BA_OK) std::printf("wrote %s\n", output.c_str());
  } else if (*kappa) {
    // Given categories replace the default exclusion; "none" keeps every item.
    if (!excluded.empty()) {
      std::string list;
      for (const auto &c : excluded) {
        if (c == "none") continue;
        if (!list.empty()) list += ',';
        list += c;
      }
      ba_context_set_option(ctx.get(), "exclude_categories", list.c_str());
    }
    ba_context_set_option(ctx.get(), "pooled", pooled ? "true" : "false");
    char *json = nullptr;
    s = ba_kappa(ctx.get(), annotations.c_str(), &json);
    if (s == BA_OK) {
      if (output.empty()) {
        std::fputs(json, stdout);
      } else {
        FILE *f = std::fopen(output.c_str(), "wb");
        if (f == nullptr) {
          std::fprintf(stderr, "bias-audit: config_error: cannot write %s\n", output.c_str());
          ba_string_free(json);
          return BA_ERR_CONFIG;
        }
        std::fputs(json, f);
        std::fclose(f);
      }
    }
    ba_string_free(json);
  }
  return s == BA_OK ? 0 : Fail(ctx.get(), s);
}
