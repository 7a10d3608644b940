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

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <numeric>
#include <random>
#include <utility>

#include "core/gazetteer.h"
#include "core/property_cache.h"
#include "core/text.h"
#include "core/wikidata.h"
#include "core/wikipedia.h"

namespace bias_audit {

using Json = nlohmann::json;

const char *FetchModeName(FetchMode mode) {
  switch (mode) {
    case FetchMode::kLive:
      return "live";
    case FetchMode::kRecord:
      return "record";
    case FetchMode::kReplay:
      return "replay";
  }
  return "unknown";
}

std::optional<FetchMode> ParseFetchMode(std::string_view name) {
  for (auto m : {FetchMode::kLive, FetchMode::kRecord, FetchMode::kReplay}) {
    if (name == FetchModeName(m)) return m;
  }
  return std::nullopt;
}

const char *LinkerKindName(LinkerKind kind) {
  switch (kind) {
    case LinkerKind::kAuto:
      return "auto";
    case LinkerKind::kIdentifiers:
      return "identifiers";
    case LinkerKind::kSidecar:
      return "sidecar";
    case LinkerKind::kGazetteer:
      return "gazetteer";
  }
  return "unknown";
}

std::optional<LinkerKind> ParseLinkerKind(std::string_view name) {
  for (auto k : {LinkerKind::kAuto, LinkerKind::kIdentifiers, LinkerKind::kSidecar,
                 LinkerKind::kGazetteer}) {
    if (name == LinkerKindName(k)) return k;
  }
  return std::nullopt;
}

void AuditConfig::ApplyEnvironment() {
  if (const char *v = std::getenv("BIAS_AUDIT_SPARQL_ENDPOINT"); v && *v) sparql_endpoint = v;
  if (const char *v = std::getenv("BIAS_AUDIT_WIKI_API"); v && *v) wiki_api = v;
  if (const char *v = std::getenv("BIAS_AUDIT_USER_AGENT"); v && *v) user_agent = v;
}

void AuditConfig::Validate() const {
  if (manifest.empty()) throw ConfigError("a manifest is required (--manifest)");
  if (mode != FetchMode::kLive && fixtures_dir.empty()) {
    throw ConfigError(std::string(FetchModeName(mode)) + " mode requires --fixtures DIR");
  }
  if (!(rate_limit > 0)) throw ConfigError("rate limit must be positive");
  if (batch_size == 0 || batch_size > 50) throw ConfigError("batch size must be in [1, 50]");
  if (parallelism == 0) throw ConfigError("parallelism must be at least 1");
  if (min_confidence < 0 || min_confidence > 1) {
    throw ConfigError("min confidence must be in [0, 1]");
  }
  if (linker == LinkerKind::kSidecar && !sidecar_path) {
    throw ConfigError("sidecar linker requires --sidecar FILE");
  }
  if (linker == LinkerKind::kGazetteer && !gazetteer_path) {
    throw ConfigError("gazetteer linker requires --gazetteer FILE");
  }
  if (chart_width <= 0 || chart_height <= 0) throw ConfigError("chart size must be positive");
}

std::string TodayUtc() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[16];
  std::strftime(buf, sizeof(buf), "%Y-%m-%d", &tm);
  return buf;
}

Session::Session(const AuditConfig &config, Transport *network) {
  const auto fixture_file = config.fixtures_dir / kFixtureFileName;
  if (config.mode == FetchMode::kReplay) {
    replay_ = std::make_unique<ReplayTransport>(fixture_file);
    top_ = replay_.get();
    snapshot_ = config.snapshot.empty() ? replay_->recorded_at().substr(0, 10) : config.snapshot;
    if (snapshot_.empty()) snapshot_ = "unknown";
  } else {
    snapshot_ = config.snapshot.empty() ? TodayUtc() : config.snapshot;
    if (!network) {
      http_ = std::make_unique<CurlTransport>(config.user_agent);
      network = http_.get();
    }
    resilient_ = std::make_unique<ResilientTransport>(*network, config.rate_limit, config.retry);
    top_ = resilient_.get();
    if (config.mode == FetchMode::kRecord) {
      std::error_code ec;
      std::filesystem::create_directories(config.fixtures_dir, ec);
      if (ec) throw ConfigError("cannot create fixture directory: " + config.fixtures_dir.string());
      recording_ = std::make_unique<RecordingTransport>(*resilient_, fixture_file, snapshot_);
      top_ = recording_.get();
    }
  }
  cache_ = config.cache_path ? std::make_unique<PropertyCache>(*config.cache_path)
                             : std::make_unique<PropertyCache>();
}

Session::~Session() = default;

std::vector<DatasetRecord> SampleRecords(std::vector<DatasetRecord> records, std::size_t n,
                                         std::uint64_t seed) {
  if (n == 0 || n >= records.size()) return records;
  std::vector<std::size_t> idx(records.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates with explicit modulo draws keeps the sample
  // identical across standard libraries.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<DatasetRecord> out;
  out.reserve(n);
  for (auto i : idx) out.push_back(std::move(records[i]));
  return out;
}

IngestResult IngestStage(const AuditConfig &config, Warnings *warnings) {
  IngestResult result;
  result.manifest = DatasetManifest::Load(config.manifest);
  result.split = config.split ? *config.split : SelectSplit(result.manifest);
  auto it = result.manifest.files.find(result.split);
  if (it == result.manifest.files.end()) {
    throw ConfigError("manifest lists no file for split '" +
                      std::string(SplitName(result.split)) + "'");
  }
  LoadOptions options;
  options.strict = config.strict;
  options.fields = config.fields;
  result.records =
      SampleRecords(LoadDataset(it->second, result.manifest, result.split, options, warnings),
                    config.sample, config.seed);
  return result;
}

namespace {

LinkerKind ChooseLinker(const AuditConfig &config, const std::vector<DatasetRecord> &records) {
  if (config.linker != LinkerKind::kAuto) return config.linker;
  if (config.sidecar_path) return LinkerKind::kSidecar;
  if (config.gazetteer_path) return LinkerKind::kGazetteer;
  for (const auto &r : records) {
    if (!r.wiki_identifiers.empty()) return LinkerKind::kIdentifiers;
  }
  throw ConfigError(
      "records carry no Wikipedia identifiers; pass --sidecar FILE or --gazetteer FILE");
}

template <typename Fn>
auto Staged(const char *stage, Fn &&fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const AuditError &e) {
    throw AuditError(e.kind(), std::string("[") + stage + "] " + e.what());
  } catch (const Json::exception &e) {
    throw DataError(std::string("[") + stage + "] " + e.what());
  } catch (const std::exception &e) {
    throw AuditError(ErrorKind::kInternal, std::string("[") + stage + "] " + e.what());
  }
}

}  // namespace

std::vector<EntityLink> LinkStage(const AuditConfig &config,
                                  const std::vector<DatasetRecord> &records, Session &session,
                                  Warnings *warnings, std::string *linker_used) {
  LinkerKind kind = ChooseLinker(config, records);
  if (linker_used) *linker_used = LinkerKindName(kind);
  std::vector<EntityLink> links;
  if (kind == LinkerKind::kIdentifiers) {
    std::vector<std::string> titles;
    for (const auto &r : records) {
      for (auto &t : ExtractWikiIdentifiers(r)) titles.push_back(std::move(t));
    }
    std::map<std::string, std::optional<Qid>> resolved;
    if (!titles.empty()) {
      ResolverOptions options;
      options.api_url = config.wiki_api;
      options.batch_size = config.batch_size;
      options.parallelism = config.parallelism;
      options.snapshot = session.snapshot();
      TitleResolver resolver(session.transport(), session.cache(), options);
      resolved = resolver.ResolveAll(titles);
    }
    for (const auto &r : records) {
      for (auto &l : IdentifierLinks(r, resolved, warnings)) links.push_back(std::move(l));
    }
    return links;
  }

  LinkOptions options;
  options.include_question = config.include_question;
  options.include_answers = config.include_answers;
  options.include_context = config.include_context;
  options.min_confidence = config.min_confidence;
  std::optional<SidecarStore> store;
  std::optional<GazetteerIndex> index;
  std::unique_ptr<Linker> linker;
  if (kind == LinkerKind::kSidecar) {
    if (!config.sidecar_path) throw ConfigError("sidecar linker requires --sidecar FILE");
    store = SidecarStore::Load(*config.sidecar_path, {config.strict, config.parallelism},
                               warnings);
    linker = std::make_unique<SidecarLinker>(*store);
  } else {
    if (!config.gazetteer_path) throw ConfigError("gazetteer linker requires --gazetteer FILE");
    index = GazetteerIndex::Load(*config.gazetteer_path, config.strict, warnings);
    linker = std::make_unique<GazetteerLinker>(*index);
  }
  for (const auto &r : records) {
    for (auto &l : LinkRecord(r, *linker, options, warnings)) links.push_back(std::move(l));
  }
  return links;
}

std::map<Qid, EntityProfile> FetchStage(const AuditConfig &config,
                                        const std::vector<EntityLink> &links, Session &session) {
  std::set<Qid> unique;
  for (const auto &l : links) unique.insert(l.qid);
  std::map<Qid, EntityProfile> profiles;
  if (unique.empty()) return profiles;
  WikidataOptions options;
  options.endpoint = config.sparql_endpoint;
  options.batch_size = config.batch_size;
  options.parallelism = config.parallelism;
  options.snapshot = session.snapshot();
  WikidataClient client(session.transport(), session.cache(), options);
  std::vector<Qid> qids(unique.begin(), unique.end());
  for (auto &p : client.FetchProfiles(qids, PropertySet::All())) {
    Qid q = p.qid;
    profiles.emplace(q, std::move(p));
  }
  return profiles;
}

AuditReport AnalyzeStage(const AuditConfig &config, const std::vector<DatasetRecord> &records,
                         const std::vector<EntityLink> &links,
                         const std::map<Qid, EntityProfile> &profiles) {
  std::optional<ClassMap> classes;
  if (config.class_map_path) classes = ClassMap::Load(*config.class_map_path);
  AnalysisOptions options;
  options.basis = config.basis;
  options.top_k = config.top_k;
  options.location_sources = config.location_sources;
  options.male_terms = config.male_terms;
  options.female_terms = config.female_terms;
  options.classes = classes ? &*classes : nullptr;
  return BuildAuditReport(records, links, profiles, options);
}

OutputFiles ReportOutputs(const AuditReport &report, const AuditConfig &config) {
  OutputFiles files;
  files.emplace_back("report.json", SerializeReport(report));
  files.emplace_back("summary.csv", SummaryCsv(report));
  for (ChartKind kind : config.charts) {
    RenderSpec spec;
    spec.kind = kind;
    spec.output = std::string(ChartName(kind)) + ".svg";
    spec.width = config.chart_width;
    spec.height = config.chart_height;
    spec.top_k = config.top_k;
    files.emplace_back(spec.output.string(), RenderChart(report, spec));
  }
  return files;
}

void WriteOutputs(const std::filesystem::path &dir, const OutputFiles &files) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto &[name, content] : files) files::WriteAtomic(dir / name, content);
}

AuditRun RunAudit(const AuditConfig &config, Transport *network) {
  Staged("config", [&] {
    config.Validate();
    return 0;
  });
  Warnings warnings;
  IngestResult ingest = Staged("ingest", [&] { return IngestStage(config, &warnings); });
  auto session = Staged("setup", [&] { return std::make_unique<Session>(config, network); });
  std::string linker;
  auto links = Staged("link", [&] {
    return LinkStage(config, ingest.records, *session, &warnings, &linker);
  });
  auto profiles = Staged("fetch", [&] { return FetchStage(config, links, *session); });

  AuditRun run;
  run.report = Staged("analyze", [&] {
    AuditReport r = AnalyzeStage(config, ingest.records, links, profiles);
    r.benchmark_name = ingest.manifest.benchmark_name;
    r.split = SplitName(ingest.split);
    r.snapshot_id = session->snapshot();
    r.analysis_category = CategoryName(ingest.manifest.analysis_category);
    r.scenario = linker == "identifiers" ? "wikipedia_identifiers" : "entity_linking";
    r.linker = linker;
    r.warnings = warnings.Snapshot();
    return r;
  });
  run.files = Staged("render", [&] { return ReportOutputs(run.report, config); });
  run.network_calls = session->network_calls();
  return run;
}

std::string KappaReportJson(const std::filesystem::path &csv, const KappaConfig &config,
                            Warnings *warnings) {
  auto matrices = LoadAnnotationsCsv(csv, config.load, warnings);
  Json units = Json::array();
  std::vector<AgreementResult> results;
  for (const auto &m : matrices) {
    if (m.EligibleItems().empty()) {
      if (config.load.strict) throw DataError("unit '" + m.unit_id + "' has no eligible items");
      if (warnings) warnings->Add("unit_without_eligible_items");
      continue;
    }
    AgreementResult r = CohenKappa(m);
    units.push_back({{"unit_id", r.unit_id},
                     {"kappa", r.kappa},
                     {"p_o", r.observed},
                     {"p_e", r.expected},
                     {"n_items", r.n_items}});
    results.push_back(r);
  }
  if (results.empty()) throw DataError("no unit has eligible annotation items");
  KappaSummary s = SummarizeKappa(results);
  Json doc;
  doc["units"] = std::move(units);
  doc["summary"] = {{"mean", s.mean}, {"n", s.n}, {"sd_kind", "sample"}};
  doc["summary"]["sd"] = s.sd_defined ? Json(s.sd) : Json(nullptr);
  if (config.pooled) {
    AgreementResult p = PooledKappa(matrices);
    doc["pooled"] = {
        {"kappa", p.kappa}, {"p_o", p.observed}, {"p_e", p.expected}, {"n_items", p.n_items}};
  }
  doc["excluded_categories"] = config.load.excluded_categories;
  if (warnings) doc["warnings"] = warnings->Snapshot();
  return doc.dump(2) + "\n";
}

}  // namespace bias_audit
