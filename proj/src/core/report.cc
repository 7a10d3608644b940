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

#include "core/text.h"

namespace bias_audit {

using Json = nlohmann::json;

AuditReport BuildAuditReport(const std::vector<DatasetRecord> &records,
                             const std::vector<EntityLink> &links,
                             const std::map<Qid, EntityProfile> &profiles,
                             const AnalysisOptions &options) {
  const ClassMap &classes = options.classes ? *options.classes : ClassMap::Default();
  AuditReport report;
  report.basis = options.basis;
  report.records = static_cast<long>(records.size());
  report.links = static_cast<long>(links.size());
  for (auto p : options.location_sources) report.location_sources.push_back(PropertyId(p));

  auto units = UnitsFor(links, profiles, options.basis);
  report.entity_count_summary = EntityCounts(links, profiles, options.location_sources);
  report.instance_classes = InstanceClassDistribution(units, options.basis, classes);
  report.gender = GenderDistribution(units, options.basis, classes);
  report.occupations_by_gender = OccupationByGender(units, options.basis, options.top_k);
  report.religion = ReligionDistribution(units, options.basis);
  report.geo = GeoDistribution(units, options.basis, options.location_sources);
  report.keyword_match = KeywordGenderMatch(records, options.male_terms, options.female_terms);
  report.exclusion_flags = ExclusionFlags(report);
  return report;
}

std::vector<std::string> ExclusionFlags(const AuditReport &report) {
  std::vector<std::string> flags;
  if (!report.gender.included) flags.push_back("gender");
  if (!report.occupations_by_gender.occupations.included) flags.push_back("occupation_chart");
  if (!report.religion.distribution.included) flags.push_back("religion");
  if (!report.geo.map_included) flags.push_back("coordinates_map");
  if (!report.geo.location_names.included) flags.push_back("location_names");
  return flags;
}

namespace {

const char *RuleName(ThresholdRule rule) {
  return rule == ThresholdRule::kGreaterThan ? "greater_than" : "at_least";
}

Json RankedToJson(const RankedCounts &ranked) {
  Json arr = Json::array();
  for (const auto &[label, n] : ranked) arr.push_back(Json::array({label, n}));
  return arr;
}

RankedCounts RankedFromJson(const Json &arr) {
  RankedCounts out;
  for (const auto &e : arr) out.emplace_back(e.at(0).get<std::string>(), e.at(1).get<long>());
  return out;
}

Json DistributionToJson(const Distribution &d, std::size_t top_k) {
  Json j;
  j["dimension"] = DimensionName(d.dimension);
  j["counts"] = d.counts;
  j["total"] = d.total;
  j["included"] = d.included;
  j["threshold"] = d.threshold;
  j["threshold_rule"] = RuleName(d.rule);
  j["counting_basis"] = BasisName(d.basis);
  j["multi_valued_units"] = d.multi_valued_units;
  j["shares"] = d.Shares();
  j["top"] = RankedToJson(d.Top(top_k));
  return j;
}

Distribution DistributionFromJson(const Json &j) {
  Distribution d;
  std::string dim = j.at("dimension").get<std::string>();
  bool found = false;
  for (auto candidate : {Dimension::kGender, Dimension::kOccupation, Dimension::kReligion,
                         Dimension::kLocationName, Dimension::kInstanceOf}) {
    if (dim == DimensionName(candidate)) {
      d.dimension = candidate;
      found = true;
    }
  }
  if (!found) throw DataError("unknown dimension '" + dim + "'");
  d.counts = j.at("counts").get<std::map<std::string, long>>();
  d.threshold = j.at("threshold").get<long>();
  std::string rule = j.at("threshold_rule").get<std::string>();
  if (rule == "greater_than") {
    d.rule = ThresholdRule::kGreaterThan;
  } else if (rule == "at_least") {
    d.rule = ThresholdRule::kAtLeast;
  } else {
    throw DataError("unknown threshold_rule '" + rule + "'");
  }
  auto basis = ParseBasis(j.at("counting_basis").get<std::string>());
  if (!basis) throw DataError("unknown counting_basis");
  d.basis = *basis;
  d.multi_valued_units = j.value("multi_valued_units", 0L);
  d.Finalize();
  if (d.total != j.at("total").get<long>()) throw DataError("distribution total != sum of counts");
  return d;
}

Json RowToJson(const CountRow &r) {
  return Json{{"entities", r.entities},       {"instance_of", r.instance_of},
              {"gender", r.gender},           {"occupation", r.occupation},
              {"ethnicity", r.ethnicity},     {"religion", r.religion},
              {"coordinates", r.coordinates}, {"location_names", r.location_names}};
}

CountRow RowFromJson(const Json &j) {
  CountRow r;
  r.entities = j.at("entities").get<long>();
  r.instance_of = j.at("instance_of").get<long>();
  r.gender = j.at("gender").get<long>();
  r.occupation = j.at("occupation").get<long>();
  r.ethnicity = j.at("ethnicity").get<long>();
  r.religion = j.at("religion").get<long>();
  r.coordinates = j.at("coordinates").get<long>();
  r.location_names = j.at("location_names").get<long>();
  return r;
}

}  // namespace

Json ReportToJson(const AuditReport &r) {
  Json j;
  j["schema_version"] = r.schema_version;
  j["benchmark_name"] = r.benchmark_name;
  j["split"] = r.split;
  j["snapshot_id"] = r.snapshot_id;
  j["analysis_category"] = r.analysis_category;
  j["scenario"] = r.scenario;
  j["linker"] = r.linker;
  j["counting_basis"] = BasisName(r.basis);
  j["records"] = r.records;
  j["links"] = r.links;
  j["location_sources"] = r.location_sources;
  j["entity_count_summary"] = {
      {"per_mention", RowToJson(r.entity_count_summary.per_mention)},
      {"per_unique_entity", RowToJson(r.entity_count_summary.per_unique_entity)}};
  j["instance_classes"] = DistributionToJson(r.instance_classes, 10);
  j["gender"] = DistributionToJson(r.gender, 10);
  Json occ;
  occ["occupations"] = DistributionToJson(r.occupations_by_gender.occupations, 10);
  occ["chart_included"] = r.occupations_by_gender.occupations.included;
  Json top = Json::object();
  for (const auto &[gender, ranked] : r.occupations_by_gender.top) top[gender] = RankedToJson(ranked);
  occ["top_by_gender"] = std::move(top);
  j["occupations_by_gender"] = std::move(occ);
  Json rel = DistributionToJson(r.religion.distribution, 10);
  rel["qids"] = r.religion.qids;
  j["religion"] = std::move(rel);
  Json coords = Json::array();
  for (const auto &c : r.geo.coordinates) coords.push_back(Json::array({c.latitude, c.longitude}));
  j["coordinates"] = {{"points", std::move(coords)},
                      {"count", r.geo.coordinates.size()},
                      {"map_included", r.geo.map_included},
                      {"threshold", kCoordinateMapThreshold},
                      {"continents", r.geo.continents}};
  j["location_names"] = DistributionToJson(r.geo.location_names, 10);
  j["keyword_match"] = {{"male_count", r.keyword_match.male_count},
                        {"female_count", r.keyword_match.female_count},
                        {"male_record_ids", r.keyword_match.male_record_ids},
                        {"female_record_ids", r.keyword_match.female_record_ids}};
  j["exclusion_flags"] = r.exclusion_flags;
  j["warnings"] = r.warnings;
  return j;
}

AuditReport ReportFromJson(const Json &j) {
  AuditReport r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw DataError("unsupported report schema_version " + std::to_string(r.schema_version));
    }
    r.benchmark_name = j.at("benchmark_name").get<std::string>();
    r.split = j.at("split").get<std::string>();
    r.snapshot_id = j.at("snapshot_id").get<std::string>();
    r.analysis_category = j.at("analysis_category").get<std::string>();
    r.scenario = j.at("scenario").get<std::string>();
    r.linker = j.at("linker").get<std::string>();
    auto basis = ParseBasis(j.at("counting_basis").get<std::string>());
    if (!basis) throw DataError("unknown counting_basis");
    r.basis = *basis;
    r.records = j.at("records").get<long>();
    r.links = j.at("links").get<long>();
    r.location_sources = j.at("location_sources").get<std::vector<std::string>>();
    const Json &ecs = j.at("entity_count_summary");
    r.entity_count_summary.per_mention = RowFromJson(ecs.at("per_mention"));
    r.entity_count_summary.per_unique_entity = RowFromJson(ecs.at("per_unique_entity"));
    r.instance_classes = DistributionFromJson(j.at("instance_classes"));
    r.gender = DistributionFromJson(j.at("gender"));
    const Json &occ = j.at("occupations_by_gender");
    r.occupations_by_gender.occupations = DistributionFromJson(occ.at("occupations"));
    for (const auto &[gender, ranked] : occ.at("top_by_gender").items()) {
      r.occupations_by_gender.top[gender] = RankedFromJson(ranked);
    }
    r.religion.distribution = DistributionFromJson(j.at("religion"));
    r.religion.qids =
        j.at("religion").at("qids").get<std::map<std::string, std::vector<std::string>>>();
    const Json &coords = j.at("coordinates");
    for (const auto &p : coords.at("points")) {
      Coordinates c{p.at(0).get<double>(), p.at(1).get<double>()};
      if (!c.valid()) throw DataError("coordinate out of range in report");
      r.geo.coordinates.push_back(c);
    }
    r.geo.map_included = coords.at("map_included").get<bool>();
    r.geo.continents = coords.at("continents").get<std::map<std::string, long>>();
    r.geo.location_names = DistributionFromJson(j.at("location_names"));
    const Json &km = j.at("keyword_match");
    r.keyword_match.male_count = km.at("male_count").get<long>();
    r.keyword_match.female_count = km.at("female_count").get<long>();
    r.keyword_match.male_record_ids = km.at("male_record_ids").get<std::vector<std::string>>();
    r.keyword_match.female_record_ids = km.at("female_record_ids").get<std::vector<std::string>>();
    r.exclusion_flags = j.at("exclusion_flags").get<std::vector<std::string>>();
    r.warnings = j.at("warnings").get<std::map<std::string, std::size_t>>();
  } catch (const Json::exception &e) {
    throw DataError(std::string("report does not match schema: ") + e.what());
  }
  return r;
}

std::string SerializeReport(const AuditReport &report) {
  return ReportToJson(report).dump(2) + "\n";
}

AuditReport LoadReport(const std::filesystem::path &path) {
  try {
    return ReportFromJson(Json::parse(files::ReadAll(path)));
  } catch (const Json::parse_error &e) {
    throw DataError("report is not valid JSON: " + std::string(e.what()));
  }
}

std::string SummaryCsv(const AuditReport &report) {
  const auto &m = report.entity_count_summary.per_mention;
  const auto &u = report.entity_count_summary.per_unique_entity;
  std::string out = "column,per_mention,per_unique_entity\n";
  auto row = [&](const char *name, long a, long b) {
    out += std::string(name) + "," + std::to_string(a) + "," + std::to_string(b) + "\n";
  };
  row("entities", m.entities, u.entities);
  row("instance_of", m.instance_of, u.instance_of);
  row("gender", m.gender, u.gender);
  row("occupation", m.occupation, u.occupation);
  row("ethnicity", m.ethnicity, u.ethnicity);
  row("religion", m.religion, u.religion);
  row("coordinates", m.coordinates, u.coordinates);
  row("location_names", m.location_names, u.location_names);
  return out;
}

}  // namespace bias_audit
