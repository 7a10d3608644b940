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

#include "core/wikidata.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

#include "core/errors.h"
#include "core/parallel.h"
#include "embedded_instance_classes.h"

namespace bias_audit {

using Json = nlohmann::json;

const char *PropertyId(Property property) {
  switch (property) {
    case Property::kInstanceOf: return "P31";
    case Property::kGender: return "P21";
    case Property::kOccupation: return "P106";
    case Property::kEthnicGroup: return "P172";
    case Property::kReligion: return "P140";
    case Property::kCoordinates: return "P625";
    case Property::kCountry: return "P17";
    case Property::kCitizenship: return "P27";
    case Property::kAdminLocation: return "P131";
  }
  return "P31";
}

std::optional<Property> ParsePropertyId(std::string_view id) {
  for (auto p : kAllProperties) {
    if (id == PropertyId(p)) return p;
  }
  return std::nullopt;
}

PropertySet PropertySet::All() {
  PropertySet s;
  for (auto p : kAllProperties) s.Set(p);
  return s;
}

std::vector<Property> PropertySet::List() const {
  std::vector<Property> out;
  for (auto p : kAllProperties) {
    if (Has(p)) out.push_back(p);
  }
  return out;
}

const char *EntityClassName(EntityClass c) {
  switch (c) {
    case EntityClass::kHuman: return "human";
    case EntityClass::kFictionalHuman: return "fictional_human";
    case EntityClass::kPlace: return "place";
    case EntityClass::kEvent: return "event";
    case EntityClass::kOrganization: return "organization";
    case EntityClass::kOther: return "other";
  }
  return "other";
}

namespace {

Json LabeledToJson(const std::vector<LabeledValue> &values) {
  Json arr = Json::array();
  for (const auto &v : values) arr.push_back({{"qid", v.qid.str()}, {"label", v.label}});
  return arr;
}

std::vector<LabeledValue> LabeledFromJson(const Json &arr) {
  std::vector<LabeledValue> out;
  for (const auto &v : arr) {
    auto qid = Qid::Parse(v.at("qid").get<std::string>());
    if (!qid) throw DataError("invalid qid in profile: " + v.at("qid").get<std::string>());
    std::string label = v.value("label", "");
    if (label.empty()) label = qid->str();
    out.push_back({*qid, std::move(label)});
  }
  return out;
}

template <typename T>
void SortByQid(std::vector<T> *values) {
  std::sort(values->begin(), values->end(), [](const T &a, const T &b) {
    if (a.qid != b.qid) return a.qid < b.qid;
    return a.label < b.label;
  });
  values->erase(std::unique(values->begin(), values->end(),
                            [](const T &a, const T &b) { return a.qid == b.qid; }),
                values->end());
}

}  // namespace

Json ProfileToJson(const EntityProfile &p) {
  Json j;
  j["qid"] = p.qid.str();
  j["found"] = p.found;
  j["snapshot_id"] = p.snapshot_id;
  j["instance_of"] = LabeledToJson(p.instance_of);
  j["gender"] = LabeledToJson(p.gender);
  j["occupations"] = LabeledToJson(p.occupations);
  j["ethnic_group"] = LabeledToJson(p.ethnic_group);
  j["religion"] = LabeledToJson(p.religion);
  j["coordinates"] = p.coordinates ? Json{{"lat", p.coordinates->latitude},
                                          {"lon", p.coordinates->longitude}}
                                   : Json(nullptr);
  Json names = Json::array();
  for (const auto &n : p.location_names) {
    names.push_back({{"qid", n.qid.str()}, {"label", n.label}, {"source", PropertyId(n.source)}});
  }
  j["location_names"] = std::move(names);
  return j;
}

EntityProfile ProfileFromJson(const Json &j) {
  EntityProfile p;
  try {
    auto qid = Qid::Parse(j.at("qid").get<std::string>());
    if (!qid) throw DataError("invalid profile qid");
    p.qid = *qid;
    p.found = j.value("found", false);
    p.snapshot_id = j.value("snapshot_id", "");
    p.instance_of = LabeledFromJson(j.value("instance_of", Json::array()));
    p.gender = LabeledFromJson(j.value("gender", Json::array()));
    p.occupations = LabeledFromJson(j.value("occupations", Json::array()));
    p.ethnic_group = LabeledFromJson(j.value("ethnic_group", Json::array()));
    p.religion = LabeledFromJson(j.value("religion", Json::array()));
    if (j.contains("coordinates") && !j["coordinates"].is_null()) {
      Coordinates c{j["coordinates"].at("lat").get<double>(), j["coordinates"].at("lon").get<double>()};
      if (!c.valid()) throw DataError("coordinates out of range in profile " + p.qid.str());
      p.coordinates = c;
    }
    for (const auto &n : j.value("location_names", Json::array())) {
      auto nq = Qid::Parse(n.at("qid").get<std::string>());
      auto src = ParsePropertyId(n.at("source").get<std::string>());
      if (!nq || !src) throw DataError("invalid location name in profile " + p.qid.str());
      std::string label = n.value("label", "");
      if (label.empty()) label = nq->str();
      p.location_names.push_back({*nq, std::move(label), *src});
    }
  } catch (const Json::exception &e) {
    throw DataError(std::string("malformed profile: ") + e.what());
  }
  return p;
}

std::string ProfilesToJsonl(const std::vector<EntityProfile> &profiles) {
  std::string out;
  for (const auto &p : profiles) {
    out += ProfileToJson(p).dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<EntityProfile> ReadProfilesJsonl(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read profiles file: " + path.string());
  std::vector<EntityProfile> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::Trim(line).empty()) continue;
    try {
      out.push_back(ProfileFromJson(Json::parse(line)));
    } catch (const Json::parse_error &e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

ClassMap ClassMap::Parse(std::string_view tsv) {
  ClassMap map;
  for (const auto &raw : text::Split(tsv, '\n')) {
    std::string line = text::Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto cols = text::Split(line, '\t');
    if (cols.size() < 2) throw ConfigError("class map line needs qid and class: " + line);
    auto qid = Qid::Parse(text::Trim(cols[0]));
    if (!qid) throw ConfigError("class map: invalid qid " + cols[0]);
    std::string cls = text::Trim(cols[1]);
    EntityClass c;
    if (cls == "place") {
      c = EntityClass::kPlace;
    } else if (cls == "event") {
      c = EntityClass::kEvent;
    } else if (cls == "organization") {
      c = EntityClass::kOrganization;
    } else {
      throw ConfigError("class map: unknown class '" + cls + "'");
    }
    map.classes_[*qid] = c;
  }
  return map;
}

const ClassMap &ClassMap::Default() {
  static const ClassMap map = Parse(embedded::kInstanceClasses);
  return map;
}

ClassMap ClassMap::Load(const std::filesystem::path &path) { return Parse(files::ReadAll(path)); }

std::optional<EntityClass> ClassMap::Lookup(Qid qid) const {
  auto it = classes_.find(qid);
  if (it == classes_.end()) return std::nullopt;
  return it->second;
}

EntityClass ClassifyEntity(const EntityProfile &profile, const ClassMap &classes) {
  bool fictional = false;
  EntityClass best = EntityClass::kOther;
  for (const auto &v : profile.instance_of) {
    if (v.qid == kHumanClass) return EntityClass::kHuman;
    if (v.qid == kFictionalHumanClass) fictional = true;
    if (auto c = classes.Lookup(v.qid)) best = std::min(best, *c);
  }
  if (fictional) return EntityClass::kFictionalHuman;
  return best;
}

WikidataClient::WikidataClient(Transport &transport, PropertyCache *cache,
                               WikidataOptions options)
    : transport_(transport), cache_(cache), options_(std::move(options)) {
  if (options_.batch_size == 0) options_.batch_size = 50;
}

std::string WikidataClient::BuildQuery(Property property, const std::vector<Qid> &batch) {
  std::string values;
  for (const auto &q : batch) {
    if (!values.empty()) values += ' ';
    values += "wd:" + q.str();
  }
  const char *pid = PropertyId(property);
  if (property == Property::kCoordinates) {
    return std::string("SELECT ?item ?value WHERE {\n  VALUES ?item { ") + values +
           " }\n  ?item wdt:" + pid + " ?value .\n}";
  }
  return std::string("SELECT ?item ?value ?valueLabel WHERE {\n  VALUES ?item { ") + values +
         " }\n  ?item wdt:" + pid +
         " ?value .\n  SERVICE wikibase:label { bd:serviceParam wikibase:language \"en\". }\n}";
}

HttpRequest WikidataClient::BuildRequest(const std::string &endpoint, const std::string &query) {
  HttpRequest req;
  req.method = HttpRequest::Method::kPost;
  req.url = endpoint;
  req.body = "format=json&query=" + text::UrlEncode(query);
  req.accept = "application/sparql-results+json";
  req.canonical = "sparql " + CanonicalizeQuery(query);
  return req;
}

namespace {

// "Point(lon lat)"; values on other globes carry a leading "<globe-uri> ".
std::optional<Coordinates> ParseWktPoint(std::string_view wkt) {
  if (!text::StartsWith(wkt, "Point(")) return std::nullopt;
  std::string inner(wkt.substr(6));
  auto close = inner.find(')');
  if (close == std::string::npos) return std::nullopt;
  inner.resize(close);
  const char *begin = inner.c_str();
  char *end = nullptr;
  double lon = std::strtod(begin, &end);
  if (end == begin) return std::nullopt;
  const char *second = end;
  double lat = std::strtod(second, &end);
  if (end == second) return std::nullopt;
  Coordinates c{lat, lon};
  if (!c.valid()) return std::nullopt;
  return c;
}

}  // namespace

std::map<Qid, Json> WikidataClient::ParseResponse(Property property, const std::string &body,
                                                  const std::vector<Qid> &batch) {
  Json root;
  try {
    root = Json::parse(body);
  } catch (const Json::parse_error &) {
    throw DataError("malformed SPARQL response: " + body.substr(0, 200));
  }
  if (!root.contains("results") || !root["results"].contains("bindings") ||
      !root["results"]["bindings"].is_array()) {
    throw DataError("SPARQL response without results.bindings: " + body.substr(0, 200));
  }
  std::map<Qid, Json> out;
  for (const auto &q : batch) out[q] = Json::array();
  for (const auto &b : root["results"]["bindings"]) {
    try {
      auto item = Qid::FromEntityUri(b.at("item").at("value").get<std::string>());
      if (!item || !out.count(*item) || !b.contains("value")) continue;
      const Json &value = b["value"];
      std::string raw = value.at("value").get<std::string>();
      if (property == Property::kCoordinates) {
        auto c = ParseWktPoint(raw);
        if (!c) continue;
        out[*item].push_back({{"lat", c->latitude}, {"lon", c->longitude}});
      } else {
        if (value.value("type", "") != "uri") continue;
        auto vq = Qid::FromEntityUri(raw);
        if (!vq) continue;
        std::string label;
        if (b.contains("valueLabel")) label = b["valueLabel"].value("value", "");
        if (label.empty()) label = vq->str();
        out[*item].push_back({{"qid", vq->str()}, {"label", label}});
      }
    } catch (const Json::exception &) {
      throw DataError("malformed SPARQL binding: " + b.dump().substr(0, 200));
    }
  }
  // Canonical order so cached values do not depend on endpoint row order.
  for (auto &[qid, values] : out) {
    std::vector<Json> v(values.begin(), values.end());
    std::sort(v.begin(), v.end(), [&](const Json &a, const Json &b) {
      if (property == Property::kCoordinates) {
        return std::make_pair(a["lat"].get<double>(), a["lon"].get<double>()) <
               std::make_pair(b["lat"].get<double>(), b["lon"].get<double>());
      }
      auto qa = Qid::Parse(a["qid"].get<std::string>())->number();
      auto qb = Qid::Parse(b["qid"].get<std::string>())->number();
      if (qa != qb) return qa < qb;
      return a["label"].get<std::string>() < b["label"].get<std::string>();
    });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    values = Json(v);
  }
  return out;
}

CacheKey WikidataClient::KeyFor(Qid qid, Property property) const {
  return CacheKey{qid.str(), PropertyId(property), options_.snapshot};
}

std::optional<Json> WikidataClient::CachedValues(Qid qid, Property property) const {
  const PropertyCache &cache = cache_ ? *cache_ : local_cache_;
  return cache.Get(KeyFor(qid, property));
}

std::vector<EntityProfile> WikidataClient::FetchProfiles(const std::vector<Qid> &qids,
                                                         const PropertySet &props) {
  if (qids.empty()) throw ConfigError("fetch_profiles needs at least one QID");
  if (props.empty()) throw ConfigError("fetch_profiles needs at least one property");
  std::set<Qid> unique(qids.begin(), qids.end());
  for (const auto &q : unique) {
    if (!q.valid()) throw ConfigError("invalid QID in fetch request");
  }

  struct Job {
    Property property;
    std::vector<Qid> batch;
  };
  std::vector<Job> jobs;
  for (auto p : props.List()) {
    std::vector<Qid> missing;
    for (const auto &q : unique) {
      if (!CachedValues(q, p)) missing.push_back(q);
    }
    for (std::size_t i = 0; i < missing.size(); i += options_.batch_size) {
      auto end = std::min(missing.size(), i + options_.batch_size);
      jobs.push_back({p, std::vector<Qid>(missing.begin() + i, missing.begin() + end)});
    }
  }

  std::vector<std::map<Qid, Json>> results(jobs.size());
  ParallelFor(jobs.size(), options_.parallelism, [&](std::size_t j) {
    const Job &job = jobs[j];
    HttpRequest req = BuildRequest(options_.endpoint, BuildQuery(job.property, job.batch));
    remote_requests_.fetch_add(1);
    HttpResponse resp = transport_.Send(req);
    if (ResilientTransport::IsRetriable(resp)) {
      throw NetworkError("SPARQL endpoint unavailable (status " + std::to_string(resp.status) +
                         (resp.error.empty() ? "" : ", " + resp.error) + ")");
    }
    if (resp.status != 200) {
      throw ConfigError("SPARQL endpoint rejected the query with HTTP " +
                        std::to_string(resp.status) + ": " + resp.body.substr(0, 200));
    }
    results[j] = ParseResponse(job.property, resp.body, job.batch);
  });

  PropertyCache &cache = cache_ ? *cache_ : local_cache_;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    std::vector<std::pair<CacheKey, Json>> entries;
    for (const auto &[qid, values] : results[j]) entries.emplace_back(KeyFor(qid, jobs[j].property), values);
    cache.PutAll(entries);
  }

  std::map<Qid, EntityProfile> built;
  for (const auto &q : unique) {
    EntityProfile profile;
    profile.qid = q;
    profile.snapshot_id = options_.snapshot;
    for (auto p : props.List()) {
      auto values = cache.Get(KeyFor(q, p));
      if (!values || values->empty()) continue;
      profile.found = true;
      if (p == Property::kCoordinates) {
        Coordinates c{(*values)[0].at("lat").get<double>(), (*values)[0].at("lon").get<double>()};
        if (c.valid()) profile.coordinates = c;
        continue;
      }
      auto labeled = LabeledFromJson(*values);
      switch (p) {
        case Property::kInstanceOf: profile.instance_of = std::move(labeled); break;
        case Property::kGender: profile.gender = std::move(labeled); break;
        case Property::kOccupation: profile.occupations = std::move(labeled); break;
        case Property::kEthnicGroup: profile.ethnic_group = std::move(labeled); break;
        case Property::kReligion: profile.religion = std::move(labeled); break;
        case Property::kCountry:
        case Property::kCitizenship:
        case Property::kAdminLocation:
          for (auto &v : labeled) profile.location_names.push_back({v.qid, std::move(v.label), p});
          break;
        case Property::kCoordinates: break;
      }
    }
    SortByQid(&profile.instance_of);
    SortByQid(&profile.gender);
    SortByQid(&profile.occupations);
    SortByQid(&profile.ethnic_group);
    SortByQid(&profile.religion);
    std::sort(profile.location_names.begin(), profile.location_names.end(),
              [](const LocationName &a, const LocationName &b) {
                if (a.qid != b.qid) return a.qid < b.qid;
                return a.source < b.source;
              });
    built.emplace(q, std::move(profile));
  }

  std::vector<EntityProfile> out;
  out.reserve(qids.size());
  for (const auto &q : qids) out.push_back(built.at(q));
  return out;
}

}  // namespace bias_audit
