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

#include "core/linking.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "core/parallel.h"

namespace bias_audit {

using Json = nlohmann::json;

const char *LinkFieldName(LinkField field) {
  switch (field) {
    case LinkField::kQuestion: return "question";
    case LinkField::kAnswer: return "answer";
    case LinkField::kContext: return "context";
    case LinkField::kIdentifier: return "identifier";
  }
  return "question";
}

std::optional<LinkField> ParseLinkField(std::string_view name) {
  if (name == "question") return LinkField::kQuestion;
  if (name == "answer" || name == "answers") return LinkField::kAnswer;
  if (name == "context") return LinkField::kContext;
  if (name == "identifier") return LinkField::kIdentifier;
  return std::nullopt;
}

const char *ProvenanceName(Provenance provenance) {
  switch (provenance) {
    case Provenance::kScenario1: return "scenario1";
    case Provenance::kSidecar: return "sidecar";
    case Provenance::kGazetteer: return "gazetteer";
  }
  return "sidecar";
}

std::optional<Provenance> ParseProvenance(std::string_view name) {
  if (name == "scenario1") return Provenance::kScenario1;
  if (name == "sidecar") return Provenance::kSidecar;
  if (name == "gazetteer") return Provenance::kGazetteer;
  return std::nullopt;
}

std::string FieldText(const DatasetRecord &record, LinkField field) {
  switch (field) {
    case LinkField::kQuestion: return record.question;
    case LinkField::kAnswer: return record.AnswerText();
    case LinkField::kContext: return record.context.value_or("");
    case LinkField::kIdentifier: return "";
  }
  return "";
}

std::string ValidateLink(const EntityLink &link, const DatasetRecord *record) {
  if (link.record_id.empty()) return "empty record_id";
  if (!link.qid.valid()) return "invalid qid";
  if (link.surface.empty()) return "empty surface";
  if (!(link.confidence >= 0.0 && link.confidence <= 1.0)) return "confidence outside [0,1]";
  if (link.provenance == Provenance::kScenario1) {
    if (link.field != LinkField::kIdentifier) return "scenario1 link outside identifier field";
    if (link.confidence != 1.0) return "scenario1 link with confidence != 1";
  }
  if (link.span) {
    if (link.field == LinkField::kIdentifier) return "identifier link with a span";
    if (link.span->start >= link.span->end) return "empty or inverted span";
    if (record) {
      std::string source = FieldText(*record, link.field);
      if (link.span->end > text::CodepointLength(source)) return "span beyond field text";
      auto sub = text::CodepointSubstr(source, link.span->start, link.span->end);
      if (!sub || *sub != link.surface) return "span text differs from surface";
    }
  }
  return "";
}

void SortLinks(std::vector<EntityLink> *links) {
  std::stable_sort(links->begin(), links->end(), [](const EntityLink &a, const EntityLink &b) {
    if (a.field != b.field) return a.field < b.field;
    std::size_t sa = a.span ? a.span->start : 0;
    std::size_t sb = b.span ? b.span->start : 0;
    if (sa != sb) return sa < sb;
    return a.qid < b.qid;
  });
}

Json LinkToJson(const EntityLink &link) {
  Json j;
  j["record_id"] = link.record_id;
  j["surface"] = link.surface;
  j["start"] = link.span ? Json(link.span->start) : Json(nullptr);
  j["end"] = link.span ? Json(link.span->end) : Json(nullptr);
  j["field"] = LinkFieldName(link.field);
  j["qid"] = link.qid.str();
  j["confidence"] = link.confidence;
  j["provenance"] = ProvenanceName(link.provenance);
  return j;
}

EntityLink LinkFromJson(const Json &j) {
  if (!j.is_object()) throw DataError("link is not a JSON object");
  EntityLink link;
  try {
    link.record_id = j.at("record_id").get<std::string>();
    link.surface = j.at("surface").get<std::string>();
    auto field = ParseLinkField(j.at("field").get<std::string>());
    if (!field) throw DataError("unknown field '" + j.at("field").get<std::string>() + "'");
    link.field = *field;
    std::string qid_text = j.at("qid").get<std::string>();
    auto qid = Qid::Parse(qid_text);
    if (!qid) throw DataError("qid '" + qid_text + "' is not a Wikidata item id");
    link.qid = *qid;
    const Json &start = j.contains("start") ? j["start"] : Json(nullptr);
    const Json &end = j.contains("end") ? j["end"] : Json(nullptr);
    if (!start.is_null() || !end.is_null()) {
      if (!start.is_number_integer() || !end.is_number_integer()) {
        throw DataError("start/end must be integers");
      }
      long long s = start.get<long long>();
      long long e = end.get<long long>();
      if (s < 0 || e <= s) throw DataError("invalid span [" + std::to_string(s) + "," +
                                           std::to_string(e) + ")");
      link.span = Span{static_cast<std::size_t>(s), static_cast<std::size_t>(e)};
    }
    link.confidence = j.contains("confidence") ? j["confidence"].get<double>() : 1.0;
    auto prov = ParseProvenance(j.value("provenance", "sidecar"));
    if (!prov) throw DataError("unknown provenance");
    link.provenance = *prov;
  } catch (const Json::exception &e) {
    throw DataError(std::string("malformed link: ") + e.what());
  }
  if (auto why = ValidateLink(link); !why.empty()) throw DataError(why);
  if (!link.span && link.field != LinkField::kIdentifier) {
    throw DataError("text link without start/end");
  }
  return link;
}

std::string LinksToJsonl(const std::vector<EntityLink> &links) {
  std::string out;
  for (const auto &l : links) {
    out += LinkToJson(l).dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<EntityLink> ReadLinksJsonl(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read links file: " + path.string());
  std::vector<EntityLink> links;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::Trim(line).empty() || line[0] == '#') continue;
    try {
      links.push_back(LinkFromJson(Json::parse(line)));
    } catch (const Json::parse_error &e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const DataError &e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return links;
}

SidecarStore SidecarStore::Load(const std::filesystem::path &path, const LoadOptions &options,
                                Warnings *warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read sidecar file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));

  struct Parsed {
    std::optional<EntityLink> link;
    std::string error;
    bool skip = false;
  };
  std::vector<Parsed> parsed(lines.size());
  auto parse_one = [&](std::size_t i) {
    const std::string &l = lines[i];
    if (text::Trim(l).empty() || l[0] == '#') {
      parsed[i].skip = true;
      return;
    }
    try {
      EntityLink link = LinkFromJson(Json::parse(l));
      if (link.provenance == Provenance::kScenario1) {
        throw DataError("scenario1 links do not belong in a sidecar");
      }
      link.provenance = Provenance::kSidecar;
      parsed[i].link = std::move(link);
    } catch (const Json::parse_error &e) {
      parsed[i].error = e.what();
    } catch (const DataError &e) {
      parsed[i].error = e.what();
    }
  };
  const std::size_t chunk = 1024;
  const std::size_t chunks = (lines.size() + chunk - 1) / chunk;
  ParallelFor(chunks, options.threads, [&](std::size_t c) {
    for (std::size_t i = c * chunk; i < std::min(lines.size(), (c + 1) * chunk); ++i) parse_one(i);
  });

  SidecarStore store;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].skip) continue;
    if (!parsed[i].link) {
      if (options.strict) {
        throw DataError(path.string() + ":" + std::to_string(i + 1) +
                        ": invalid sidecar line: " + parsed[i].error);
      }
      ++store.invalid_lines_;
      if (warnings) warnings->Add("invalid_sidecar_line");
      continue;
    }
    store.links_[parsed[i].link->record_id].push_back(std::move(*parsed[i].link));
  }
  for (auto &[id, links] : store.links_) SortLinks(&links);
  return store;
}

SidecarStore SidecarStore::FromLinks(std::vector<EntityLink> links) {
  SidecarStore store;
  for (auto &l : links) store.links_[l.record_id].push_back(std::move(l));
  for (auto &[id, ls] : store.links_) SortLinks(&ls);
  return store;
}

const std::vector<EntityLink> &SidecarStore::Lookup(const std::string &record_id) const {
  static const std::vector<EntityLink> kEmpty;
  auto it = links_.find(record_id);
  return it == links_.end() ? kEmpty : it->second;
}

std::size_t SidecarStore::size() const {
  std::size_t n = 0;
  for (const auto &[id, links] : links_) n += links.size();
  return n;
}

std::vector<EntityLink> SidecarLinker::Link(const DatasetRecord &record,
                                            const LinkOptions &options,
                                            Warnings *warnings) const {
  if (!store_.Contains(record.record_id)) {
    if (warnings) warnings->Add("sidecar_missing_record");
    return {};
  }
  std::vector<EntityLink> out;
  for (const auto &link : store_.Lookup(record.record_id)) {
    if (link.confidence < options.min_confidence) {
      if (warnings) warnings->Add("below_min_confidence");
      continue;
    }
    out.push_back(link);
  }
  return out;
}

std::vector<EntityLink> GazetteerLinker::Link(const DatasetRecord &record,
                                              const LinkOptions &options,
                                              Warnings *) const {
  std::vector<EntityLink> out;
  auto run = [&](LinkField field) {
    std::string source = FieldText(record, field);
    for (auto &m : MatchGazetteer(index_, source, options.gazetteer)) {
      if (m.confidence < options.min_confidence) continue;
      EntityLink link;
      link.record_id = record.record_id;
      link.surface = std::move(m.surface);
      link.span = Span{m.start, m.end};
      link.field = field;
      link.qid = m.qid;
      link.confidence = m.confidence;
      link.provenance = Provenance::kGazetteer;
      out.push_back(std::move(link));
    }
  };
  if (options.include_question) run(LinkField::kQuestion);
  if (options.include_answers) run(LinkField::kAnswer);
  if (options.include_context) run(LinkField::kContext);
  return out;
}

std::vector<EntityLink> LinkRecord(const DatasetRecord &record, const Linker &linker,
                                   const LinkOptions &options, Warnings *warnings) {
  std::vector<EntityLink> links;
  for (auto &link : linker.Link(record, options, warnings)) {
    if (!ValidateLink(link, &record).empty()) {
      if (warnings) warnings->Add("invalid_link");
      continue;
    }
    links.push_back(std::move(link));
  }
  SortLinks(&links);
  return links;
}

std::vector<EntityLink> IdentifierLinks(const DatasetRecord &record,
                                        const std::map<std::string, std::optional<Qid>> &resolved,
                                        Warnings *warnings) {
  std::vector<EntityLink> links;
  for (const auto &title : ExtractWikiIdentifiers(record, warnings)) {
    auto it = resolved.find(title);
    if (it == resolved.end() || !it->second) {
      if (warnings) warnings->Add("unresolved_title");
      continue;
    }
    EntityLink link;
    link.record_id = record.record_id;
    link.surface = title;
    link.field = LinkField::kIdentifier;
    link.qid = *it->second;
    link.confidence = 1.0;
    link.provenance = Provenance::kScenario1;
    links.push_back(std::move(link));
  }
  return links;
}

}  // namespace bias_audit
