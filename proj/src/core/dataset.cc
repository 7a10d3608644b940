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

#include "core/dataset.h"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "core/text.h"

namespace bias_audit {

namespace fs = std::filesystem;

const char *SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "test";
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev" || name == "validation") return Split::kDev;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

namespace {

struct FormatEntry {
  FormatId id;
  const char *name;
};

constexpr FormatEntry kFormats[] = {
    {FormatId::kSquad, "squad"},
    {FormatId::kBoolq, "boolq"},
    {FormatId::kStrategyQa, "strategyqa"},
    {FormatId::kCommonsenseQa, "commonsenseqa"},
    {FormatId::kTriviaQa, "triviaqa"},
    {FormatId::kJsonl, "jsonl"},
    {FormatId::kCsv, "csv"},
};

}  // namespace

const char *FormatName(FormatId format) {
  for (const auto &f : kFormats) {
    if (f.id == format) return f.name;
  }
  return "jsonl";
}

std::optional<FormatId> ParseFormat(std::string_view name) {
  for (const auto &f : kFormats) {
    if (name == f.name) return f.id;
  }
  return std::nullopt;
}

const char *CategoryName(AnalysisCategory category) {
  switch (category) {
    case AnalysisCategory::kEncyclopedic: return "encyclopedic";
    case AnalysisCategory::kCommonsense: return "commonsense";
    case AnalysisCategory::kScholarly: return "scholarly";
  }
  return "encyclopedic";
}

std::optional<AnalysisCategory> ParseCategory(std::string_view name) {
  if (name == "encyclopedic") return AnalysisCategory::kEncyclopedic;
  if (name == "commonsense") return AnalysisCategory::kCommonsense;
  if (name == "scholarly") return AnalysisCategory::kScholarly;
  return std::nullopt;
}

std::string DatasetRecord::AnswerText() const { return text::Join(answers, "\n"); }

FieldMapping FieldMapping::Parse(std::string_view spec) {
  FieldMapping mapping;
  if (text::Trim(spec).empty()) return mapping;
  for (const auto &part : text::Split(spec, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("field mapping entry without '=': " + part);
    }
    std::string key = text::Trim(part.substr(0, eq));
    std::string value = text::Trim(part.substr(eq + 1));
    if (value.empty()) throw ConfigError("empty source for field: " + key);
    if (key == "id") {
      mapping.id = value;
    } else if (key == "question") {
      mapping.question = value;
    } else if (key == "answers" || key == "answer") {
      mapping.answers = text::Split(value, '|');
    } else if (key == "context") {
      mapping.context = value;
    } else if (key == "wiki" || key == "wiki_identifiers") {
      mapping.wiki = value;
    } else {
      throw ConfigError("unknown field in mapping: " + key);
    }
  }
  return mapping;
}

DatasetManifest DatasetManifest::FromJson(const Json &json,
                                          const fs::path &base_dir) {
  if (!json.is_object()) throw ConfigError("manifest must be a JSON object");
  DatasetManifest m;
  try {
    m.benchmark_name = json.at("benchmark_name").get<std::string>();
    auto format = json.at("format_id").get<std::string>();
    auto fid = ParseFormat(format);
    if (!fid) throw ConfigError("unknown format_id: " + format);
    m.format_id = *fid;
    for (const auto &s : json.at("available_splits")) {
      auto split = ParseSplit(s.get<std::string>());
      if (!split) throw ConfigError("unknown split: " + s.get<std::string>());
      m.available_splits.insert(*split);
    }
    m.test_hidden = json.value("test_hidden", false);
    auto category = json.at("analysis_category").get<std::string>();
    auto cat = ParseCategory(category);
    if (!cat) throw ConfigError("unknown analysis_category: " + category);
    m.analysis_category = *cat;
    if (json.contains("files")) {
      for (const auto &[key, value] : json.at("files").items()) {
        auto split = ParseSplit(key);
        if (!split) throw ConfigError("unknown split in files: " + key);
        fs::path p = value.get<std::string>();
        m.files[*split] = p.is_absolute() ? p : base_dir / p;
      }
    }
    if (json.contains("fields")) {
      const auto &f = json.at("fields");
      if (f.is_string()) {
        m.fields = FieldMapping::Parse(f.get<std::string>());
      } else {
        if (f.contains("id")) m.fields.id = f["id"].get<std::string>();
        if (f.contains("question")) m.fields.question = f["question"].get<std::string>();
        if (f.contains("context")) m.fields.context = f["context"].get<std::string>();
        if (f.contains("wiki")) m.fields.wiki = f["wiki"].get<std::string>();
        if (f.contains("answers")) {
          const auto &a = f["answers"];
          m.fields.answers = a.is_array() ? a.get<std::vector<std::string>>()
                                          : text::Split(a.get<std::string>(), '|');
        }
      }
    }
  } catch (const Json::exception &e) {
    throw ConfigError(std::string("invalid manifest: ") + e.what());
  }
  if (m.benchmark_name.empty()) throw ConfigError("manifest: empty benchmark_name");
  if (m.available_splits.empty()) throw ConfigError("manifest: no available_splits");
  return m;
}

DatasetManifest DatasetManifest::Load(const fs::path &path) {
  if (!fs::exists(path)) throw ConfigError("manifest not found: " + path.string());
  Json json;
  try {
    json = Json::parse(files::ReadAll(path));
  } catch (const Json::parse_error &e) {
    throw ConfigError("manifest is not valid JSON: " + std::string(e.what()));
  }
  return FromJson(json, path.parent_path());
}

Split SelectSplit(const DatasetManifest &manifest) {
  const auto &s = manifest.available_splits;
  if (s.count(Split::kTest) && !manifest.test_hidden) return Split::kTest;
  if (s.count(Split::kDev)) return Split::kDev;
  throw ConfigError("benchmark '" + manifest.benchmark_name +
                    "' has no usable dev or test split; pass --split explicitly");
}

std::optional<std::string> NormalizeWikiIdentifier(std::string_view entry) {
  std::string trimmed = text::Trim(entry);
  if (trimmed.empty()) return std::nullopt;
  std::string title;
  if (text::StartsWith(trimmed, "http://") || text::StartsWith(trimmed, "https://")) {
    auto scheme_end = trimmed.find("://") + 3;
    auto path_start = trimmed.find('/', scheme_end);
    if (path_start == std::string::npos) return std::nullopt;
    std::string host = text::AsciiLower(trimmed.substr(scheme_end, path_start - scheme_end));
    if (host != "wikipedia.org" && !text::EndsWith(host, ".wikipedia.org")) {
      return std::nullopt;
    }
    std::string path = trimmed.substr(path_start);
    auto cut = path.find_first_of("?#");
    if (cut != std::string::npos) path.resize(cut);
    if (!text::StartsWith(path, "/wiki/")) return std::nullopt;
    title = text::PercentDecode(path.substr(6));
  } else {
    title = trimmed;
  }
  for (char &c : title) {
    if (c == '_') c = ' ';
  }
  title = text::Trim(title);
  // Collapse internal whitespace runs the way MediaWiki does.
  std::string collapsed;
  for (char c : title) {
    if (c == ' ' && !collapsed.empty() && collapsed.back() == ' ') continue;
    collapsed.push_back(c);
  }
  if (collapsed.empty()) return std::nullopt;
  return collapsed;
}

std::vector<std::string> ExtractWikiIdentifiers(const DatasetRecord &record,
                                                Warnings *warnings) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto &entry : record.wiki_identifiers) {
    auto title = NormalizeWikiIdentifier(entry);
    if (!title) {
      if (warnings) warnings->Add("unparseable_wiki_identifier");
      continue;
    }
    if (seen.insert(*title).second) out.push_back(std::move(*title));
  }
  return out;
}

namespace {

// Raised for a single bad record; the loader decides whether it is fatal.
struct RecordProblem {
  std::string message;
};

const Json *JsonPath(const Json &root, const std::string &path) {
  const Json *cur = &root;
  for (const auto &key : text::Split(path, '.')) {
    if (cur->is_object()) {
      auto it = cur->find(key);
      if (it == cur->end()) return nullptr;
      cur = &*it;
    } else if (cur->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(key);
      } catch (...) {
        return nullptr;
      }
      if (idx >= cur->size()) return nullptr;
      cur = &(*cur)[idx];
    } else {
      return nullptr;
    }
  }
  return cur;
}

void AppendStrings(const Json &value, std::vector<std::string> *out) {
  if (value.is_null()) return;
  if (value.is_string()) {
    out->push_back(value.get<std::string>());
  } else if (value.is_boolean()) {
    out->push_back(value.get<bool>() ? "yes" : "no");
  } else if (value.is_number()) {
    out->push_back(value.dump());
  } else if (value.is_array()) {
    for (const auto &v : value) AppendStrings(v, out);
  } else if (value.is_object()) {
    if (value.contains("text")) AppendStrings(value["text"], out);
  }
}

std::optional<std::string> ScalarString(const Json *value) {
  if (!value || value->is_null()) return std::nullopt;
  if (value->is_string()) return value->get<std::string>();
  if (value->is_number()) return value->dump();
  if (value->is_boolean()) return std::string(value->get<bool>() ? "yes" : "no");
  return std::nullopt;
}

class RecordSink {
 public:
  RecordSink(Split split, const LoadOptions &options, Warnings *warnings)
      : split_(split), options_(options), warnings_(warnings) {}

  void Add(DatasetRecord record) {
    std::size_t index = index_++;
    record.source_split = split_;
    if (record.record_id.empty()) {
      record.record_id = std::string(SplitName(split_)) + "-" + std::to_string(index);
    }
    if (text::Trim(record.question).empty()) {
      Reject(index, "empty question");
      return;
    }
    if (!ids_.insert(record.record_id).second) {
      Reject(index, "duplicate record_id '" + record.record_id + "'");
      return;
    }
    std::vector<std::string> wiki;
    for (auto &entry : record.wiki_identifiers) {
      if (NormalizeWikiIdentifier(entry)) {
        wiki.push_back(std::move(entry));
      } else if (warnings_) {
        warnings_->Add("invalid_wiki_identifier");
      }
    }
    record.wiki_identifiers = std::move(wiki);
    records_.push_back(std::move(record));
  }

  void Reject(std::size_t index, const std::string &why) {
    if (options_.strict) {
      throw DataError("malformed record at index " + std::to_string(index) + ": " + why);
    }
    if (warnings_) warnings_->Add("malformed_record");
  }

  std::size_t NextIndex() { return index_++; }
  std::vector<DatasetRecord> Take() { return std::move(records_); }

 private:
  Split split_;
  const LoadOptions &options_;
  Warnings *warnings_;
  std::size_t index_ = 0;
  std::unordered_set<std::string> ids_;
  std::vector<DatasetRecord> records_;
};

Json ParseWholeJson(const fs::path &path) {
  try {
    return Json::parse(files::ReadAll(path));
  } catch (const Json::parse_error &e) {
    throw DataError("cannot parse " + path.string() + ": " + e.what());
  }
}

// Runs fn on each non-blank line parsed as JSON. Lines that do not parse are
// reported to the sink as malformed records.
template <typename Fn>
void ForEachJsonLine(const fs::path &path, RecordSink &sink, Fn fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read dataset file: " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (text::Trim(line).empty()) continue;
    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const Json::parse_error &e) {
      sink.Reject(sink.NextIndex(), std::string("invalid JSON: ") + e.what());
      continue;
    }
    try {
      fn(obj);
    } catch (const Json::exception &e) {
      sink.Reject(sink.NextIndex(), e.what());
    }
  }
}

DatasetRecord FromMapping(const Json &obj, const FieldMapping &fields) {
  DatasetRecord r;
  if (auto id = ScalarString(JsonPath(obj, fields.id))) r.record_id = *id;
  auto q = ScalarString(JsonPath(obj, fields.question));
  r.question = q.value_or("");
  if (auto c = ScalarString(JsonPath(obj, fields.context))) r.context = *c;
  for (const auto &src : fields.answers) {
    if (const Json *a = JsonPath(obj, src)) AppendStrings(*a, &r.answers);
  }
  if (const Json *w = JsonPath(obj, fields.wiki)) AppendStrings(*w, &r.wiki_identifiers);
  return r;
}

void LoadSquad(const fs::path &path, RecordSink &sink) {
  Json root = ParseWholeJson(path);
  if (!root.contains("data") || !root["data"].is_array()) {
    throw DataError("SQuAD file without a 'data' array: " + path.string());
  }
  for (const auto &article : root["data"]) {
    std::string title = article.value("title", "");
    if (!article.contains("paragraphs")) continue;
    for (const auto &para : article["paragraphs"]) {
      std::string context = para.value("context", "");
      if (!para.contains("qas")) continue;
      for (const auto &qa : para["qas"]) {
        DatasetRecord r;
        try {
          if (auto id = ScalarString(JsonPath(qa, "id"))) r.record_id = *id;
          r.question = qa.value("question", "");
          r.context = context;
          if (qa.contains("answers")) AppendStrings(qa["answers"], &r.answers);
        } catch (const Json::exception &e) {
          sink.Reject(sink.NextIndex(), e.what());
          continue;
        }
        if (!title.empty()) r.wiki_identifiers.push_back(title);
        sink.Add(std::move(r));
      }
    }
  }
}

void LoadTriviaQa(const fs::path &path, RecordSink &sink) {
  Json root = ParseWholeJson(path);
  if (!root.contains("Data") || !root["Data"].is_array()) {
    throw DataError("TriviaQA file without a 'Data' array: " + path.string());
  }
  for (const auto &item : root["Data"]) {
    DatasetRecord r;
    try {
      r.record_id = item.value("QuestionId", "");
      r.question = item.value("Question", "");
      if (item.contains("Answer") && item["Answer"].contains("Value")) {
        r.answers.push_back(item["Answer"]["Value"].get<std::string>());
      }
      if (item.contains("EntityPages")) {
        for (const auto &page : item["EntityPages"]) {
          if (page.contains("Title")) r.wiki_identifiers.push_back(page["Title"].get<std::string>());
        }
      }
    } catch (const Json::exception &e) {
      sink.Reject(sink.NextIndex(), e.what());
      continue;
    }
    sink.Add(std::move(r));
  }
}

void LoadStrategyQa(const fs::path &path, RecordSink &sink) {
  Json root = ParseWholeJson(path);
  if (!root.is_array()) throw DataError("StrategyQA file must hold a JSON array");
  for (const auto &item : root) {
    DatasetRecord r;
    try {
      r.record_id = item.value("qid", "");
      r.question = item.value("question", "");
      if (item.contains("answer")) AppendStrings(item["answer"], &r.answers);
    } catch (const Json::exception &e) {
      sink.Reject(sink.NextIndex(), e.what());
      continue;
    }
    sink.Add(std::move(r));
  }
}

void LoadBoolq(const fs::path &path, RecordSink &sink) {
  ForEachJsonLine(path, sink, [&](const Json &obj) {
    DatasetRecord r;
    if (auto id = ScalarString(JsonPath(obj, "id"))) r.record_id = *id;
    r.question = obj.value("question", "");
    if (obj.contains("passage")) r.context = obj["passage"].get<std::string>();
    if (obj.contains("answer")) AppendStrings(obj["answer"], &r.answers);
    if (obj.contains("title")) r.wiki_identifiers.push_back(obj["title"].get<std::string>());
    sink.Add(std::move(r));
  });
}

void LoadCommonsenseQa(const fs::path &path, RecordSink &sink) {
  ForEachJsonLine(path, sink, [&](const Json &obj) {
    DatasetRecord r;
    r.record_id = obj.value("id", "");
    const Json &q = obj.at("question");
    r.question = q.value("stem", "");
    std::string key = obj.value("answerKey", "");
    if (!key.empty() && q.contains("choices")) {
      for (const auto &choice : q["choices"]) {
        if (choice.value("label", "") == key) r.answers.push_back(choice.value("text", ""));
      }
    }
    sink.Add(std::move(r));
  });
}

void LoadCsv(const fs::path &path, const FieldMapping &fields, RecordSink &sink) {
  auto rows = text::ParseCsv(files::ReadAll(path));
  if (rows.empty()) return;
  const auto &header = rows.front();
  auto column = [&](const std::string &name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (text::Trim(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  auto q_col = column(fields.question);
  if (!q_col) throw DataError("CSV header lacks question column '" + fields.question + "'");
  auto id_col = column(fields.id);
  auto ctx_col = column(fields.context);
  auto wiki_col = column(fields.wiki);
  std::vector<std::size_t> answer_cols;
  for (const auto &a : fields.answers) {
    if (auto c = column(a)) answer_cols.push_back(*c);
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    if (row.size() != header.size()) {
      sink.Reject(sink.NextIndex(), "expected " + std::to_string(header.size()) +
                                        " columns, found " + std::to_string(row.size()));
      continue;
    }
    DatasetRecord rec;
    if (id_col) rec.record_id = row[*id_col];
    rec.question = row[*q_col];
    if (ctx_col && !row[*ctx_col].empty()) rec.context = row[*ctx_col];
    for (auto c : answer_cols) {
      if (!row[c].empty()) rec.answers.push_back(row[c]);
    }
    if (wiki_col && !row[*wiki_col].empty()) {
      for (auto &w : text::Split(row[*wiki_col], '|')) rec.wiki_identifiers.push_back(w);
    }
    sink.Add(std::move(rec));
  }
}

}  // namespace

std::vector<DatasetRecord> LoadDataset(const fs::path &path,
                                       const DatasetManifest &manifest,
                                       Split split, const LoadOptions &options,
                                       Warnings *warnings) {
  if (!manifest.available_splits.count(split)) {
    throw ConfigError(std::string("split '") + SplitName(split) +
                      "' is not available for " + manifest.benchmark_name);
  }
  if (!fs::exists(path)) throw ConfigError("dataset file not found: " + path.string());
  const FieldMapping &fields = options.fields ? *options.fields : manifest.fields;
  RecordSink sink(split, options, warnings);
  switch (manifest.format_id) {
    case FormatId::kSquad: LoadSquad(path, sink); break;
    case FormatId::kBoolq: LoadBoolq(path, sink); break;
    case FormatId::kStrategyQa: LoadStrategyQa(path, sink); break;
    case FormatId::kCommonsenseQa: LoadCommonsenseQa(path, sink); break;
    case FormatId::kTriviaQa: LoadTriviaQa(path, sink); break;
    case FormatId::kCsv: LoadCsv(path, fields, sink); break;
    case FormatId::kJsonl:
      ForEachJsonLine(path, sink, [&](const Json &obj) {
        sink.Add(FromMapping(obj, fields));
      });
      break;
  }
  auto records = sink.Take();
  if (records.empty()) {
    if (options.strict) throw DataError("no records in " + path.string());
    if (warnings) warnings->Add("empty_dataset");
  }
  return records;
}

Json RecordToJson(const DatasetRecord &r) {
  Json j;
  j["record_id"] = r.record_id;
  j["question"] = r.question;
  j["context"] = r.context ? Json(*r.context) : Json(nullptr);
  j["answers"] = r.answers;
  j["wiki_identifiers"] = r.wiki_identifiers;
  j["split"] = SplitName(r.source_split);
  return j;
}

DatasetRecord RecordFromJson(const Json &j) {
  DatasetRecord r;
  try {
    r.record_id = j.at("record_id").get<std::string>();
    r.question = j.at("question").get<std::string>();
    if (j.contains("context") && !j["context"].is_null()) r.context = j["context"].get<std::string>();
    r.answers = j.value("answers", std::vector<std::string>{});
    r.wiki_identifiers = j.value("wiki_identifiers", std::vector<std::string>{});
    auto split = ParseSplit(j.value("split", "test"));
    if (!split) throw DataError("record with unknown split");
    r.source_split = *split;
  } catch (const Json::exception &e) {
    throw DataError(std::string("invalid record JSON: ") + e.what());
  }
  return r;
}

std::string RecordsToJsonl(const std::vector<DatasetRecord> &records) {
  std::string out;
  for (const auto &r : records) {
    out += RecordToJson(r).dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<DatasetRecord> ReadRecordsJsonl(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read records file: " + path.string());
  std::vector<DatasetRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::Trim(line).empty()) continue;
    try {
      records.push_back(RecordFromJson(Json::parse(line)));
    } catch (const Json::parse_error &e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace bias_audit
