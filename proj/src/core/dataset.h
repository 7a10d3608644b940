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

#ifndef BIAS_AUDIT_CORE_DATASET_H_
#define BIAS_AUDIT_CORE_DATASET_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "core/errors.h"
#include "json.hpp"

namespace bias_audit {

using Json = nlohmann::json;

enum class Split { kTrain, kDev, kTest };

const char *SplitName(Split split);
// Accepts "train", "dev", "validation" and "test".
std::optional<Split> ParseSplit(std::string_view name);

enum class FormatId {
  kSquad,          // SQuAD v1/v2 nested JSON
  kBoolq,          // BoolQ JSON lines
  kStrategyQa,     // StrategyQA JSON array
  kCommonsenseQa,  // CommonsenseQA JSON lines
  kTriviaQa,       // TriviaQA reading-comprehension JSON
  kJsonl,          // generic JSON lines with a field mapping
  kCsv,            // CSV with header row and a field mapping
};

const char *FormatName(FormatId format);
std::optional<FormatId> ParseFormat(std::string_view name);

enum class AnalysisCategory { kEncyclopedic, kCommonsense, kScholarly };

const char *CategoryName(AnalysisCategory category);
std::optional<AnalysisCategory> ParseCategory(std::string_view name);

// One normalized QA item. Immutable once loaded.
struct DatasetRecord {
  std::string record_id;
  std::string question;
  std::optional<std::string> context;
  std::vector<std::string> answers;
  std::vector<std::string> wiki_identifiers;
  Split source_split = Split::kTest;

  // Text of the "answer" field as seen by linkers and span offsets: all
  // answers joined with a newline.
  std::string AnswerText() const;

  bool operator==(const DatasetRecord &) const = default;
};

// Source field names for the generic adapters. Names are dotted JSON paths
// (or CSV column names); several answer sources may be listed.
struct FieldMapping {
  std::string id = "id";
  std::string question = "question";
  std::vector<std::string> answers = {"answers"};
  std::string context = "context";
  std::string wiki = "wiki_identifiers";

  // Parses "question=sentence,answers=option1|option2,id=qID". Keys that are
  // not mentioned keep their defaults.
  static FieldMapping Parse(std::string_view spec);
};

struct DatasetManifest {
  std::string benchmark_name;
  FormatId format_id = FormatId::kJsonl;
  std::set<Split> available_splits;
  bool test_hidden = false;
  AnalysisCategory analysis_category = AnalysisCategory::kEncyclopedic;

  // Dataset file per split, resolved against the manifest's directory.
  std::map<Split, std::filesystem::path> files;
  FieldMapping fields;

  static DatasetManifest FromJson(const Json &json,
                                  const std::filesystem::path &base_dir);
  static DatasetManifest Load(const std::filesystem::path &path);
};

struct LoadOptions {
  bool strict = false;
  std::optional<FieldMapping> fields;
};

// Picks the split to analyze: the test split unless it is hidden, in which
// case the development split.
Split SelectSplit(const DatasetManifest &manifest);

// Parses one split of a benchmark into records, in file order. Malformed
// records are counted under "malformed_record" and skipped, or are fatal in
// strict mode.
std::vector<DatasetRecord> LoadDataset(const std::filesystem::path &path,
                                       const DatasetManifest &manifest,
                                       Split split, const LoadOptions &options,
                                       Warnings *warnings = nullptr);

// Reduces identifiers to article titles: URL path segment, percent-decoded,
// underscores as spaces, duplicates dropped in first-seen order. Entries that
// cannot be parsed are counted under "unparseable_wiki_identifier".
std::vector<std::string> ExtractWikiIdentifiers(const DatasetRecord &record,
                                                Warnings *warnings = nullptr);

// Returns the title for one identifier, or nullopt when it is neither a
// plain title nor a Wikipedia article URL.
std::optional<std::string> NormalizeWikiIdentifier(std::string_view entry);

Json RecordToJson(const DatasetRecord &record);
DatasetRecord RecordFromJson(const Json &json);
std::string RecordsToJsonl(const std::vector<DatasetRecord> &records);
std::vector<DatasetRecord> ReadRecordsJsonl(const std::filesystem::path &path);

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_DATASET_H_
