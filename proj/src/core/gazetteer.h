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

#ifndef BIAS_AUDIT_CORE_GAZETTEER_H_
#define BIAS_AUDIT_CORE_GAZETTEER_H_

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "core/errors.h"
#include "core/text.h"

namespace bias_audit {

struct GazetteerCandidate {
  Qid qid;
  long rank = 0;

  bool operator==(const GazetteerCandidate &) const = default;
};

// Label -> candidate items, built from a label dump (TSV: label, qid, rank).
// Labels are stored normalized (ASCII case-folded, whitespace collapsed);
// candidates are ordered by rank, then numeric QID.
class GazetteerIndex {
 public:
  static GazetteerIndex Load(const std::filesystem::path &path, bool strict = false,
                             Warnings *warnings = nullptr);

  void Add(std::string_view label, Qid qid, long rank);
  // Sorts candidate lists; call after the last Add.
  void Finalize();

  // Takes a label in any case/spacing.
  const std::vector<GazetteerCandidate> *Lookup(std::string_view label) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t max_label_tokens() const { return max_tokens_; }

 private:
  std::unordered_map<std::string, std::vector<GazetteerCandidate>> entries_;
  std::size_t max_tokens_ = 0;
};

struct GazetteerOptions {
  std::size_t min_length = 3;
  std::set<std::string> stopwords = DefaultStopwords();

  static std::set<std::string> DefaultStopwords();
};

struct GazetteerMatch {
  // Code point offsets, half-open.
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  Qid qid;
  double confidence = 1.0;
};

// Word-aligned spans of `text` whose normalized form is an index label.
// Exposed for tests; MatchGazetteer selects among these.
struct GazetteerCandidateSpan {
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;
  const std::vector<GazetteerCandidate> *candidates = nullptr;
};
std::vector<GazetteerCandidateSpan> FindCandidateSpans(const GazetteerIndex &index,
                                                       std::string_view text,
                                                       const GazetteerOptions &options);

// Case-insensitive dictionary linking. Picks the non-overlapping set of
// candidate spans covering the most characters; ties go to fewer matches,
// then to earlier and longer spans. Matches are returned left to right.
std::vector<GazetteerMatch> MatchGazetteer(const GazetteerIndex &index, std::string_view text,
                                           const GazetteerOptions &options);

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_GAZETTEER_H_
