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

#include "core/gazetteer.h"

#include <algorithm>
#include <fstream>

#include "embedded_stopwords.h"

namespace bias_audit {

namespace {

bool IsWordByte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c >= 0x80;
}

struct Token {
  std::size_t begin;
  std::size_t end;
};

std::vector<Token> Tokenize(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!IsWordByte(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    std::size_t b = i;
    while (i < s.size() && IsWordByte(static_cast<unsigned char>(s[i]))) ++i;
    tokens.push_back({b, i});
  }
  return tokens;
}

}  // namespace

GazetteerIndex GazetteerIndex::Load(const std::filesystem::path &path, bool strict,
                                    Warnings *warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read gazetteer: " + path.string());
  GazetteerIndex index;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = text::Split(line, '\t');
    std::optional<Qid> qid;
    long rank = 0;
    bool ok = cols.size() >= 2 && !text::Trim(cols[0]).empty();
    if (ok) qid = Qid::Parse(text::Trim(cols[1]));
    ok = ok && qid.has_value();
    if (ok && cols.size() >= 3 && !text::Trim(cols[2]).empty()) {
      try {
        rank = std::stol(cols[2]);
      } catch (...) {
        ok = false;
      }
    }
    if (!ok) {
      if (strict) {
        throw DataError(path.string() + ":" + std::to_string(lineno) + ": invalid gazetteer line");
      }
      if (warnings) warnings->Add("invalid_gazetteer_line");
      continue;
    }
    index.Add(cols[0], *qid, rank);
  }
  index.Finalize();
  return index;
}

void GazetteerIndex::Add(std::string_view label, Qid qid, long rank) {
  std::string key = text::NormalizeLabel(label);
  if (key.empty()) return;
  auto &list = entries_[key];
  for (auto &c : list) {
    if (c.qid == qid) {
      c.rank = std::min(c.rank, rank);
      return;
    }
  }
  list.push_back({qid, rank});
  max_tokens_ = std::max(max_tokens_, Tokenize(key).size());
}

void GazetteerIndex::Finalize() {
  for (auto &[label, list] : entries_) {
    std::sort(list.begin(), list.end(), [](const auto &a, const auto &b) {
      if (a.rank != b.rank) return a.rank < b.rank;
      return a.qid < b.qid;
    });
  }
}

const std::vector<GazetteerCandidate> *GazetteerIndex::Lookup(std::string_view label) const {
  auto it = entries_.find(text::NormalizeLabel(label));
  return it == entries_.end() ? nullptr : &it->second;
}

std::set<std::string> GazetteerOptions::DefaultStopwords() {
  std::set<std::string> words;
  for (const auto &line : text::Split(embedded::kStopwords, '\n')) {
    std::string w = text::Trim(line);
    if (w.empty() || w[0] == '#') continue;
    words.insert(text::AsciiLower(w));
  }
  return words;
}

std::vector<GazetteerCandidateSpan> FindCandidateSpans(const GazetteerIndex &index,
                                                       std::string_view text,
                                                       const GazetteerOptions &options) {
  std::vector<GazetteerCandidateSpan> spans;
  auto tokens = Tokenize(text);
  std::size_t width = index.max_label_tokens();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t j = i; j < tokens.size() && j - i < width; ++j) {
      std::string_view surface = text.substr(tokens[i].begin, tokens[j].end - tokens[i].begin);
      if (text::CodepointLength(surface) < options.min_length) continue;
      std::string key = text::NormalizeLabel(surface);
      if (options.stopwords.count(key)) continue;
      if (const auto *c = index.Lookup(key)) {
        spans.push_back({tokens[i].begin, tokens[j].end, c});
      }
    }
  }
  return spans;
}

std::vector<GazetteerMatch> MatchGazetteer(const GazetteerIndex &index, std::string_view text,
                                           const GazetteerOptions &options) {
  auto spans = FindCandidateSpans(index, text, options);
  if (spans.empty()) return {};
  // Spans come out ordered by start, then by end. best[k] is the optimal
  // selection from spans[k..] given that nothing before spans[k].start is
  // taken; next_free[k] is the first span starting at or after spans[k].end.
  const std::size_t n = spans.size();
  std::vector<std::size_t> next_free(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t m = k + 1;
    while (m < n && spans[m].byte_start < spans[k].byte_end) ++m;
    next_free[k] = m;
  }
  struct Score {
    std::size_t chars = 0;
    std::size_t count = 0;
    bool take = false;
  };
  auto better = [](std::size_t c1, std::size_t n1, std::size_t c2, std::size_t n2) {
    if (c1 != c2) return c1 > c2;
    return n1 < n2;
  };
  std::vector<Score> best(n + 1);
  std::vector<std::size_t> weight(n);
  for (std::size_t k = 0; k < n; ++k) {
    weight[k] = text::CodepointLength(text.substr(spans[k].byte_start,
                                                  spans[k].byte_end - spans[k].byte_start));
  }
  for (std::size_t k = n; k-- > 0;) {
    const Score &skip = best[k + 1];
    const Score &rest = best[next_free[k]];
    std::size_t take_chars = weight[k] + rest.chars;
    std::size_t take_count = 1 + rest.count;
    // Full ties go to taking the earlier span.
    if (better(skip.chars, skip.count, take_chars, take_count)) {
      best[k] = {skip.chars, skip.count, false};
    } else {
      best[k] = {take_chars, take_count, true};
    }
  }
  // Walk the optimal selection. At a chosen start, the longest span that
  // keeps the optimum is emitted.
  std::vector<GazetteerMatch> out;
  std::size_t k = 0;
  while (k < n) {
    if (!best[k].take) {
      ++k;
      continue;
    }
    std::size_t chosen = k;
    for (std::size_t m = k + 1; m < n && spans[m].byte_start == spans[k].byte_start; ++m) {
      const Score &rest = best[next_free[m]];
      if (weight[m] + rest.chars == best[k].chars && 1 + rest.count == best[k].count) {
        chosen = m;
      }
    }
    const auto &s = spans[chosen];
    GazetteerMatch match;
    match.start = text::CodepointLength(text.substr(0, s.byte_start));
    match.end = match.start + weight[chosen];
    match.surface = std::string(text.substr(s.byte_start, s.byte_end - s.byte_start));
    match.qid = s.candidates->front().qid;
    match.confidence = 1.0 / static_cast<double>(s.candidates->size());
    out.push_back(std::move(match));
    k = next_free[chosen];
  }
  return out;
}

}  // namespace bias_audit
