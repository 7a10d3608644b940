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

#ifndef BIAS_AUDIT_CORE_TEXT_H_
#define BIAS_AUDIT_CORE_TEXT_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bias_audit {

// Wikidata item identifier: "Q" followed by one or more decimal digits.
// Ordered numerically so that sorted lists are stable across runs.
class Qid {
 public:
  Qid() = default;
  constexpr explicit Qid(std::uint64_t number) : number_(number) {}

  // Accepts exactly the "Q<digits>" form. Leading zeros are rejected so the
  // textual form round-trips.
  static std::optional<Qid> Parse(std::string_view text);
  // Accepts either "Q123" or an entity URI ending in "/Q123".
  static std::optional<Qid> FromEntityUri(std::string_view uri);
  static bool IsValid(std::string_view text) { return Parse(text).has_value(); }

  constexpr std::uint64_t number() const { return number_; }
  std::string str() const { return "Q" + std::to_string(number_); }
  bool valid() const { return number_ != 0; }

  auto operator<=>(const Qid &) const = default;

 private:
  std::uint64_t number_ = 0;
};

struct QidHash {
  std::size_t operator()(const Qid &q) const {
    return std::hash<std::uint64_t>{}(q.number());
  }
};

// Text helpers. All offsets in the public data model are Unicode code point
// offsets; these convert between them and byte offsets for UTF-8 strings.
namespace text {

std::size_t CodepointLength(std::string_view s);
// Byte offset of the code point with the given index; s.size() when index
// equals the code point length. Returns nullopt when out of range.
std::optional<std::size_t> ByteOffsetOfCodepoint(std::string_view s,
                                                 std::size_t index);
std::optional<std::string> CodepointSubstr(std::string_view s,
                                           std::size_t start, std::size_t end);
bool IsValidUtf8(std::string_view s);

std::string Trim(std::string_view s);
std::string AsciiLower(std::string_view s);
// Lower-cases ASCII letters, trims, and collapses whitespace runs to a
// single space.
std::string NormalizeLabel(std::string_view s);
std::string PercentDecode(std::string_view s);
std::string UrlEncode(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);
std::string Join(const std::vector<std::string> &parts, std::string_view sep);
bool StartsWith(std::string_view s, std::string_view prefix);
bool EndsWith(std::string_view s, std::string_view suffix);
std::string XmlEscape(std::string_view s);

// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
// newlines. Blank lines are skipped.
std::vector<std::vector<std::string>> ParseCsv(std::string_view data);

// Integer percentage, rounded half away from zero. Display only.
long RoundedPercent(double share);

}  // namespace text

// File helpers shared by the loaders and writers.
namespace files {

std::string ReadAll(const std::filesystem::path &path);
// Writes via a temporary sibling and rename so readers never see a partial
// file.
void WriteAtomic(const std::filesystem::path &path, std::string_view content);

}  // namespace files

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_TEXT_H_
