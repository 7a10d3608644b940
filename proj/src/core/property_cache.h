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

#ifndef BIAS_AUDIT_CORE_PROPERTY_CACHE_H_
#define BIAS_AUDIT_CORE_PROPERTY_CACHE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

namespace bias_audit {

// A cached fact is keyed by subject (a QID, or "enwiki:<title>" for title
// resolutions), property id and snapshot id.
struct CacheKey {
  std::string subject;
  std::string property;
  std::string snapshot;

  auto operator<=>(const CacheKey &) const = default;
};

// Append-only JSON-lines cache with an in-memory index. Lines look like
// {"subject":"Q2112","property":"P625","snapshot":"2024-05-01","values":[...]}.
// Safe for concurrent readers; appends are serialized.
class PropertyCache {
 public:
  // In-memory only.
  PropertyCache() = default;
  // Loads every valid line of an existing file; later lines for the same key
  // win. New entries are appended to the file.
  explicit PropertyCache(std::filesystem::path path);

  std::optional<nlohmann::json> Get(const CacheKey &key) const;
  bool Contains(const CacheKey &key) const;

  // Stores and appends; a key already present with the same value is not
  // written again.
  void Put(const CacheKey &key, const nlohmann::json &values);
  void PutAll(const std::vector<std::pair<CacheKey, nlohmann::json>> &entries);

  std::size_t size() const;
  std::size_t skipped_lines() const { return skipped_lines_; }
  std::map<CacheKey, nlohmann::json> Entries() const;

 private:
  void AppendLocked(const std::vector<std::pair<CacheKey, nlohmann::json>> &entries);

  std::optional<std::filesystem::path> path_;
  mutable std::shared_mutex mu_;
  std::map<CacheKey, nlohmann::json> index_;
  std::size_t skipped_lines_ = 0;
};

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_PROPERTY_CACHE_H_
