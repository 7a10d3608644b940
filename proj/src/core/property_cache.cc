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

#include "core/property_cache.h"

#include <fstream>
#include <mutex>

#include "core/errors.h"
#include "core/text.h"

namespace bias_audit {

using Json = nlohmann::json;

PropertyCache::PropertyCache(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::exists(*path_)) return;
  std::ifstream in(*path_, std::ios::binary);
  if (!in) throw ConfigError("cannot read cache file: " + path_->string());
  std::string line;
  while (std::getline(in, line)) {
    if (text::Trim(line).empty()) continue;
    try {
      Json j = Json::parse(line);
      CacheKey key{j.at("subject").get<std::string>(), j.at("property").get<std::string>(),
                   j.at("snapshot").get<std::string>()};
      index_[std::move(key)] = j.at("values");
    } catch (const Json::exception &) {
      // A torn final line from an interrupted run is expected.
      ++skipped_lines_;
    }
  }
}

std::optional<Json> PropertyCache::Get(const CacheKey &key) const {
  std::shared_lock lock(mu_);
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool PropertyCache::Contains(const CacheKey &key) const {
  std::shared_lock lock(mu_);
  return index_.count(key) > 0;
}

void PropertyCache::Put(const CacheKey &key, const Json &values) { PutAll({{key, values}}); }

void PropertyCache::PutAll(const std::vector<std::pair<CacheKey, Json>> &entries) {
  std::unique_lock lock(mu_);
  std::vector<std::pair<CacheKey, Json>> fresh;
  for (const auto &[key, values] : entries) {
    auto it = index_.find(key);
    if (it != index_.end() && it->second == values) continue;
    index_[key] = values;
    fresh.emplace_back(key, values);
  }
  AppendLocked(fresh);
}

void PropertyCache::AppendLocked(const std::vector<std::pair<CacheKey, Json>> &entries) {
  if (!path_ || entries.empty()) return;
  std::ofstream out(*path_, std::ios::binary | std::ios::app);
  if (!out) throw ConfigError("cannot append to cache file: " + path_->string());
  for (const auto &[key, values] : entries) {
    Json j;
    j["subject"] = key.subject;
    j["property"] = key.property;
    j["snapshot"] = key.snapshot;
    j["values"] = values;
    out << j.dump() << '\n';
  }
}

std::size_t PropertyCache::size() const {
  std::shared_lock lock(mu_);
  return index_.size();
}

std::map<CacheKey, Json> PropertyCache::Entries() const {
  std::shared_lock lock(mu_);
  return index_;
}

}  // namespace bias_audit
