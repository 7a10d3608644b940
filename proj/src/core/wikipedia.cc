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

#include "core/wikipedia.h"

#include <algorithm>
#include <set>

#include "core/errors.h"
#include "core/parallel.h"
#include "json.hpp"

namespace bias_audit {

using Json = nlohmann::json;

TitleResolver::TitleResolver(Transport &transport, PropertyCache *cache,
                             ResolverOptions options)
    : transport_(transport), cache_(cache), options_(std::move(options)) {
  if (options_.batch_size == 0 || options_.batch_size > 50) options_.batch_size = 50;
}

HttpRequest TitleResolver::BuildRequest(const std::string &api_url,
                                        const std::vector<std::string> &titles) {
  std::string joined = text::Join(titles, "|");
  HttpRequest req;
  req.method = HttpRequest::Method::kGet;
  req.url = api_url +
            "?action=query&format=json&formatversion=2&prop=pageprops"
            "&ppprop=wikibase_item&redirects=1&titles=" +
            text::UrlEncode(joined);
  req.canonical = "mediawiki pageprops wikibase_item redirects=1 titles=" + joined;
  return req;
}

std::map<std::string, std::optional<Qid>> TitleResolver::ParseResponse(
    const std::string &body, const std::vector<std::string> &titles) {
  Json root;
  try {
    root = Json::parse(body);
  } catch (const Json::parse_error &) {
    throw DataError("malformed Wikipedia API response: " + body.substr(0, 200));
  }
  if (root.contains("error")) {
    throw ConfigError("Wikipedia API error: " + root["error"].dump().substr(0, 300));
  }
  if (!root.contains("query") || !root["query"].is_object()) {
    throw DataError("Wikipedia API response without 'query': " + body.substr(0, 200));
  }
  const Json &query = root["query"];
  std::map<std::string, std::string> step;
  for (const char *section : {"normalized", "redirects"}) {
    if (!query.contains(section)) continue;
    for (const auto &m : query[section]) {
      step[m.at("from").get<std::string>()] = m.at("to").get<std::string>();
    }
  }
  std::map<std::string, std::optional<Qid>> pages;
  if (query.contains("pages")) {
    const Json &p = query["pages"];
    auto take = [&](const Json &page) {
      std::string title = page.value("title", "");
      std::optional<Qid> qid;
      if (page.contains("pageprops") && page["pageprops"].contains("wikibase_item")) {
        qid = Qid::Parse(page["pageprops"]["wikibase_item"].get<std::string>());
      }
      pages[title] = qid;
    };
    // formatversion=2 returns an array, the legacy format an object.
    if (p.is_array()) {
      for (const auto &page : p) take(page);
    } else if (p.is_object()) {
      for (const auto &[id, page] : p.items()) take(page);
    }
  }
  std::map<std::string, std::optional<Qid>> out;
  for (const auto &title : titles) {
    std::string cur = title;
    for (int hops = 0; hops < 8; ++hops) {
      auto it = step.find(cur);
      if (it == step.end() || it->second == cur) break;
      cur = it->second;
    }
    auto page = pages.find(cur);
    out[title] = page == pages.end() ? std::nullopt : page->second;
  }
  return out;
}

CacheKey TitleResolver::KeyFor(const std::string &title) const {
  return CacheKey{"enwiki:" + title, "wikibase_item", options_.snapshot};
}

std::optional<std::optional<Qid>> TitleResolver::Lookup(const std::string &title) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(title);
    if (it != memo_.end()) return it->second;
  }
  if (cache_) {
    if (auto values = cache_->Get(KeyFor(title))) {
      std::optional<Qid> qid;
      if (values->is_array() && !values->empty()) {
        qid = Qid::Parse((*values)[0].get<std::string>());
      }
      std::lock_guard<std::mutex> lock(mu_);
      memo_[title] = qid;
      return qid;
    }
  }
  return std::nullopt;
}

void TitleResolver::Store(const std::map<std::string, std::optional<Qid>> &resolved) {
  std::vector<std::pair<CacheKey, Json>> entries;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto &[title, qid] : resolved) {
      memo_[title] = qid;
      Json values = Json::array();
      if (qid) values.push_back(qid->str());
      entries.emplace_back(KeyFor(title), std::move(values));
    }
  }
  if (cache_) cache_->PutAll(entries);
}

std::optional<Qid> TitleResolver::Resolve(const std::string &title) {
  return ResolveAll({title}).at(title);
}

std::map<std::string, std::optional<Qid>> TitleResolver::ResolveAll(
    const std::vector<std::string> &titles) {
  std::set<std::string> unique;
  for (const auto &t : titles) {
    if (t.empty()) throw ConfigError("cannot resolve an empty title");
    unique.insert(t);
  }
  std::map<std::string, std::optional<Qid>> out;
  std::vector<std::string> missing;
  for (const auto &t : unique) {
    if (auto hit = Lookup(t)) {
      out[t] = *hit;
    } else {
      missing.push_back(t);
    }
  }
  std::vector<std::vector<std::string>> batches;
  for (std::size_t i = 0; i < missing.size(); i += options_.batch_size) {
    auto end = std::min(missing.size(), i + options_.batch_size);
    batches.emplace_back(missing.begin() + i, missing.begin() + end);
  }
  std::vector<std::map<std::string, std::optional<Qid>>> results(batches.size());
  ParallelFor(batches.size(), options_.parallelism, [&](std::size_t b) {
    HttpRequest req = BuildRequest(options_.api_url, batches[b]);
    HttpResponse resp = transport_.Send(req);
    if (resp.status == 404) {
      for (const auto &t : batches[b]) results[b][t] = std::nullopt;
      return;
    }
    if (ResilientTransport::IsRetriable(resp)) {
      throw NetworkError("Wikipedia API unreachable (status " + std::to_string(resp.status) +
                         (resp.error.empty() ? "" : ", " + resp.error) + ")");
    }
    if (resp.status != 200) {
      throw ConfigError("Wikipedia API rejected the request with HTTP " +
                        std::to_string(resp.status));
    }
    results[b] = ParseResponse(resp.body, batches[b]);
  });
  // Stored in batch order so cache files are independent of thread timing.
  for (const auto &r : results) {
    Store(r);
    out.insert(r.begin(), r.end());
  }
  return out;
}

}  // namespace bias_audit
