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

#ifndef BIAS_AUDIT_CORE_WIKIPEDIA_H_
#define BIAS_AUDIT_CORE_WIKIPEDIA_H_

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/property_cache.h"
#include "core/text.h"
#include "core/transport.h"

namespace bias_audit {

struct ResolverOptions {
  std::string api_url = "https://en.wikipedia.org/w/api.php";
  // The Action API accepts up to 50 titles per query.
  std::size_t batch_size = 50;
  std::size_t parallelism = 1;
  std::string snapshot;
};

// Maps English Wikipedia article titles to the Wikidata item attached to the
// page, following redirects. Results (including "no item") are cached in
// memory and, when given, in a PropertyCache.
class TitleResolver {
 public:
  TitleResolver(Transport &transport, PropertyCache *cache, ResolverOptions options);

  // Throws NetworkError when the API stays unreachable after retries and
  // ConfigError on client errors other than 404.
  std::optional<Qid> Resolve(const std::string &title);
  std::map<std::string, std::optional<Qid>> ResolveAll(const std::vector<std::string> &titles);

  static HttpRequest BuildRequest(const std::string &api_url,
                                  const std::vector<std::string> &titles);
  // Throws DataError when the body is not a pageprops query result.
  static std::map<std::string, std::optional<Qid>> ParseResponse(
      const std::string &body, const std::vector<std::string> &titles);

 private:
  std::optional<std::optional<Qid>> Lookup(const std::string &title);
  void Store(const std::map<std::string, std::optional<Qid>> &resolved);
  CacheKey KeyFor(const std::string &title) const;

  Transport &transport_;
  PropertyCache *cache_;
  ResolverOptions options_;
  std::mutex mu_;
  std::map<std::string, std::optional<Qid>> memo_;
};

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_WIKIPEDIA_H_
