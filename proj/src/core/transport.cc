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

#include "core/transport.h"

#include <curl/curl.h>
#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <thread>

#include "core/errors.h"
#include "core/text.h"
#include "json.hpp"

namespace bias_audit {

using Json = nlohmann::json;

std::string CanonicalizeQuery(std::string_view query) {
  std::string out;
  bool space = false;
  for (char c : query) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw AuditError(ErrorKind::kInternal, "SHA-256 digest failed");
  }
  static const char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

namespace {

std::once_flag curl_init_once;

std::size_t WriteBody(char *ptr, std::size_t size, std::size_t nmemb, void *userdata) {
  static_cast<std::string *>(userdata)->append(ptr, size * nmemb);
  return size * nmemb;
}

std::size_t ReadHeader(char *ptr, std::size_t size, std::size_t nmemb, void *userdata) {
  std::string_view line(ptr, size * nmemb);
  auto *response = static_cast<HttpResponse *>(userdata);
  std::string lower = text::AsciiLower(line.substr(0, std::min<std::size_t>(line.size(), 12)));
  if (text::StartsWith(lower, "retry-after:")) {
    try {
      response->retry_after = std::stod(std::string(line.substr(12)));
    } catch (...) {
      // HTTP-date form; fall back to our own backoff.
    }
  }
  return size * nmemb;
}

}  // namespace

CurlTransport::CurlTransport(std::string user_agent, long timeout_seconds)
    : user_agent_(std::move(user_agent)), timeout_seconds_(timeout_seconds) {
  std::call_once(curl_init_once, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
}

CurlTransport::~CurlTransport() = default;

HttpResponse CurlTransport::Send(const HttpRequest &request) {
  HttpResponse response;
  std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(),
                                                           curl_easy_cleanup);
  if (!curl) {
    response.error = "curl_easy_init failed";
    return response;
  }
  CURL *h = curl.get();
  curl_easy_setopt(h, CURLOPT_URL, request.url.c_str());
  curl_easy_setopt(h, CURLOPT_USERAGENT, user_agent_.c_str());
  curl_easy_setopt(h, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(h, CURLOPT_TIMEOUT, timeout_seconds_);
  curl_easy_setopt(h, CURLOPT_NOSIGNAL, 1L);
  curl_easy_setopt(h, CURLOPT_ACCEPT_ENCODING, "");
  curl_easy_setopt(h, CURLOPT_WRITEFUNCTION, WriteBody);
  curl_easy_setopt(h, CURLOPT_WRITEDATA, &response.body);
  curl_easy_setopt(h, CURLOPT_HEADERFUNCTION, ReadHeader);
  curl_easy_setopt(h, CURLOPT_HEADERDATA, &response);
  std::unique_ptr<curl_slist, decltype(&curl_slist_free_all)> headers(
      curl_slist_append(nullptr, ("Accept: " + request.accept).c_str()),
      curl_slist_free_all);
  curl_easy_setopt(h, CURLOPT_HTTPHEADER, headers.get());
  if (request.method == HttpRequest::Method::kPost) {
    curl_easy_setopt(h, CURLOPT_POST, 1L);
    curl_easy_setopt(h, CURLOPT_POSTFIELDS, request.body.c_str());
    curl_easy_setopt(h, CURLOPT_POSTFIELDSIZE, static_cast<long>(request.body.size()));
  }
  calls_.fetch_add(1);
  CURLcode rc = curl_easy_perform(h);
  if (rc != CURLE_OK) {
    response.status = 0;
    response.error = curl_easy_strerror(rc);
    response.body.clear();
    return response;
  }
  long code = 0;
  curl_easy_getinfo(h, CURLINFO_RESPONSE_CODE, &code);
  response.status = static_cast<int>(code);
  return response;
}

ResilientTransport::ResilientTransport(Transport &inner, double requests_per_second,
                                       RetryPolicy policy, Sleeper sleeper)
    : inner_(inner),
      interval_(requests_per_second > 0
                    ? std::chrono::nanoseconds(static_cast<long long>(1e9 / requests_per_second))
                    : std::chrono::nanoseconds(0)),
      policy_(policy),
      sleeper_(sleeper ? std::move(sleeper)
                       : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {}

bool ResilientTransport::IsRetriable(const HttpResponse &response) {
  return response.status == 0 || response.status == 429 || response.status >= 500;
}

void ResilientTransport::WaitForSlot() {
  if (interval_.count() == 0) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_slot_);
    next_slot_ = slot + interval_;
  }
  auto wait = slot - std::chrono::steady_clock::now();
  if (wait.count() > 0) {
    std::this_thread::sleep_for(wait);
  }
}

HttpResponse ResilientTransport::Send(const HttpRequest &request) {
  HttpResponse response;
  for (int attempt = 0;; ++attempt) {
    WaitForSlot();
    response = inner_.Send(request);
    if (!IsRetriable(response) || attempt >= policy_.max_retries) return response;
    retries_.fetch_add(1);
    std::chrono::milliseconds delay = policy_.base_delay * (1LL << std::min(attempt, 20));
    if (response.retry_after >= 0) {
      delay = std::max(delay, std::chrono::milliseconds(
                                  static_cast<long long>(response.retry_after * 1000)));
    }
    sleeper_(std::min(delay, policy_.max_delay));
  }
}

RecordingTransport::RecordingTransport(Transport &inner, std::filesystem::path fixture_path,
                                       std::string recorded_at)
    : inner_(inner), path_(std::move(fixture_path)), recorded_at_(std::move(recorded_at)) {
  if (std::filesystem::exists(path_)) {
    for (const auto &e : ReadFixtures(path_)) written_[e.query_hash] = true;
  }
}

HttpResponse RecordingTransport::Send(const HttpRequest &request) {
  HttpResponse response = inner_.Send(request);
  if (response.status != 200) return response;
  std::string hash = Sha256Hex(request.canonical);
  std::lock_guard<std::mutex> lock(mu_);
  if (written_.count(hash)) return response;
  Json line;
  line["query_hash"] = hash;
  line["query"] = request.canonical;
  line["response_body"] = response.body;
  line["recorded_at"] = recorded_at_;
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw ConfigError("cannot append to fixture file: " + path_.string());
  out << line.dump() << '\n';
  written_[hash] = true;
  return response;
}

std::size_t RecordingTransport::recorded() const {
  std::lock_guard<std::mutex> lock(mu_);
  return written_.size();
}

std::vector<FixtureEntry> ReadFixtures(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read fixture file: " + path.string());
  std::vector<FixtureEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::Trim(line).empty()) continue;
    try {
      Json j = Json::parse(line);
      FixtureEntry e;
      e.query = j.at("query").get<std::string>();
      e.query_hash = j.value("query_hash", Sha256Hex(e.query));
      e.response_body = j.at("response_body").get<std::string>();
      e.recorded_at = j.value("recorded_at", "");
      entries.push_back(std::move(e));
    } catch (const Json::exception &e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": invalid fixture line: " + e.what());
    }
  }
  return entries;
}

ReplayTransport::ReplayTransport(const std::filesystem::path &fixture_path) {
  for (auto &e : ReadFixtures(fixture_path)) Add(std::move(e));
}

void ReplayTransport::Add(FixtureEntry entry) {
  if (entry.query_hash.empty()) entry.query_hash = Sha256Hex(entry.query);
  std::string key = entry.query_hash;
  entries_.insert_or_assign(std::move(key), std::move(entry));
}

HttpResponse ReplayTransport::Send(const HttpRequest &request) {
  std::string hash = Sha256Hex(request.canonical);
  auto it = entries_.find(hash);
  if (it == entries_.end()) {
    std::string excerpt = request.canonical.substr(0, 300);
    throw DataError("replay miss: no fixture for query_hash=" + hash + " query=" + excerpt);
  }
  served_.fetch_add(1);
  HttpResponse response;
  response.status = 200;
  response.body = it->second.response_body;
  return response;
}

std::string ReplayTransport::recorded_at() const {
  std::string earliest;
  for (const auto &[hash, e] : entries_) {
    if (e.recorded_at.empty()) continue;
    if (earliest.empty() || e.recorded_at < earliest) earliest = e.recorded_at;
  }
  return earliest;
}

}  // namespace bias_audit
