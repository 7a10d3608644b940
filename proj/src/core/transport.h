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

#ifndef BIAS_AUDIT_CORE_TRANSPORT_H_
#define BIAS_AUDIT_CORE_TRANSPORT_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

namespace bias_audit {

struct HttpRequest {
  enum class Method { kGet, kPost };

  Method method = Method::kGet;
  std::string url;
  // Form-encoded body for POST.
  std::string body;
  std::string accept = "application/json";
  // Stable identity of the request, independent of endpoint and encoding.
  // Record/replay fixtures are keyed by this text.
  std::string canonical;
};

struct HttpResponse {
  // 0 when no HTTP exchange happened (DNS failure, timeout, ...).
  int status = 0;
  std::string body;
  std::string error;
  // Seconds from a Retry-After header; negative when absent.
  double retry_after = -1;
};

class Transport {
 public:
  virtual ~Transport() = default;

  // Must be safe to call from several threads at once.
  virtual HttpResponse Send(const HttpRequest &request) = 0;

  // Requests that left the process.
  virtual std::size_t network_calls() const = 0;
};

// Collapses whitespace runs so formatting changes do not change fixture keys.
std::string CanonicalizeQuery(std::string_view query);
std::string Sha256Hex(std::string_view data);

// libcurl-backed HTTPS transport.
class CurlTransport : public Transport {
 public:
  CurlTransport(std::string user_agent, long timeout_seconds = 60);
  ~CurlTransport() override;

  HttpResponse Send(const HttpRequest &request) override;
  std::size_t network_calls() const override { return calls_.load(); }

 private:
  std::string user_agent_;
  long timeout_seconds_;
  std::atomic<std::size_t> calls_{0};
};

struct RetryPolicy {
  int max_retries = 4;
  std::chrono::milliseconds base_delay{500};
  std::chrono::milliseconds max_delay{30000};
};

// Rate limiting and retries in front of another transport. 429, 5xx and
// transport failures are retried with exponential backoff; the last response
// is returned once retries are exhausted.
class ResilientTransport : public Transport {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  ResilientTransport(Transport &inner, double requests_per_second,
                     RetryPolicy policy, Sleeper sleeper = nullptr);

  HttpResponse Send(const HttpRequest &request) override;
  std::size_t network_calls() const override { return inner_.network_calls(); }

  std::size_t retries() const { return retries_.load(); }

  static bool IsRetriable(const HttpResponse &response);

 private:
  void WaitForSlot();

  Transport &inner_;
  std::chrono::nanoseconds interval_;
  RetryPolicy policy_;
  Sleeper sleeper_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_slot_{};
  std::atomic<std::size_t> retries_{0};
};

// One recorded exchange. Stored as a JSON line
// {query_hash, query, response_body, recorded_at}.
struct FixtureEntry {
  std::string query_hash;
  std::string query;
  std::string response_body;
  std::string recorded_at;
};

// Passes requests through and appends every successful exchange to a fixture
// file.
class RecordingTransport : public Transport {
 public:
  RecordingTransport(Transport &inner, std::filesystem::path fixture_path,
                     std::string recorded_at);

  HttpResponse Send(const HttpRequest &request) override;
  std::size_t network_calls() const override { return inner_.network_calls(); }

  std::size_t recorded() const;

 private:
  Transport &inner_;
  std::filesystem::path path_;
  std::string recorded_at_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, bool> written_;
};

// Serves recorded responses and never touches the network. A request without
// a fixture raises a DataError naming the missing key.
class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(const std::filesystem::path &fixture_path);
  ReplayTransport() = default;

  void Add(FixtureEntry entry);

  HttpResponse Send(const HttpRequest &request) override;
  std::size_t network_calls() const override { return 0; }

  std::size_t served() const { return served_.load(); }
  std::size_t size() const { return entries_.size(); }
  // Earliest recorded_at among the fixtures; empty when there are none.
  std::string recorded_at() const;

 private:
  std::unordered_map<std::string, FixtureEntry> entries_;
  std::atomic<std::size_t> served_{0};
};

std::vector<FixtureEntry> ReadFixtures(const std::filesystem::path &path);

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_TRANSPORT_H_
