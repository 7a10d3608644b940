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

#ifndef BIAS_AUDIT_CORE_ERRORS_H_
#define BIAS_AUDIT_CORE_ERRORS_H_

#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace bias_audit {

// Error classes map one-to-one onto CLI exit codes.
enum class ErrorKind {
  kConfig,    // bad flags, manifest, missing files, 4xx from an API
  kNetwork,   // transport failure after retries; retriable
  kData,      // malformed input or response, replay miss
  kInternal,
};

const char *ErrorKindName(ErrorKind kind);

class AuditError : public std::runtime_error {
 public:
  AuditError(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  bool retriable() const { return kind_ == ErrorKind::kNetwork; }

 private:
  ErrorKind kind_;
};

class ConfigError : public AuditError {
 public:
  explicit ConfigError(const std::string &message)
      : AuditError(ErrorKind::kConfig, message) {}
};

class NetworkError : public AuditError {
 public:
  explicit NetworkError(const std::string &message)
      : AuditError(ErrorKind::kNetwork, message) {}
};

class DataError : public AuditError {
 public:
  explicit DataError(const std::string &message)
      : AuditError(ErrorKind::kData, message) {}
};

// Named warning counters. Stages count recoverable problems here instead of
// failing; reports carry the final tallies.
class Warnings {
 public:
  Warnings() = default;
  Warnings(const Warnings &other);
  Warnings &operator=(const Warnings &other);

  void Add(const std::string &name, std::size_t n = 1);
  std::size_t Count(const std::string &name) const;
  std::size_t Total() const;
  std::map<std::string, std::size_t> Snapshot() const;
  void Merge(const Warnings &other);

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::size_t> counts_;
};

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_ERRORS_H_
