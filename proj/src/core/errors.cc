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

#include "core/errors.h"

namespace bias_audit {

const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kNetwork: return "network";
    case ErrorKind::kData: return "data";
    case ErrorKind::kInternal: return "internal";
  }
  return "internal";
}

Warnings::Warnings(const Warnings &other) : counts_(other.Snapshot()) {}

Warnings &Warnings::operator=(const Warnings &other) {
  if (this != &other) {
    auto copy = other.Snapshot();
    std::lock_guard<std::mutex> lock(mu_);
    counts_ = std::move(copy);
  }
  return *this;
}

void Warnings::Add(const std::string &name, std::size_t n) {
  std::lock_guard<std::mutex> lock(mu_);
  counts_[name] += n;
}

std::size_t Warnings::Count(const std::string &name) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = counts_.find(name);
  return it == counts_.end() ? 0 : it->second;
}

std::size_t Warnings::Total() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::size_t total = 0;
  for (const auto &[name, n] : counts_) total += n;
  return total;
}

std::map<std::string, std::size_t> Warnings::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return counts_;
}

void Warnings::Merge(const Warnings &other) {
  for (const auto &[name, n] : other.Snapshot()) Add(name, n);
}

}  // namespace bias_audit
