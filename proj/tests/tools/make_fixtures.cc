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

// Rebuilds a replay fixture by running the audit in record mode against the
// synthetic world served by FakeWikimedia.
//
//   make_fixtures WORLD.json MANIFEST.json FIXTURE_DIR SNAPSHOT

#include <cstdio>
#include <filesystem>

#include "core/pipeline.h"
#include "support/fake_wikimedia.h"

int main(int argc, char **argv) {
  if (argc != 5) {
    std::fprintf(stderr, "usage: %s WORLD.json MANIFEST.json FIXTURE_DIR SNAPSHOT\n", argv[0]);
    return 2;
  }
  using namespace bias_audit;  // NOLINT(build/namespaces)
  try {
    auto fake = testing::FakeWikimedia::FromFile(argv[1]);
    AuditConfig config;
    config.manifest = argv[2];
    config.mode = FetchMode::kRecord;
    config.fixtures_dir = argv[3];
    config.snapshot = argv[4];
    config.rate_limit = 1000;
    config.charts.clear();
    std::filesystem::remove(config.fixtures_dir / kFixtureFileName);
    AuditRun run = RunAudit(config, &fake);
    std::printf("recorded %zu requests into %s\n", fake.network_calls(),
                (config.fixtures_dir / kFixtureFileName).c_str());
    std::printf("%s", SummaryCsv(run.report).c_str());
  } catch (const std::exception &e) {
    std::fprintf(stderr, "make_fixtures: %s\n", e.what());
    return 1;
  }
  return 0;
}
