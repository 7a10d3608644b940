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

// C interface to the bias-audit library. All strings are UTF-8 and
// NUL-terminated. Handles are opaque; a context is not thread-safe, but
// distinct contexts may be used concurrently.

#ifndef BIAS_AUDIT_BIAS_AUDIT_H_
#define BIAS_AUDIT_BIAS_AUDIT_H_

#include <stddef.h>

#if defined(BA_BUILDING_LIBRARY)
#define BA_API __attribute__((visibility("default")))
#else
#define BA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ba_status {
  BA_OK = 0,
  BA_ERR_INVALID_ARGUMENT = 1,  // null handle, unknown option or bad value
  BA_ERR_CONFIG = 2,            // manifest, flags, files, API rejections
  BA_ERR_NETWORK = 3,           // transport failure after retries
  BA_ERR_DATA = 4,              // malformed input or response, replay miss
  BA_ERR_INTERNAL = 5,
} ba_status;

typedef struct ba_context ba_context;
typedef struct ba_report ba_report;

BA_API const char *ba_version(void);
BA_API const char *ba_status_name(ba_status status);

BA_API ba_context *ba_context_create(void);
BA_API void ba_context_destroy(ba_context *ctx);

// Sets one option by name, e.g. ("manifest", "boolq.json"), ("mode",
// "replay"), ("charts", "gender_bars,world_map"). "exclude_category"
// appends; every other key replaces. See README for the full list.
BA_API ba_status ba_context_set_option(ba_context *ctx, const char *key, const char *value);

// Message of the last failed call on ctx; "" when the last call succeeded.
BA_API const char *ba_context_last_error(const ba_context *ctx);

// Network exchanges performed by the last ba_link/ba_fetch/ba_audit call.
BA_API size_t ba_context_network_calls(const ba_context *ctx);

// Stage entry points. Each reads the previous stage's JSONL file and writes
// its own, so long runs can resume between stages.
BA_API ba_status ba_ingest(ba_context *ctx, const char *records_out);
BA_API ba_status ba_link(ba_context *ctx, const char *records_in, const char *links_out);
BA_API ba_status ba_fetch(ba_context *ctx, const char *links_in, const char *profiles_out);
BA_API ba_status ba_analyze(ba_context *ctx, const char *records_in, const char *links_in,
                            const char *profiles_in, ba_report **report_out);

// Full pipeline. Writes report.json, summary.csv and the configured charts
// into the "out" directory only after every stage succeeded. report_out may
// be NULL.
BA_API ba_status ba_audit(ba_context *ctx, ba_report **report_out);

BA_API ba_status ba_report_load(ba_context *ctx, const char *path, ba_report **report_out);
BA_API ba_status ba_report_write(ba_context *ctx, const ba_report *report, const char *out_dir);
// *json_out is released with ba_string_free.
BA_API ba_status ba_report_to_json(ba_context *ctx, const ba_report *report, char **json_out);
BA_API void ba_report_destroy(ba_report *report);

// chart: gender_bars, occupation_grid, religion_bars, world_map or
// checklist_table. The output extension (.svg, .json, .csv) picks the format.
BA_API ba_status ba_render(ba_context *ctx, const ba_report *report, const char *chart,
                           const char *out_path);

// Cohen's kappa per annotation unit from a CSV file; *json_out is released
// with ba_string_free.
BA_API ba_status ba_kappa(ba_context *ctx, const char *csv_path, char **json_out);

BA_API void ba_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // BIAS_AUDIT_BIAS_AUDIT_H_
