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

#ifndef BIAS_AUDIT_CORE_LINKING_H_
#define BIAS_AUDIT_CORE_LINKING_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/dataset.h"
#include "core/errors.h"
#include "core/gazetteer.h"
#include "core/text.h"

namespace bias_audit {

enum class LinkField { kQuestion, kAnswer, kContext, kIdentifier };
enum class Provenance { kScenario1, kSidecar, kGazetteer };

const char *LinkFieldName(LinkField field);
std::optional<LinkField> ParseLinkField(std::string_view name);
const char *ProvenanceName(Provenance provenance);
std::optional<Provenance> ParseProvenance(std::string_view name);

// Half-open code point offsets into the source field text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Span &) const = default;
};

struct EntityLink {
  std::string record_id;
  std::string surface;
  std::optional<Span> span;
  LinkField field = LinkField::kQuestion;
  Qid qid;
  double confidence = 1.0;
  Provenance provenance = Provenance::kSidecar;

  bool operator==(const EntityLink &) const = default;
};

// Text a link span refers to. Answers are joined with newlines.
std::string FieldText(const DatasetRecord &record, LinkField field);

// Empty when the link satisfies its invariants; otherwise the first
// violation. Span/surface agreement is only checked when a record is given.
std::string ValidateLink(const EntityLink &link, const DatasetRecord *record = nullptr);

// Sorts by field, then span start, then QID.
void SortLinks(std::vector<EntityLink> *links);

// Sidecar line format: {record_id, surface, start, end, field, qid,
// confidence}. "provenance" is written for links produced by this tool and
// defaults to "sidecar" when absent.
nlohmann::json LinkToJson(const EntityLink &link);
// Throws DataError describing the first problem.
EntityLink LinkFromJson(const nlohmann::json &json);
std::string LinksToJsonl(const std::vector<EntityLink> &links);
std::vector<EntityLink> ReadLinksJsonl(const std::filesystem::path &path);

// Entity links produced outside the core, keyed by record id.
class SidecarStore {
 public:
  struct LoadOptions {
    bool strict = false;
    // Parsing threads; the result does not depend on this.
    std::size_t threads = 1;
  };

  static SidecarStore Load(const std::filesystem::path &path, const LoadOptions &options,
                           Warnings *warnings = nullptr);
  static SidecarStore FromLinks(std::vector<EntityLink> links);

  // Empty when the record has no entry.
  const std::vector<EntityLink> &Lookup(const std::string &record_id) const;
  bool Contains(const std::string &record_id) const { return links_.count(record_id) > 0; }
  std::size_t size() const;
  std::size_t invalid_lines() const { return invalid_lines_; }
  const std::map<std::string, std::vector<EntityLink>> &by_record() const { return links_; }

 private:
  std::map<std::string, std::vector<EntityLink>> links_;
  std::size_t invalid_lines_ = 0;
};

struct LinkOptions {
  bool include_question = true;
  bool include_answers = true;
  bool include_context = false;
  double min_confidence = 0.0;
  GazetteerOptions gazetteer;
};

class Linker {
 public:
  virtual ~Linker() = default;
  virtual std::vector<EntityLink> Link(const DatasetRecord &record, const LinkOptions &options,
                                       Warnings *warnings) const = 0;
};

// Serves links stored for each record; records without an entry produce no
// links and count "sidecar_missing_record".
class SidecarLinker : public Linker {
 public:
  explicit SidecarLinker(const SidecarStore &store) : store_(store) {}
  std::vector<EntityLink> Link(const DatasetRecord &record, const LinkOptions &options,
                               Warnings *warnings) const override;

 private:
  const SidecarStore &store_;
};

class GazetteerLinker : public Linker {
 public:
  explicit GazetteerLinker(const GazetteerIndex &index) : index_(index) {}
  std::vector<EntityLink> Link(const DatasetRecord &record, const LinkOptions &options,
                               Warnings *warnings) const override;

 private:
  const GazetteerIndex &index_;
};

// Links one record and orders the result. Links that violate their
// invariants are dropped and counted under "invalid_link".
std::vector<EntityLink> LinkRecord(const DatasetRecord &record, const Linker &linker,
                                   const LinkOptions &options, Warnings *warnings = nullptr);

// Identifier links for a record from already resolved titles. Titles without
// an item count "unresolved_title".
std::vector<EntityLink> IdentifierLinks(const DatasetRecord &record,
                                        const std::map<std::string, std::optional<Qid>> &resolved,
                                        Warnings *warnings = nullptr);

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_LINKING_H_
