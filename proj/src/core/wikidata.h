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

#ifndef BIAS_AUDIT_CORE_WIKIDATA_H_
#define BIAS_AUDIT_CORE_WIKIDATA_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/property_cache.h"
#include "core/text.h"
#include "core/transport.h"
#include "json.hpp"

namespace bias_audit {

enum class Property : std::uint8_t {
  kInstanceOf,     // P31
  kGender,         // P21
  kOccupation,     // P106
  kEthnicGroup,    // P172
  kReligion,       // P140
  kCoordinates,    // P625
  kCountry,        // P17
  kCitizenship,    // P27
  kAdminLocation,  // P131
};

inline constexpr Property kAllProperties[] = {
    Property::kInstanceOf, Property::kGender,      Property::kOccupation,
    Property::kEthnicGroup, Property::kReligion,   Property::kCoordinates,
    Property::kCountry,    Property::kCitizenship, Property::kAdminLocation,
};

const char *PropertyId(Property property);
std::optional<Property> ParsePropertyId(std::string_view id);

class PropertySet {
 public:
  PropertySet() = default;
  PropertySet(std::initializer_list<Property> props) {
    for (auto p : props) Set(p);
  }
  static PropertySet All();

  void Set(Property p) { bits_ |= Bit(p); }
  bool Has(Property p) const { return (bits_ & Bit(p)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::vector<Property> List() const;

 private:
  static std::uint32_t Bit(Property p) { return 1u << static_cast<unsigned>(p); }
  std::uint32_t bits_ = 0;
};

struct LabeledValue {
  Qid qid;
  std::string label;

  bool operator==(const LabeledValue &) const = default;
};

struct LocationName {
  Qid qid;
  std::string label;
  Property source = Property::kCountry;

  bool operator==(const LocationName &) const = default;
};

struct Coordinates {
  double latitude = 0;
  double longitude = 0;

  bool valid() const {
    return latitude >= -90 && latitude <= 90 && longitude >= -180 && longitude <= 180;
  }
  bool operator==(const Coordinates &) const = default;
};

// Properties retrieved for one item. Lists are sorted by numeric QID.
struct EntityProfile {
  Qid qid;
  std::vector<LabeledValue> instance_of;
  std::vector<LabeledValue> gender;
  std::vector<LabeledValue> occupations;
  std::vector<LabeledValue> ethnic_group;
  std::vector<LabeledValue> religion;
  std::optional<Coordinates> coordinates;
  std::vector<LocationName> location_names;
  std::string snapshot_id;
  // False when no statement at all came back for the item.
  bool found = false;

  bool operator==(const EntityProfile &) const = default;
};

nlohmann::json ProfileToJson(const EntityProfile &profile);
EntityProfile ProfileFromJson(const nlohmann::json &json);
std::string ProfilesToJsonl(const std::vector<EntityProfile> &profiles);
std::vector<EntityProfile> ReadProfilesJsonl(const std::filesystem::path &path);

enum class EntityClass { kHuman, kFictionalHuman, kPlace, kEvent, kOrganization, kOther };

const char *EntityClassName(EntityClass c);

inline constexpr Qid kHumanClass{5};
inline constexpr Qid kFictionalHumanClass{15632617};

// instance-of item -> class. The bundled table covers common place, event
// and organization types; a TSV (qid, class[, label]) can replace it.
class ClassMap {
 public:
  static const ClassMap &Default();
  static ClassMap Parse(std::string_view tsv);
  static ClassMap Load(const std::filesystem::path &path);

  std::optional<EntityClass> Lookup(Qid qid) const;
  std::size_t size() const { return classes_.size(); }

 private:
  std::map<Qid, EntityClass> classes_;
};

// Precedence: human > fictional human > place > event > organization > other.
EntityClass ClassifyEntity(const EntityProfile &profile,
                           const ClassMap &classes = ClassMap::Default());

struct WikidataOptions {
  std::string endpoint = "https://query.wikidata.org/sparql";
  std::size_t batch_size = 50;
  std::size_t parallelism = 1;
  std::string snapshot;
};

// Batched SPARQL retrieval of truthy statements, one query per property and
// batch of items, with English labels. Every (item, property) answer is
// cached, including empty ones, so a key is fetched at most once.
class WikidataClient {
 public:
  WikidataClient(Transport &transport, PropertyCache *cache, WikidataOptions options);

  // One profile per input QID, in input order. Throws ConfigError for empty
  // input or an empty property set.
  std::vector<EntityProfile> FetchProfiles(const std::vector<Qid> &qids, const PropertySet &props);

  std::size_t remote_requests() const { return remote_requests_.load(); }
  const WikidataOptions &options() const { return options_; }

  static std::string BuildQuery(Property property, const std::vector<Qid> &batch);
  static HttpRequest BuildRequest(const std::string &endpoint, const std::string &query);
  // Values per item in the batch (items without statements map to an empty
  // array). Throws DataError on a malformed body.
  static std::map<Qid, nlohmann::json> ParseResponse(Property property, const std::string &body,
                                                     const std::vector<Qid> &batch);

 private:
  CacheKey KeyFor(Qid qid, Property property) const;
  std::optional<nlohmann::json> CachedValues(Qid qid, Property property) const;

  Transport &transport_;
  PropertyCache *cache_;
  PropertyCache local_cache_;
  WikidataOptions options_;
  std::atomic<std::size_t> remote_requests_{0};
};

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_WIKIDATA_H_
