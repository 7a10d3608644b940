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

#ifndef BIAS_AUDIT_CORE_METRICS_H_
#define BIAS_AUDIT_CORE_METRICS_H_

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core/dataset.h"
#include "core/linking.h"
#include "core/wikidata.h"

namespace bias_audit {

enum class CountingBasis { kPerMention, kPerUniqueEntity };

const char *BasisName(CountingBasis basis);
std::optional<CountingBasis> ParseBasis(std::string_view name);

enum class Dimension { kGender, kOccupation, kReligion, kLocationName, kInstanceOf };

const char *DimensionName(Dimension d);

enum class ThresholdRule {
  kGreaterThan,  // included iff total > threshold
  kAtLeast,      // included iff total >= threshold
};

// Inclusion thresholds. Gender and religion need more than 30 entries;
// occupation charts need 300 or more occupations; coordinate maps and other
// per-property results need 30 or more.
inline constexpr long kGenderThreshold = 30;
inline constexpr long kReligionThreshold = 30;
inline constexpr long kOccupationChartThreshold = 300;
inline constexpr long kCoordinateMapThreshold = 30;
inline constexpr long kResultThreshold = 30;

bool PassesThreshold(long total, long threshold, ThresholdRule rule);

using RankedCounts = std::vector<std::pair<std::string, long>>;

// Sorts by count descending, ties by label ascending, and truncates to k.
RankedCounts TopK(const std::map<std::string, long> &counts, std::size_t k);

struct Distribution {
  Dimension dimension = Dimension::kGender;
  std::map<std::string, long> counts;
  long total = 0;
  bool included = false;
  long threshold = 0;
  ThresholdRule rule = ThresholdRule::kGreaterThan;
  CountingBasis basis = CountingBasis::kPerMention;
  // Units that contributed more than one value.
  long multi_valued_units = 0;

  // Recomputes total and the inclusion verdict from counts.
  void Finalize();
  std::map<std::string, double> Shares() const;
  double Share(const std::string &label) const;
  RankedCounts Top(std::size_t k) const { return TopK(counts, k); }

  bool operator==(const Distribution &) const = default;
};

// Profiles are "units": for per-mention counting a profile appears once per
// mention, for per-unique-entity counting once per item.

// Gender labels of human and fictional-human units; each value counts once.
Distribution GenderDistribution(const std::vector<EntityProfile> &units, CountingBasis basis,
                                const ClassMap &classes = ClassMap::Default());

struct OccupationsByGender {
  std::map<std::string, RankedCounts> top;
  // Occupation values over units with a gender; gates the chart.
  Distribution occupations;

  bool operator==(const OccupationsByGender &) const = default;
};

OccupationsByGender OccupationByGender(const std::vector<EntityProfile> &units,
                                       CountingBasis basis, std::size_t k = 10);

// Religion labels shown under a different name in reports.
const std::map<std::string, std::string> &ReligionDisplayLabels();

struct ReligionResult {
  Distribution distribution;
  // Display label -> underlying items.
  std::map<std::string, std::vector<std::string>> qids;

  bool operator==(const ReligionResult &) const = default;
};

ReligionResult ReligionDistribution(const std::vector<EntityProfile> &units, CountingBasis basis);

struct GeoResult {
  std::vector<Coordinates> coordinates;  // sorted by (lat, lon)
  bool map_included = false;
  std::map<std::string, long> continents;
  Distribution location_names;

  bool operator==(const GeoResult &) const = default;
};

std::set<Property> DefaultLocationSources();

GeoResult GeoDistribution(const std::vector<EntityProfile> &units, CountingBasis basis,
                          const std::set<Property> &sources = DefaultLocationSources());

Distribution InstanceClassDistribution(const std::vector<EntityProfile> &units,
                                       CountingBasis basis,
                                       const ClassMap &classes = ClassMap::Default());

std::vector<std::string> DefaultMaleTerms();
std::vector<std::string> DefaultFemaleTerms();

struct KeywordMatch {
  long male_count = 0;
  long female_count = 0;
  std::vector<std::string> male_record_ids;
  std::vector<std::string> female_record_ids;

  bool operator==(const KeywordMatch &) const = default;
};

// True when `term` occurs in `text` case-insensitively with a non-letter (or
// the text edge) on both sides.
bool ContainsWholeWord(std::string_view text, std::string_view term);

// Counts questions containing at least one term of each list. A record may
// count for both. Throws ConfigError when a term list is empty.
KeywordMatch KeywordGenderMatch(const std::vector<DatasetRecord> &records,
                                const std::vector<std::string> &male_terms,
                                const std::vector<std::string> &female_terms);

struct CountRow {
  long entities = 0;
  long instance_of = 0;
  long gender = 0;
  long occupation = 0;
  long ethnicity = 0;
  long religion = 0;
  long coordinates = 0;
  long location_names = 0;

  bool operator==(const CountRow &) const = default;
};

struct EntityCountSummary {
  CountRow per_mention;
  CountRow per_unique_entity;

  bool operator==(const EntityCountSummary &) const = default;
};

// Entities are links (per mention) or distinct linked items (per unique
// entity); property columns count retrieved values, so a column can exceed
// the entity count for multi-valued properties.
EntityCountSummary EntityCounts(const std::vector<EntityLink> &links,
                                const std::map<Qid, EntityProfile> &profiles,
                                const std::set<Property> &location_sources = DefaultLocationSources());

// Expands links into units for a counting basis. Links without a profile are
// skipped.
std::vector<EntityProfile> UnitsFor(const std::vector<EntityLink> &links,
                                    const std::map<Qid, EntityProfile> &profiles,
                                    CountingBasis basis);

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_METRICS_H_
