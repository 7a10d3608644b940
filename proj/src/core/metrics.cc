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

#include "core/metrics.h"

#include <algorithm>

#include "core/geo.h"

namespace bias_audit {

const char *BasisName(CountingBasis basis) {
  return basis == CountingBasis::kPerMention ? "per_mention" : "per_unique_entity";
}

std::optional<CountingBasis> ParseBasis(std::string_view name) {
  if (name == "mention" || name == "per_mention") return CountingBasis::kPerMention;
  if (name == "unique" || name == "per_unique_entity") return CountingBasis::kPerUniqueEntity;
  return std::nullopt;
}

const char *DimensionName(Dimension d) {
  switch (d) {
    case Dimension::kGender: return "gender";
    case Dimension::kOccupation: return "occupation";
    case Dimension::kReligion: return "religion";
    case Dimension::kLocationName: return "location_name";
    case Dimension::kInstanceOf: return "instance_of";
  }
  return "gender";
}

bool PassesThreshold(long total, long threshold, ThresholdRule rule) {
  return rule == ThresholdRule::kGreaterThan ? total > threshold : total >= threshold;
}

RankedCounts TopK(const std::map<std::string, long> &counts, std::size_t k) {
  RankedCounts ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

void Distribution::Finalize() {
  total = 0;
  for (const auto &[label, n] : counts) total += n;
  included = PassesThreshold(total, threshold, rule);
}

std::map<std::string, double> Distribution::Shares() const {
  std::map<std::string, double> shares;
  if (total <= 0) return shares;
  for (const auto &[label, n] : counts) {
    shares[label] = static_cast<double>(n) / static_cast<double>(total);
  }
  return shares;
}

double Distribution::Share(const std::string &label) const {
  if (total <= 0) return 0.0;
  auto it = counts.find(label);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

namespace {

Distribution MakeDistribution(Dimension d, long threshold, ThresholdRule rule,
                              CountingBasis basis) {
  Distribution dist;
  dist.dimension = d;
  dist.threshold = threshold;
  dist.rule = rule;
  dist.basis = basis;
  return dist;
}

bool IsPerson(EntityClass c) {
  return c == EntityClass::kHuman || c == EntityClass::kFictionalHuman;
}

std::vector<LabeledValue> SelectedLocations(const EntityProfile &p,
                                            const std::set<Property> &sources) {
  std::vector<LabeledValue> out;
  for (const auto &n : p.location_names) {
    if (!sources.count(n.source)) continue;
    bool dup = std::any_of(out.begin(), out.end(), [&](const auto &v) { return v.qid == n.qid; });
    if (!dup) out.push_back({n.qid, n.label});
  }
  return out;
}

}  // namespace

Distribution GenderDistribution(const std::vector<EntityProfile> &units, CountingBasis basis,
                                const ClassMap &classes) {
  Distribution dist =
      MakeDistribution(Dimension::kGender, kGenderThreshold, ThresholdRule::kGreaterThan, basis);
  for (const auto &p : units) {
    if (!IsPerson(ClassifyEntity(p, classes))) continue;
    if (p.gender.size() > 1) ++dist.multi_valued_units;
    for (const auto &g : p.gender) ++dist.counts[g.label];
  }
  dist.Finalize();
  return dist;
}

OccupationsByGender OccupationByGender(const std::vector<EntityProfile> &units,
                                       CountingBasis basis, std::size_t k) {
  OccupationsByGender result;
  result.occupations = MakeDistribution(Dimension::kOccupation, kOccupationChartThreshold,
                                        ThresholdRule::kAtLeast, basis);
  std::map<std::string, std::map<std::string, long>> per_gender;
  for (const auto &p : units) {
    if (p.gender.empty() || p.occupations.empty()) continue;
    if (p.occupations.size() > 1) ++result.occupations.multi_valued_units;
    for (const auto &o : p.occupations) ++result.occupations.counts[o.label];
    for (const auto &g : p.gender) {
      auto &counts = per_gender[g.label];
      for (const auto &o : p.occupations) ++counts[o.label];
    }
  }
  result.occupations.Finalize();
  for (const auto &[gender, counts] : per_gender) result.top[gender] = TopK(counts, k);
  return result;
}

const std::map<std::string, std::string> &ReligionDisplayLabels() {
  static const std::map<std::string, std::string> labels = {
      {"The Church of Jesus Christ of Latter-day Saints", "Mormon Church"},
  };
  return labels;
}

ReligionResult ReligionDistribution(const std::vector<EntityProfile> &units,
                                    CountingBasis basis) {
  ReligionResult result;
  result.distribution = MakeDistribution(Dimension::kReligion, kReligionThreshold,
                                         ThresholdRule::kGreaterThan, basis);
  std::map<std::string, std::set<Qid>> qids;
  for (const auto &p : units) {
    if (p.religion.size() > 1) ++result.distribution.multi_valued_units;
    for (const auto &r : p.religion) {
      auto it = ReligionDisplayLabels().find(r.label);
      const std::string &label = it == ReligionDisplayLabels().end() ? r.label : it->second;
      ++result.distribution.counts[label];
      qids[label].insert(r.qid);
    }
  }
  result.distribution.Finalize();
  for (const auto &[label, set] : qids) {
    auto &list = result.qids[label];
    for (const auto &q : set) list.push_back(q.str());
  }
  return result;
}

std::set<Property> DefaultLocationSources() {
  return {Property::kCountry, Property::kCitizenship};
}

GeoResult GeoDistribution(const std::vector<EntityProfile> &units, CountingBasis basis,
                          const std::set<Property> &sources) {
  GeoResult result;
  result.location_names = MakeDistribution(Dimension::kLocationName, kResultThreshold,
                                           ThresholdRule::kAtLeast, basis);
  for (const auto &p : units) {
    if (p.coordinates && p.coordinates->valid()) {
      result.coordinates.push_back(*p.coordinates);
      ++result.continents[ContinentOf(p.coordinates->latitude, p.coordinates->longitude)];
    }
    auto names = SelectedLocations(p, sources);
    if (names.size() > 1) ++result.location_names.multi_valued_units;
    for (const auto &n : names) ++result.location_names.counts[n.label];
  }
  std::sort(result.coordinates.begin(), result.coordinates.end(),
            [](const Coordinates &a, const Coordinates &b) {
              if (a.latitude != b.latitude) return a.latitude < b.latitude;
              return a.longitude < b.longitude;
            });
  result.map_included = PassesThreshold(static_cast<long>(result.coordinates.size()),
                                        kCoordinateMapThreshold, ThresholdRule::kAtLeast);
  result.location_names.Finalize();
  return result;
}

Distribution InstanceClassDistribution(const std::vector<EntityProfile> &units,
                                       CountingBasis basis, const ClassMap &classes) {
  Distribution dist =
      MakeDistribution(Dimension::kInstanceOf, kResultThreshold, ThresholdRule::kAtLeast, basis);
  for (const auto &p : units) {
    if (p.instance_of.empty()) continue;
    ++dist.counts[EntityClassName(ClassifyEntity(p, classes))];
  }
  dist.Finalize();
  return dist;
}

std::vector<std::string> DefaultMaleTerms() { return {"he", "man", "his"}; }
std::vector<std::string> DefaultFemaleTerms() { return {"she", "woman", "her", "hers"}; }

namespace {

bool IsLetter(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

}  // namespace

bool ContainsWholeWord(std::string_view text_in, std::string_view term_in) {
  if (term_in.empty()) return false;
  std::string text = text::AsciiLower(text_in);
  std::string term = text::AsciiLower(term_in);
  std::size_t pos = 0;
  while ((pos = text.find(term, pos)) != std::string::npos) {
    bool left = pos == 0 || !IsLetter(static_cast<unsigned char>(text[pos - 1]));
    std::size_t after = pos + term.size();
    bool right = after >= text.size() || !IsLetter(static_cast<unsigned char>(text[after]));
    if (left && right) return true;
    ++pos;
  }
  return false;
}

KeywordMatch KeywordGenderMatch(const std::vector<DatasetRecord> &records,
                                const std::vector<std::string> &male_terms,
                                const std::vector<std::string> &female_terms) {
  if (male_terms.empty() || female_terms.empty()) {
    throw ConfigError("keyword matching needs non-empty term lists");
  }
  KeywordMatch match;
  auto any = [](const std::string &q, const std::vector<std::string> &terms) {
    return std::any_of(terms.begin(), terms.end(),
                       [&](const std::string &t) { return ContainsWholeWord(q, t); });
  };
  for (const auto &r : records) {
    if (any(r.question, male_terms)) {
      ++match.male_count;
      match.male_record_ids.push_back(r.record_id);
    }
    if (any(r.question, female_terms)) {
      ++match.female_count;
      match.female_record_ids.push_back(r.record_id);
    }
  }
  return match;
}

namespace {

void AddRow(CountRow *row, const EntityProfile *p, const std::set<Property> &sources) {
  ++row->entities;
  if (!p) return;
  row->instance_of += static_cast<long>(p->instance_of.size());
  row->gender += static_cast<long>(p->gender.size());
  row->occupation += static_cast<long>(p->occupations.size());
  row->ethnicity += static_cast<long>(p->ethnic_group.size());
  row->religion += static_cast<long>(p->religion.size());
  row->coordinates += p->coordinates ? 1 : 0;
  row->location_names += static_cast<long>(SelectedLocations(*p, sources).size());
}

}  // namespace

EntityCountSummary EntityCounts(const std::vector<EntityLink> &links,
                                const std::map<Qid, EntityProfile> &profiles,
                                const std::set<Property> &location_sources) {
  EntityCountSummary summary;
  std::set<Qid> seen;
  for (const auto &l : links) {
    auto it = profiles.find(l.qid);
    const EntityProfile *p = it == profiles.end() ? nullptr : &it->second;
    AddRow(&summary.per_mention, p, location_sources);
    if (seen.insert(l.qid).second) AddRow(&summary.per_unique_entity, p, location_sources);
  }
  return summary;
}

std::vector<EntityProfile> UnitsFor(const std::vector<EntityLink> &links,
                                    const std::map<Qid, EntityProfile> &profiles,
                                    CountingBasis basis) {
  std::vector<EntityProfile> units;
  std::set<Qid> seen;
  for (const auto &l : links) {
    auto it = profiles.find(l.qid);
    if (it == profiles.end()) continue;
    if (basis == CountingBasis::kPerUniqueEntity && !seen.insert(l.qid).second) continue;
    units.push_back(it->second);
  }
  return units;
}

}  // namespace bias_audit
