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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "core/errors.h"

namespace bias_audit {
namespace {

constexpr std::uint64_t kMale = 6581097;
constexpr std::uint64_t kFemale = 6581072;

EntityProfile Person(std::uint64_t qid, std::vector<std::uint64_t> genders,
                     std::vector<std::string> occupations = {}) {
  EntityProfile p;
  p.qid = Qid(qid);
  p.found = true;
  p.instance_of = {{kHumanClass, "human"}};
  for (auto g : genders) p.gender.push_back({Qid(g), g == kMale ? "male" : g == kFemale ? "female" : "Q" + std::to_string(g)});
  std::uint64_t oq = 1000;
  for (auto &o : occupations) p.occupations.push_back({Qid(oq++), o});
  return p;
}

std::vector<EntityProfile> Repeat(const EntityProfile &p, int n) {
  return std::vector<EntityProfile>(n, p);
}

TEST(MetricsTest, ThresholdRules) {
  EXPECT_FALSE(PassesThreshold(30, 30, ThresholdRule::kGreaterThan));
  EXPECT_TRUE(PassesThreshold(31, 30, ThresholdRule::kGreaterThan));
  EXPECT_FALSE(PassesThreshold(29, 30, ThresholdRule::kAtLeast));
  EXPECT_TRUE(PassesThreshold(30, 30, ThresholdRule::kAtLeast));
}

TEST(MetricsTest, GenderThresholdBoundary) {
  for (auto [n, included] : {std::pair{29, false}, {30, false}, {31, true}}) {
    auto d = GenderDistribution(Repeat(Person(1, {kMale}), n), CountingBasis::kPerMention);
    EXPECT_EQ(d.total, n);
    EXPECT_EQ(d.included, included) << n;
    EXPECT_EQ(d.rule, ThresholdRule::kGreaterThan);
  }
}

TEST(MetricsTest, ReligionThresholdBoundary) {
  EntityProfile p;
  p.qid = Qid(7);
  p.religion = {{Qid(432), "Islam"}};
  for (auto [n, included] : {std::pair{29, false}, {30, false}, {31, true}}) {
    auto r = ReligionDistribution(Repeat(p, n), CountingBasis::kPerMention);
    EXPECT_EQ(r.distribution.included, included) << n;
  }
}

TEST(MetricsTest, OccupationChartBoundary) {
  for (auto [n, included] : {std::pair{299, false}, {300, true}, {301, true}}) {
    auto o = OccupationByGender(Repeat(Person(1, {kFemale}, {"nurse"}), n),
                                CountingBasis::kPerMention);
    EXPECT_EQ(o.occupations.total, n);
    EXPECT_EQ(o.occupations.included, included) << n;
  }
}

TEST(MetricsTest, CoordinateMapBoundary) {
  EntityProfile p;
  p.qid = Qid(2112);
  p.coordinates = Coordinates{52.02, 8.53};
  for (auto [n, included] : {std::pair{29, false}, {30, true}, {31, true}}) {
    auto g = GeoDistribution(Repeat(p, n), CountingBasis::kPerMention);
    EXPECT_EQ(g.map_included, included) << n;
    EXPECT_EQ(g.continents.at("europe"), n);
  }
}

TEST(MetricsTest, LocationNameBoundaryAndSources) {
  EntityProfile p;
  p.qid = Qid(1);
  p.location_names = {{Qid(183), "Germany", Property::kCountry},
                      {Qid(183), "Germany", Property::kCitizenship},
                      {Qid(1198), "North Rhine-Westphalia", Property::kAdminLocation}};
  auto g = GeoDistribution(Repeat(p, 29), CountingBasis::kPerMention);
  EXPECT_EQ(g.location_names.counts.at("Germany"), 29);
  EXPECT_EQ(g.location_names.counts.count("North Rhine-Westphalia"), 0u);
  EXPECT_FALSE(g.location_names.included);
  EXPECT_EQ(g.location_names.multi_valued_units, 0);
  auto all = GeoDistribution(Repeat(p, 30), CountingBasis::kPerMention,
                             {Property::kCountry, Property::kAdminLocation});
  EXPECT_TRUE(all.location_names.included);
  EXPECT_EQ(all.location_names.total, 60);
  EXPECT_EQ(all.location_names.multi_valued_units, 30);
}

TEST(MetricsTest, OnlyPeopleCountForGender) {
  EntityProfile place = Person(2, {kMale});
  place.instance_of = {{Qid(515), "city"}};
  EntityProfile fictional = Person(3, {kFemale});
  fictional.instance_of = {{kFictionalHumanClass, "fictional human"}};
  auto d = GenderDistribution({Person(1, {kMale}), place, fictional}, CountingBasis::kPerMention);
  EXPECT_EQ(d.total, 2);
  EXPECT_EQ(d.counts.at("female"), 1);
}

TEST(MetricsTest, MultiValuedGenderCountsEachValue) {
  auto d = GenderDistribution({Person(1, {kMale, kFemale}), Person(2, {kFemale})},
                              CountingBasis::kPerUniqueEntity);
  EXPECT_EQ(d.total, 3);
  EXPECT_EQ(d.multi_valued_units, 1);
  EXPECT_EQ(d.basis, CountingBasis::kPerUniqueEntity);
  EXPECT_DOUBLE_EQ(d.Share("female"), 2.0 / 3);
  EXPECT_DOUBLE_EQ(d.Share("nobody"), 0.0);
}

TEST(MetricsTest, TopKOrdering) {
  std::map<std::string, long> counts = {{"b", 3}, {"a", 3}, {"c", 5}, {"d", 1}, {"e", 3}};
  auto top = TopK(counts, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].first, "c");
  EXPECT_EQ(top[1].first, "a");
  EXPECT_EQ(top[2].first, "b");
  EXPECT_EQ(TopK(counts, 50).size(), 5u);
  EXPECT_TRUE(TopK({}, 3).empty());
}

TEST(MetricsTest, MormonDisplayLabel) {
  EntityProfile p;
  p.qid = Qid(1);
  p.religion = {{Qid(42504), "The Church of Jesus Christ of Latter-day Saints"}};
  EntityProfile q;
  q.qid = Qid(2);
  q.religion = {{Qid(748), "Protestantism"}, {Qid(5043), "Christianity"}};
  auto r = ReligionDistribution({p, q}, CountingBasis::kPerMention);
  EXPECT_EQ(r.distribution.counts.at("Mormon Church"), 1);
  EXPECT_EQ(r.qids.at("Mormon Church"), std::vector<std::string>{"Q42504"});
  EXPECT_EQ(r.distribution.multi_valued_units, 1);
  EXPECT_EQ(r.distribution.total, 3);
}

TEST(MetricsTest, OccupationsByGender) {
  std::vector<EntityProfile> units = {
      Person(1, {kMale}, {"politician", "lawyer"}), Person(2, {kMale}, {"politician"}),
      Person(3, {kFemale}, {"nurse"}), Person(4, {}, {"farmer"}), Person(5, {kFemale})};
  auto o = OccupationByGender(units, CountingBasis::kPerMention, 1);
  EXPECT_EQ(o.occupations.total, 4);
  EXPECT_EQ(o.occupations.counts.count("farmer"), 0u);
  ASSERT_EQ(o.top.at("male").size(), 1u);
  EXPECT_EQ(o.top.at("male")[0], (std::pair<std::string, long>{"politician", 2}));
  EXPECT_EQ(o.top.at("female")[0].first, "nurse");
}

TEST(MetricsTest, CountingBases) {
  std::map<Qid, EntityProfile> profiles = {{Qid(1), Person(1, {kMale}, {"a", "b"})},
                                           {Qid(2), Person(2, {kFemale})}};
  profiles[Qid(2)].coordinates = Coordinates{1, 2};
  profiles[Qid(2)].location_names = {{Qid(30), "United States", Property::kCitizenship}};
  std::vector<EntityLink> links;
  for (auto q : {1, 1, 1, 2, 3}) {
    EntityLink l;
    l.qid = Qid(q);
    links.push_back(l);
  }
  auto c = EntityCounts(links, profiles);
  EXPECT_EQ(c.per_mention.entities, 5);
  EXPECT_EQ(c.per_unique_entity.entities, 3);
  EXPECT_EQ(c.per_mention.gender, 4);
  EXPECT_EQ(c.per_unique_entity.gender, 2);
  EXPECT_EQ(c.per_mention.occupation, 6);
  EXPECT_EQ(c.per_unique_entity.occupation, 2);
  EXPECT_EQ(c.per_mention.coordinates, 1);
  EXPECT_EQ(c.per_unique_entity.location_names, 1);
  EXPECT_EQ(c.per_mention.instance_of, 4);
  EXPECT_EQ(UnitsFor(links, profiles, CountingBasis::kPerMention).size(), 4u);
  EXPECT_EQ(UnitsFor(links, profiles, CountingBasis::kPerUniqueEntity).size(), 2u);
}

TEST(MetricsTest, KeywordExamples) {
  std::vector<DatasetRecord> records(5);
  records[0].record_id = "0";
  records[0].question = "Did he win?";
  records[1].record_id = "1";
  records[1].question = "Is her team the best? He thinks so.";
  records[2].record_id = "2";
  records[2].question = "Where are the shelves and the theme park?";
  records[3].record_id = "3";
  records[3].question = "Was the WOMAN right";
  records[4].record_id = "4";
  records[4].question = "he's a man's man";
  auto m = KeywordGenderMatch(records, DefaultMaleTerms(), DefaultFemaleTerms());
  EXPECT_EQ(m.male_count, 3);
  EXPECT_EQ(m.male_record_ids, (std::vector<std::string>{"0", "1", "4"}));
  EXPECT_EQ(m.female_count, 2);
  EXPECT_EQ(m.female_record_ids, (std::vector<std::string>{"1", "3"}));
  EXPECT_THROW(KeywordGenderMatch(records, {}, DefaultFemaleTerms()), ConfigError);
  EXPECT_FALSE(ContainsWholeWord("anything", ""));
  EXPECT_TRUE(ContainsWholeWord("HE", "he"));
  EXPECT_FALSE(ContainsWholeWord("hehe", "he"));
}

TEST(MetricsPropertyTest, KeywordListsAreSymmetric) {
  std::mt19937 rng(8);
  const std::vector<std::string> words = {"he", "she", "man", "woman", "the", "his", "hers",
                                          "tree", "He", "HER", "apple", "manly"};
  std::vector<DatasetRecord> records(400);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].record_id = std::to_string(i);
    for (int k = rng() % 8; k > 0; --k) records[i].question += words[rng() % words.size()] + " ";
  }
  auto m = KeywordGenderMatch(records, DefaultMaleTerms(), DefaultFemaleTerms());
  auto swapped = KeywordGenderMatch(records, DefaultFemaleTerms(), DefaultMaleTerms());
  EXPECT_EQ(m.male_count, swapped.female_count);
  EXPECT_EQ(m.female_record_ids, swapped.male_record_ids);
  // Oracle: token membership after splitting on spaces and lowercasing.
  long male = 0;
  for (const auto &r : records) {
    std::string q = text::AsciiLower(r.question);
    bool hit = false;
    for (const auto &t : text::Split(q, ' ')) {
      hit = hit || t == "he" || t == "man" || t == "his";
    }
    male += hit;
  }
  EXPECT_EQ(m.male_count, male);
}

TEST(MetricsPropertyTest, DistributionsMatchGroupByOracle) {
  std::mt19937 rng(1234);
  const std::vector<std::string> genders = {"male", "female", "non-binary"};
  const std::vector<std::string> religions = {"Islam", "Catholicism", "Hinduism", "Judaism"};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<EntityProfile> units;
    int n = rng() % 1000;
    for (int i = 0; i < n; ++i) {
      EntityProfile p;
      p.qid = Qid(1 + rng() % 400);
      int cls = rng() % 3;
      if (cls == 0) p.instance_of = {{kHumanClass, "human"}};
      if (cls == 1) p.instance_of = {{Qid(515), "city"}};
      for (int g = rng() % 3; g > 0; --g) {
        auto idx = rng() % genders.size();
        p.gender.push_back({Qid(100 + idx), genders[idx]});
      }
      for (int r = rng() % 2; r > 0; --r) {
        auto idx = rng() % religions.size();
        p.religion.push_back({Qid(200 + idx), religions[idx]});
      }
      units.push_back(p);
    }
    std::map<std::string, long> gender_oracle, religion_oracle;
    for (const auto &p : units) {
      bool human = !p.instance_of.empty() && p.instance_of[0].qid == kHumanClass;
      if (human) {
        for (const auto &g : p.gender) gender_oracle[g.label]++;
      }
      for (const auto &r : p.religion) religion_oracle[r.label]++;
    }
    auto gd = GenderDistribution(units, CountingBasis::kPerMention);
    auto rd = ReligionDistribution(units, CountingBasis::kPerMention);
    EXPECT_EQ(gd.counts, gender_oracle);
    EXPECT_EQ(rd.distribution.counts, religion_oracle);
    for (const auto *d : {&gd, &rd.distribution}) {
      long sum = 0;
      for (const auto &[k, v] : d->counts) sum += v;
      EXPECT_EQ(d->total, sum);
      EXPECT_EQ(d->included, d->total > 30);
      if (d->total > 0) {
        double share_sum = 0;
        for (const auto &[k, v] : d->Shares()) share_sum += v;
        EXPECT_NEAR(share_sum, 1.0, 1e-9);
      } else {
        EXPECT_TRUE(d->Shares().empty());
      }
    }
  }
}

}  // namespace
}  // namespace bias_audit
