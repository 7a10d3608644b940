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

#include "core/agreement.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "core/text.h"

namespace bias_audit {

std::vector<AnnotationItem> AnnotationMatrix::EligibleItems() const {
  std::vector<AnnotationItem> out;
  for (const auto &item : items) {
    if (std::find(excluded_categories.begin(), excluded_categories.end(), item.category) ==
        excluded_categories.end()) {
      out.push_back(item);
    }
  }
  return out;
}

AgreementResult KappaFromTable(long yes_yes, long yes_no, long no_yes, long no_no) {
  AgreementResult r;
  const long n = yes_yes + yes_no + no_yes + no_no;
  r.n_items = n;
  if (n <= 0) throw DataError("no eligible items");
  // Exact integer numerators: p_o = agree/n, p_e = chance/n^2.
  const double nn = static_cast<double>(n);
  const double agree = static_cast<double>(yes_yes + no_no);
  const double chance = static_cast<double>((yes_yes + yes_no) * (yes_yes + no_yes) +
                                            (no_yes + no_no) * (yes_no + no_no));
  r.observed = agree / nn;
  r.expected = chance / (nn * nn);
  if (chance == nn * nn) {
    r.kappa = 1.0;
  } else {
    r.kappa = (nn * agree - chance) / (nn * nn - chance);
  }
  return r;
}

namespace {

AgreementResult KappaOfItems(const std::vector<AnnotationItem> &items) {
  long table[2][2] = {{0, 0}, {0, 0}};
  for (const auto &item : items) {
    int a = item.annotator_a == Answer::kYes ? 0 : 1;
    int b = item.annotator_b == Answer::kYes ? 0 : 1;
    ++table[a][b];
  }
  return KappaFromTable(table[0][0], table[0][1], table[1][0], table[1][1]);
}

}  // namespace

AgreementResult CohenKappa(const AnnotationMatrix &matrix) {
  auto items = matrix.EligibleItems();
  if (items.empty()) throw DataError("no eligible items in unit '" + matrix.unit_id + "'");
  AgreementResult r = KappaOfItems(items);
  r.unit_id = matrix.unit_id;
  return r;
}

AgreementResult PooledKappa(const std::vector<AnnotationMatrix> &matrices) {
  std::vector<AnnotationItem> all;
  for (const auto &m : matrices) {
    auto items = m.EligibleItems();
    all.insert(all.end(), items.begin(), items.end());
  }
  if (all.empty()) throw DataError("no eligible items");
  AgreementResult r = KappaOfItems(all);
  r.unit_id = "*";
  return r;
}

KappaSummary SummarizeKappa(const std::vector<double> &kappas) {
  if (kappas.empty()) throw DataError("kappa summary of an empty list");
  KappaSummary s;
  s.n = kappas.size();
  double sum = 0;
  for (double k : kappas) sum += k;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0;
    for (double k : kappas) ss += (k - s.mean) * (k - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    s.sd_defined = true;
  }
  return s;
}

KappaSummary SummarizeKappa(const std::vector<AgreementResult> &results) {
  std::vector<double> kappas;
  kappas.reserve(results.size());
  for (const auto &r : results) kappas.push_back(r.kappa);
  return SummarizeKappa(kappas);
}

namespace {

std::optional<Answer> ParseAnswer(std::string_view s) {
  std::string a = text::AsciiLower(text::Trim(s));
  if (a == "yes" || a == "y" || a == "true") return Answer::kYes;
  if (a == "no" || a == "n" || a == "false") return Answer::kNo;
  return std::nullopt;
}

}  // namespace

std::vector<AnnotationMatrix> LoadAnnotationsCsv(const std::filesystem::path &path,
                                                 const AnnotationLoadOptions &options,
                                                 Warnings *warnings) {
  auto rows = text::ParseCsv(files::ReadAll(path));
  if (rows.empty()) throw DataError("empty annotation file: " + path.string());
  const auto &header = rows.front();
  auto col = [&](const char *name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (text::Trim(header[i]) == name) return i;
    }
    throw DataError(std::string("annotation CSV lacks column '") + name + "'");
  };
  const std::size_t c_unit = col("unit_id");
  const std::size_t c_question = col("question_id");
  const std::size_t c_category = col("question_category");
  const std::size_t c_annotator = col("annotator");
  const std::size_t c_answer = col("answer");

  struct Pending {
    std::string category;
    std::map<std::string, Answer> answers;  // annotator -> answer
  };
  // unit -> question -> answers, in first-seen order of units.
  std::vector<std::string> unit_order;
  std::map<std::string, std::map<std::string, Pending>> units;
  std::map<std::string, std::set<std::string>> annotators;

  auto reject = [&](std::size_t line, const std::string &why) {
    if (options.strict) throw DataError(path.string() + ":" + std::to_string(line) + ": " + why);
    if (warnings) warnings->Add("malformed_annotation_row");
  };

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    if (row.size() != header.size()) {
      reject(r + 1, "wrong column count");
      continue;
    }
    auto answer = ParseAnswer(row[c_answer]);
    if (!answer) {
      reject(r + 1, "answer must be yes or no");
      continue;
    }
    std::string unit = text::Trim(row[c_unit]);
    std::string question = text::Trim(row[c_question]);
    std::string annotator = text::Trim(row[c_annotator]);
    if (unit.empty() || question.empty() || annotator.empty()) {
      reject(r + 1, "empty unit, question or annotator");
      continue;
    }
    if (!units.count(unit)) unit_order.push_back(unit);
    Pending &p = units[unit][question];
    std::string category = text::Trim(row[c_category]);
    if (p.answers.empty()) {
      p.category = category;
    } else if (p.category != category) {
      throw DataError("question '" + question + "' in unit '" + unit +
                      "' has conflicting categories");
    }
    if (!p.answers.emplace(annotator, *answer).second) {
      throw DataError("annotator '" + annotator + "' answered question '" + question +
                      "' twice in unit '" + unit + "'");
    }
    annotators[unit].insert(annotator);
  }

  std::vector<AnnotationMatrix> out;
  for (const auto &unit : unit_order) {
    const auto &names = annotators[unit];
    if (names.size() != 2) {
      throw DataError("unit '" + unit + "' needs exactly two annotators, found " +
                      std::to_string(names.size()));
    }
    const std::string &a = *names.begin();
    const std::string &b = *std::next(names.begin());
    AnnotationMatrix m;
    m.unit_id = unit;
    m.excluded_categories = options.excluded_categories;
    for (const auto &[question, p] : units[unit]) {
      if (p.answers.size() != 2) {
        if (options.strict) {
          throw DataError("question '" + question + "' in unit '" + unit +
                          "' lacks an answer from one annotator");
        }
        if (warnings) warnings->Add("incomplete_item");
        continue;
      }
      m.items.push_back({question, p.category, p.answers.at(a), p.answers.at(b)});
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace bias_audit
