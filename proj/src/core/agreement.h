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

#ifndef BIAS_AUDIT_CORE_AGREEMENT_H_
#define BIAS_AUDIT_CORE_AGREEMENT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "core/errors.h"

namespace bias_audit {

enum class Answer { kYes, kNo };

inline constexpr char kSuggestOtherAnnotation[] = "suggest_other_annotation";

struct AnnotationItem {
  std::string question_id;
  std::string category;
  Answer annotator_a = Answer::kNo;
  Answer annotator_b = Answer::kNo;
};

// Paired yes/no answers of two annotators for one annotated unit (one
// benchmark paper).
struct AnnotationMatrix {
  std::string unit_id;
  std::vector<AnnotationItem> items;
  std::vector<std::string> excluded_categories = {kSuggestOtherAnnotation};

  std::vector<AnnotationItem> EligibleItems() const;
};

struct AgreementResult {
  std::string unit_id;
  double kappa = 0;
  double observed = 0;  // p_o
  double expected = 0;  // p_e
  long n_items = 0;
};

// Two-rater, two-category Cohen's kappa from a 2x2 table of counts
// (A yes/B yes, A yes/B no, A no/B yes, A no/B no). When both raters give
// one constant identical answer, chance agreement is 1 and kappa is defined
// as 1.
AgreementResult KappaFromTable(long yes_yes, long yes_no, long no_yes, long no_no);

// Throws DataError("no eligible items") when nothing is left after dropping
// excluded categories.
AgreementResult CohenKappa(const AnnotationMatrix &matrix);

// Kappa over the eligible items of all units taken together.
AgreementResult PooledKappa(const std::vector<AnnotationMatrix> &matrices);

struct KappaSummary {
  double mean = 0;
  // Sample standard deviation (n - 1). Reported as 0 with sd_defined=false
  // for a single value.
  double sd = 0;
  std::size_t n = 0;
  bool sd_defined = false;
};

KappaSummary SummarizeKappa(const std::vector<double> &kappas);
KappaSummary SummarizeKappa(const std::vector<AgreementResult> &results);

struct AnnotationLoadOptions {
  std::vector<std::string> excluded_categories = {kSuggestOtherAnnotation};
  bool strict = false;
};

// Reads the long-format CSV export: unit_id, question_id, question_category,
// annotator, answer. Each unit must have exactly two annotators; the
// lexicographically smaller annotator name becomes annotator A. Questions
// answered by only one annotator are dropped ("incomplete_item") or fatal in
// strict mode.
std::vector<AnnotationMatrix> LoadAnnotationsCsv(const std::filesystem::path &path,
                                                 const AnnotationLoadOptions &options,
                                                 Warnings *warnings = nullptr);

}  // namespace bias_audit

#endif  // BIAS_AUDIT_CORE_AGREEMENT_H_
