// Copyright 2026 The chembias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Full audit of one gold corpus against several prediction runs, and the
// JSON / CSV / Markdown renderings of the result.

#ifndef CHEMBIAS_REPORT_H_
#define CHEMBIAS_REPORT_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "chembias/bias_metrics.h"
#include "chembias/conll_io.h"
#include "chembias/scorer.h"

namespace chembias {

enum class ReportFormat { kJson, kCsv, kMarkdown };

std::optional<ReportFormat> parse_report_format(std::string_view text);

struct LeaningEntry {
  std::string category;
  Leaning leaning;
};

struct LabelAudit {
  std::string label;
  GroupScoreReport scores;
  BiasDiff diff;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  CategoryErrorTable categories;
  // Categories with at least one false negative, in table order.
  std::vector<LeaningEntry> leanings;
  std::optional<WfnrReport> wfnr;
  std::optional<double> pcc_m;
  std::optional<double> pcc_f;
  // Why an optional statistic is missing.
  std::vector<std::string> notes;
};

struct LabelFailure {
  std::string label;
  std::string message;
};

// Named mean over the labels whose name fully matches `pattern`
// (ECMAScript regex).
struct AggregateSpec {
  std::string name;
  std::string pattern;
};

struct PredictionInput {
  std::string label;
  std::filesystem::path path;
};

struct AuditResult {
  DecodeMode mode = DecodeMode::kLenient;
  std::vector<LabelAudit> labels;
  std::vector<AggregateRow> aggregates;
  std::vector<LabelFailure> failures;
};

LabelAudit audit_label(std::string label, const ConllFile& gold,
                       const PredictionSet& pred,
                       const CategoryLexicon& lexicon,
                       DecodeMode mode = DecodeMode::kLenient);

// Audits every prediction file, `jobs` labels at a time. A label that fails
// to load or score lands in `failures` and the rest continue. Without
// aggregate specs a single "AVERAGE" over all audited labels is emitted
// when there are at least two.
AuditResult run_audit(const ConllFile& gold,
                      std::span<const PredictionInput> predictions,
                      const CategoryLexicon& lexicon, DecodeMode mode,
                      std::span<const AggregateSpec> aggregates,
                      unsigned jobs = 1);

nlohmann::ordered_json score_to_json(const GroupScoreReport& report);
nlohmann::ordered_json audit_to_json(const AuditResult& result);

// "group,tp,fp,fn,precision,recall,f1,flags" rows for male, female, unknown
// and overall.
void write_score_csv(std::ostream& out, const GroupScoreReport& report);

// Figure data: "category,leaning,fn_m,fn_f".
void write_leaning_csv(std::ostream& out, const LabelAudit& audit);

std::string render_score_markdown(const GroupScoreReport& report);
std::string render_markdown(const AuditResult& result);

// File-name-safe form of a label.
std::string label_slug(std::string_view label);

// Writes the report in `format` plus one leaning_<label>.csv per label.
// Returns the written paths. Throws Error(kIo).
std::vector<std::filesystem::path> write_audit(
    const AuditResult& result, ReportFormat format,
    const std::filesystem::path& output_dir);

}  // namespace chembias

#endif  // CHEMBIAS_REPORT_H_
