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

// Gender disparity statistics over scorer output.
//
// Sign conventions, used throughout:
//   * differences are female - male;
//   * leaning is positive when women's mentions are missed more often
//     (fn_f > fn_m) and negative when men's are, with |leaning| >= 1.

#ifndef CHEMBIAS_BIAS_METRICS_H_
#define CHEMBIAS_BIAS_METRICS_H_

#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chembias/conll_io.h"
#include "chembias/corpus.h"
#include "chembias/scorer.h"

namespace chembias {

struct BiasDiff {
  double d_precision = 0.0;
  double d_recall = 0.0;
  double d_f1 = 0.0;
};

BiasDiff bias_diff(const Prf& male, const Prf& female);

struct LabeledPrf {
  std::string label;
  Prf male;
  Prf female;
};

struct AggregateRow {
  std::string name;
  std::vector<std::string> labels;
  Prf male;
  Prf female;
  BiasDiff diff;
};

// Unweighted mean of every metric over the selected rows, then the
// difference of the means. Throws Error(kEmptySelection).
AggregateRow aggregate(std::span<const LabeledPrf> rows,
                       const std::function<bool(std::string_view)>& selector,
                       std::string name = "AVERAGE");

inline constexpr std::string_view kUncategorized = "uncategorized";

// Chemical surface -> category. Keys are normalized (ASCII lowercase,
// whitespace runs collapsed to one space, trimmed) on insert and lookup.
class CategoryLexicon {
 public:
  static std::string normalize(std::string_view surface);

  void add(std::string_view surface, std::string category);
  // kUncategorized when the surface is absent.
  std::string lookup(std::string_view surface) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::string> entries_;
};

// TSV "surface<TAB>category"; blank lines and '#' comments are skipped.
// Throws Error(kParseError) with the line number.
CategoryLexicon load_lexicon(std::istream& in);

struct CategoryRow {
  std::string category;
  std::size_t total_m = 0;
  std::size_t fn_m = 0;
  std::size_t total_f = 0;
  std::size_t fn_f = 0;

  std::size_t total(Group g) const { return g == Group::kMale ? total_m : total_f; }
  std::size_t fn(Group g) const { return g == Group::kMale ? fn_m : fn_f; }
  // fn / total, or nullopt when total is 0.
  std::optional<double> fnr(Group g) const;
};

class CategoryErrorTable {
 public:
  CategoryErrorTable() = default;
  // Throws Error(kInvalidArgument) on fn > total or duplicate categories.
  explicit CategoryErrorTable(std::vector<CategoryRow> rows);

  const std::vector<CategoryRow>& rows() const { return rows_; }
  const CategoryRow* find(std::string_view category) const;
  bool empty() const { return rows_.empty(); }

  std::size_t total(Group g) const;
  std::size_t fn(Group g) const;

 private:
  std::vector<CategoryRow> rows_;
};

// Per-category gold totals and false negatives for the male and female
// groups. Unknown-group documents are ignored. Rows are sorted by category.
CategoryErrorTable category_fnr(std::span<const ErrorRecord> errors,
                                const ConllFile& gold,
                                const CategoryLexicon& lexicon,
                                DecodeMode mode = DecodeMode::kLenient);

// Pooled FNR over all categories: sum(fn) / sum(total).
double micro_fnr(const CategoryErrorTable& table, Group group);

struct Leaning {
  // +fn_f/fn_m when fn_f >= fn_m, -fn_m/fn_f when fn_m > fn_f; +/-infinity
  // when the other side has no false negatives.
  double value = 1.0;
  bool one_sided = false;
  std::size_t fn_m = 0;
  std::size_t fn_f = 0;
};

// Throws Error(kNoErrors) if the category has no false negatives in either
// group or is absent from the table.
Leaning leaning(const CategoryErrorTable& table, std::string_view category);

struct WeightedFnr {
  double value = 0.0;
  // Normalized weight per category used in the sum.
  std::map<std::string, double> weights;
  // Categories skipped because the other group has no gold mentions there.
  std::vector<std::string> dropped;
};

// Weighted FNR for `target`: each category gets the ratio of its share of
// the target group's mentions to its share of the other group's mentions;
// weights are normalized to sum to one and applied to the target group's
// per-category FNRs. Throws Error(kDegenerateWeights) if no category has a
// positive weight.
WeightedFnr weighted_fnr(const CategoryErrorTable& table, Group target);

struct WfnrReport {
  double fnr_m = 0.0;
  double fnr_f = 0.0;
  double wfnr_m = 0.0;
  double wfnr_f = 0.0;
  double gap_fnr = 0.0;   // female - male
  double gap_wfnr = 0.0;
  // female / male; nullopt when the male value is 0.
  std::optional<double> ratio_fnr;
  std::optional<double> ratio_wfnr;
  std::vector<std::string> dropped_m;
  std::vector<std::string> dropped_f;
};

WfnrReport wfnr_report(const CategoryErrorTable& table);

// Pearson correlation between per-category totals and FNRs of `group`,
// over categories with a positive total. Throws Error(kZeroVariance) when
// fewer than two such categories exist or either column is constant.
double fnr_frequency_correlation(const CategoryErrorTable& table, Group group);

// CSV "category,total_m,fnr_m,total_f,fnr_f,fn_m,fn_f"; undefined FNRs are
// left empty.
void write_category_table_csv(std::ostream& out,
                              const CategoryErrorTable& table);
// Reads the layout above. Raw fn counts win when present; otherwise they are
// reconstructed as round(total * fnr). Throws Error(kParseError).
CategoryErrorTable read_category_table_csv(std::istream& in);

// CSV with rows FNR/wFNR per male, female, gap and ratio.
void write_wfnr_csv(std::ostream& out, const WfnrReport& report);

}  // namespace chembias

#endif  // CHEMBIAS_BIAS_METRICS_H_
