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

#include "chembias/bias_metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "chembias/error.h"
#include "chembias/text.h"

namespace chembias {
namespace {

Group other_group(Group g) {
  return g == Group::kMale ? Group::kFemale : Group::kMale;
}

void require_binary(Group g) {
  if (g != Group::kMale && g != Group::kFemale) {
    throw Error(ErrorCode::kInvalidArgument,
                "group must be male or female");
  }
}

double ratio(std::size_t num, std::size_t den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

BiasDiff bias_diff(const Prf& male, const Prf& female) {
  return {female.precision - male.precision, female.recall - male.recall,
          female.f1 - male.f1};
}

AggregateRow aggregate(std::span<const LabeledPrf> rows,
                       const std::function<bool(std::string_view)>& selector,
                       std::string name) {
  AggregateRow out;
  out.name = std::move(name);
  for (const LabeledPrf& row : rows) {
    if (!selector(row.label)) continue;
    out.labels.push_back(row.label);
    out.male.precision += row.male.precision;
    out.male.recall += row.male.recall;
    out.male.f1 += row.male.f1;
    out.female.precision += row.female.precision;
    out.female.recall += row.female.recall;
    out.female.f1 += row.female.f1;
  }
  if (out.labels.empty()) {
    throw Error(ErrorCode::kEmptySelection,
                "aggregate '" + out.name + "' selects no rows");
  }
  const double n = static_cast<double>(out.labels.size());
  for (Prf* p : {&out.male, &out.female}) {
    p->precision /= n;
    p->recall /= n;
    p->f1 /= n;
  }
  out.diff = bias_diff(out.male, out.female);
  return out;
}

std::string CategoryLexicon::normalize(std::string_view surface) {
  std::string out;
  for (std::string_view word : split_whitespace(surface)) {
    if (!out.empty()) out += ' ';
    out += ascii_lower(word);
  }
  return out;
}

void CategoryLexicon::add(std::string_view surface, std::string category) {
  entries_[normalize(surface)] = std::move(category);
}

std::string CategoryLexicon::lookup(std::string_view surface) const {
  auto it = entries_.find(normalize(surface));
  return it == entries_.end() ? std::string(kUncategorized) : it->second;
}

CategoryLexicon load_lexicon(std::istream& in) {
  CategoryLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto cols = split(line, '\t');
    if (cols.size() != 2 || trim(cols[0]).empty() || trim(cols[1]).empty()) {
      throw Error(ErrorCode::kParseError,
                  "expected surface<TAB>category", line_no);
    }
    lexicon.add(cols[0], std::string(trim(cols[1])));
  }
  return lexicon;
}

std::optional<double> CategoryRow::fnr(Group g) const {
  const std::size_t t = total(g);
  if (t == 0) return std::nullopt;
  return ratio(fn(g), t);
}

CategoryErrorTable::CategoryErrorTable(std::vector<CategoryRow> rows)
    : rows_(std::move(rows)) {
  std::set<std::string_view> seen;
  for (const CategoryRow& row : rows_) {
    if (row.fn_m > row.total_m || row.fn_f > row.total_f) {
      throw Error(ErrorCode::kInvalidArgument,
                  "category '" + row.category + "' has fn > total");
    }
    if (!seen.insert(row.category).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate category '" + row.category + "'");
    }
  }
}

const CategoryRow* CategoryErrorTable::find(std::string_view category) const {
  for (const CategoryRow& row : rows_) {
    if (row.category == category) return &row;
  }
  return nullptr;
}

std::size_t CategoryErrorTable::total(Group g) const {
  std::size_t n = 0;
  for (const CategoryRow& row : rows_) n += row.total(g);
  return n;
}

std::size_t CategoryErrorTable::fn(Group g) const {
  std::size_t n = 0;
  for (const CategoryRow& row : rows_) n += row.fn(g);
  return n;
}

CategoryErrorTable category_fnr(std::span<const ErrorRecord> errors,
                                const ConllFile& gold,
                                const CategoryLexicon& lexicon,
                                DecodeMode mode) {
  std::map<std::string, CategoryRow> rows;
  auto row_for = [&](std::string_view surface) -> CategoryRow& {
    std::string category = lexicon.lookup(surface);
    CategoryRow& row = rows[category];
    row.category = std::move(category);
    return row;
  };

  for (const Document& doc : gold.documents) {
    const Group g = doc.group_or_unknown();
    if (g == Group::kUnknown) continue;
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      const Sentence& sentence = doc.sentences[s];
      const auto tags = sentence.tags();
      for (const EntitySpan& span : spans_from_tags(tags, mode, s)) {
        CategoryRow& row = row_for(sentence.join(span.start, span.end));
        (g == Group::kMale ? row.total_m : row.total_f) += 1;
      }
    }
  }
  for (const ErrorRecord& e : errors) {
    if (e.kind != ErrorKind::kFalseNegative || e.group == Group::kUnknown) {
      continue;
    }
    CategoryRow& row = row_for(e.surface);
    (e.group == Group::kMale ? row.fn_m : row.fn_f) += 1;
  }

  std::vector<CategoryRow> out;
  out.reserve(rows.size());
  for (auto& [name, row] : rows) out.push_back(std::move(row));
  return CategoryErrorTable(std::move(out));
}

double micro_fnr(const CategoryErrorTable& table, Group group) {
  require_binary(group);
  const std::size_t total = table.total(group);
  return total == 0 ? 0.0 : ratio(table.fn(group), total);
}

Leaning leaning(const CategoryErrorTable& table, std::string_view category) {
  const CategoryRow* row = table.find(category);
  if (row == nullptr || row->fn_m + row->fn_f == 0) {
    throw Error(ErrorCode::kNoErrors,
                "no false negatives for category '" + std::string(category) +
                    "'");
  }
  Leaning out;
  out.fn_m = row->fn_m;
  out.fn_f = row->fn_f;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (row->fn_f >= row->fn_m) {
    out.one_sided = row->fn_m == 0;
    out.value = out.one_sided ? kInf : ratio(row->fn_f, row->fn_m);
  } else {
    out.one_sided = row->fn_f == 0;
    out.value = out.one_sided ? -kInf : -ratio(row->fn_m, row->fn_f);
  }
  return out;
}

WeightedFnr weighted_fnr(const CategoryErrorTable& table, Group target) {
  require_binary(target);
  const Group other = other_group(target);
  const std::size_t n_target = table.total(target);
  const std::size_t n_other = table.total(other);
  if (n_target == 0 || n_other == 0) {
    throw Error(ErrorCode::kDegenerateWeights,
                "a group has no gold mentions");
  }

  WeightedFnr out;
  std::vector<std::pair<const CategoryRow*, double>> raw;
  double sum = 0.0;
  for (const CategoryRow& row : table.rows()) {
    if (row.total(other) == 0) {
      out.dropped.push_back(row.category);
      continue;
    }
    const double w = ratio(row.total(target), n_target) /
                     ratio(row.total(other), n_other);
    raw.emplace_back(&row, w);
    sum += w;
  }
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::kDegenerateWeights, "all category weights are zero");
  }
  for (const auto& [row, w] : raw) {
    const double weight = w / sum;
    out.weights[row->category] = weight;
    // A zero weight means the target has no mentions there.
    out.value += weight * row->fnr(target).value_or(0.0);
  }
  return out;
}

WfnrReport wfnr_report(const CategoryErrorTable& table) {
  WfnrReport r;
  r.fnr_m = micro_fnr(table, Group::kMale);
  r.fnr_f = micro_fnr(table, Group::kFemale);
  const WeightedFnr wm = weighted_fnr(table, Group::kMale);
  const WeightedFnr wf = weighted_fnr(table, Group::kFemale);
  r.wfnr_m = wm.value;
  r.wfnr_f = wf.value;
  r.dropped_m = wm.dropped;
  r.dropped_f = wf.dropped;
  r.gap_fnr = r.fnr_f - r.fnr_m;
  r.gap_wfnr = r.wfnr_f - r.wfnr_m;
  if (r.fnr_m > 0.0) r.ratio_fnr = r.fnr_f / r.fnr_m;
  if (r.wfnr_m > 0.0) r.ratio_wfnr = r.wfnr_f / r.wfnr_m;
  return r;
}

double fnr_frequency_correlation(const CategoryErrorTable& table,
                                 Group group) {
  require_binary(group);
  std::vector<double> xs;
  std::vector<double> ys;
  for (const CategoryRow& row : table.rows()) {
    if (auto f = row.fnr(group)) {
      xs.push_back(static_cast<double>(row.total(group)));
      ys.push_back(*f);
    }
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::kZeroVariance,
                "need at least two categories with mentions");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kZeroVariance, "constant totals or FNRs");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

void write_category_table_csv(std::ostream& out,
                              const CategoryErrorTable& table) {
  out << "category,total_m,fnr_m,total_f,fnr_f,fn_m,fn_f\n";
  auto cell = [](std::optional<double> v) {
    return v ? format_double(*v) : std::string();
  };
  for (const CategoryRow& row : table.rows()) {
    out << row.category << ',' << row.total_m << ','
        << cell(row.fnr(Group::kMale)) << ',' << row.total_f << ','
        << cell(row.fnr(Group::kFemale)) << ',' << row.fn_m << ','
        << row.fn_f << '\n';
  }
}

CategoryErrorTable read_category_table_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool has_fn = false;
  std::vector<CategoryRow> rows;
  auto fail = [&](const std::string& msg) {
    return Error(ErrorCode::kParseError, msg, line_no);
  };
  auto parse_count = [&](std::string_view s) {
    s = trim(s);
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw fail("invalid count '" + std::string(s) + "'");
    }
    return v;
  };
  auto parse_rate = [&](std::string_view s) {
    s = trim(s);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 0.0 || v > 1.0) {
      throw fail("invalid rate '" + std::string(s) + "'");
    }
    return v;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!have_header) {
      const std::string_view h = trim(line);
      if (h == "category,total_m,fnr_m,total_f,fnr_f") {
        has_fn = false;
      } else if (h == "category,total_m,fnr_m,total_f,fnr_f,fn_m,fn_f") {
        has_fn = true;
      } else {
        throw fail("unexpected header '" + std::string(h) + "'");
      }
      have_header = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != (has_fn ? 7u : 5u)) throw fail("wrong column count");
    CategoryRow row;
    row.category = std::string(trim(cols[0]));
    row.total_m = parse_count(cols[1]);
    row.total_f = parse_count(cols[3]);
    if (has_fn) {
      row.fn_m = parse_count(cols[5]);
      row.fn_f = parse_count(cols[6]);
    } else {
      row.fn_m = static_cast<std::size_t>(
          std::llround(parse_rate(cols[2]) * static_cast<double>(row.total_m)));
      row.fn_f = static_cast<std::size_t>(
          std::llround(parse_rate(cols[4]) * static_cast<double>(row.total_f)));
    }
    rows.push_back(std::move(row));
  }
  try {
    return CategoryErrorTable(std::move(rows));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

void write_wfnr_csv(std::ostream& out, const WfnrReport& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  out << "row,fnr,wfnr\n";
  out << "male," << format_double(r.fnr_m) << ',' << format_double(r.wfnr_m)
      << '\n';
  out << "female," << format_double(r.fnr_f) << ','
      << format_double(r.wfnr_f) << '\n';
  out << "gap," << format_double(r.gap_fnr) << ',' << format_double(r.gap_wfnr)
      << '\n';
  out << "ratio," << opt(r.ratio_fnr) << ',' << opt(r.ratio_wfnr) << '\n';
}

}  // namespace chembias
