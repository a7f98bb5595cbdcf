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

#include "chembias/report.h"

#include <atomic>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>
#include <utility>
#include <variant>

#include "chembias/error.h"
#include "chembias/text.h"

namespace chembias {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kDifferenceConvention = "female - male";
constexpr std::string_view kLeaningConvention =
    "positive: more female false negatives (+fn_f/fn_m); negative: more male "
    "false negatives (-fn_m/fn_f); |leaning| >= 1; one-sided categories are "
    "reported as +/-inf";

Json prf_json(const MatchCounts& c, const Prf& p) {
  Json j;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["precision"] = p.precision;
  j["recall"] = p.recall;
  j["f1"] = p.f1;
  Json flags = Json::array();
  if (p.precision_degenerate) flags.push_back("precision_undefined");
  if (p.recall_degenerate) flags.push_back("recall_undefined");
  j["flags"] = std::move(flags);
  return j;
}

Json metrics_json(const Prf& p) {
  Json j;
  j["precision"] = p.precision;
  j["recall"] = p.recall;
  j["f1"] = p.f1;
  return j;
}

Json diff_json(const BiasDiff& d) {
  Json j;
  j["precision"] = d.d_precision;
  j["recall"] = d.d_recall;
  j["f1"] = d.d_f1;
  return j;
}

Json optional_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json();
}

std::string csv_opt(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string md(double v) { return format_fixed(v, 4); }

std::string md_opt(const std::optional<double>& v) {
  return v ? md(*v) : std::string("n/a");
}

std::string leaning_cell(const Leaning& l) {
  if (std::isinf(l.value)) return l.value > 0 ? "inf" : "-inf";
  return format_double(l.value);
}

void write_file(const std::filesystem::path& path, const std::string& body,
                std::vector<std::filesystem::path>& written) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  out.close();
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  written.push_back(path);
}

void score_rows_md(std::ostringstream& out, const std::string& name,
                   const Prf& male, const Prf& female, const BiasDiff& d) {
  out << "| " << name << " | " << md(male.precision) << " | "
      << md(male.recall) << " | " << md(male.f1) << " | "
      << md(female.precision) << " | " << md(female.recall) << " | "
      << md(female.f1) << " | " << md(d.d_precision) << " | "
      << md(d.d_recall) << " | " << md(d.d_f1) << " |\n";
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "markdown") return ReportFormat::kMarkdown;
  return std::nullopt;
}

LabelAudit audit_label(std::string label, const ConllFile& gold,
                       const PredictionSet& pred,
                       const CategoryLexicon& lexicon, DecodeMode mode) {
  LabelAudit a;
  a.label = std::move(label);
  a.scores = score(gold, pred, mode);
  a.diff = bias_diff(a.scores.at(Group::kMale).prf,
                     a.scores.at(Group::kFemale).prf);
  const auto errors = extract_errors(gold, pred, mode);
  for (const ErrorRecord& e : errors) {
    (e.kind == ErrorKind::kFalsePositive ? a.false_positives
                                         : a.false_negatives) += 1;
  }
  a.categories = category_fnr(errors, gold, lexicon, mode);
  for (const CategoryRow& row : a.categories.rows()) {
    if (row.fn_m + row.fn_f > 0) {
      a.leanings.push_back({row.category, leaning(a.categories, row.category)});
    }
  }
  try {
    a.wfnr = wfnr_report(a.categories);
    for (const auto& c : a.wfnr->dropped_m) {
      a.notes.push_back("wFNR(male) dropped category without female mentions: " + c);
    }
    for (const auto& c : a.wfnr->dropped_f) {
      a.notes.push_back("wFNR(female) dropped category without male mentions: " + c);
    }
  } catch (const Error& e) {
    a.notes.push_back(std::string("wFNR unavailable: ") + e.what());
  }
  for (Group g : {Group::kMale, Group::kFemale}) {
    try {
      (g == Group::kMale ? a.pcc_m : a.pcc_f) =
          fnr_frequency_correlation(a.categories, g);
    } catch (const Error& e) {
      a.notes.push_back("PCC(" + std::string(group_name(g)) +
                        ") unavailable: " + e.what());
    }
  }
  return a;
}

AuditResult run_audit(const ConllFile& gold,
                      std::span<const PredictionInput> predictions,
                      const CategoryLexicon& lexicon, DecodeMode mode,
                      std::span<const AggregateSpec> aggregates,
                      unsigned jobs) {
  using Outcome = std::variant<LabelAudit, LabelFailure>;
  std::vector<std::optional<Outcome>> outcomes(predictions.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < predictions.size(); i = next++) {
      const PredictionInput& input = predictions[i];
      try {
        std::ifstream in(input.path, std::ios::binary);
        if (!in) {
          throw Error(ErrorCode::kIo, "cannot open " + input.path.string());
        }
        const PredictionSet pred = parse_predictions(in);
        outcomes[i] = audit_label(input.label, gold, pred, lexicon, mode);
      } catch (const std::exception& e) {
        outcomes[i] = LabelFailure{input.label, e.what()};
      }
    }
  };
  const unsigned n_threads = std::max(
      1u, std::min<unsigned>(jobs, static_cast<unsigned>(predictions.size())));
  std::vector<std::jthread> threads;
  for (unsigned t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  threads.clear();

  AuditResult result;
  result.mode = mode;
  for (auto& outcome : outcomes) {
    if (auto* audit = std::get_if<LabelAudit>(&*outcome)) {
      result.labels.push_back(std::move(*audit));
    } else {
      result.failures.push_back(std::get<LabelFailure>(*outcome));
    }
  }

  std::vector<LabeledPrf> rows;
  for (const LabelAudit& a : result.labels) {
    rows.push_back({a.label, a.scores.at(Group::kMale).prf,
                    a.scores.at(Group::kFemale).prf});
  }
  if (aggregates.empty()) {
    if (rows.size() >= 2) {
      result.aggregates.push_back(
          aggregate(rows, [](std::string_view) { return true; }, "AVERAGE"));
    }
    return result;
  }
  for (const AggregateSpec& spec : aggregates) {
    try {
      const std::regex re(spec.pattern);
      result.aggregates.push_back(aggregate(
          rows,
          [&](std::string_view label) {
            return std::regex_match(label.begin(), label.end(), re);
          },
          spec.name));
    } catch (const std::exception& e) {
      result.failures.push_back({"aggregate:" + spec.name, e.what()});
    }
  }
  return result;
}

Json score_to_json(const GroupScoreReport& report) {
  Json j;
  for (Group g : kAllGroups) {
    const GroupScore& s = report.at(g);
    j[std::string(group_name(g))] = prf_json(s.counts, s.prf);
  }
  j["overall"] = prf_json(report.overall.counts, report.overall.prf);
  j["difference"] = diff_json(
      bias_diff(report.at(Group::kMale).prf, report.at(Group::kFemale).prf));
  return j;
}

Json audit_to_json(const AuditResult& result) {
  Json j;
  j["decode_mode"] = result.mode == DecodeMode::kStrict ? "strict" : "lenient";
  j["conventions"] = {{"difference", kDifferenceConvention},
                      {"leaning", kLeaningConvention}};
  Json labels = Json::array();
  for (const LabelAudit& a : result.labels) {
    Json l;
    l["label"] = a.label;
    l["scores"] = score_to_json(a.scores);
    l["difference"] = diff_json(a.diff);
    l["errors"] = {{"false_positives", a.false_positives},
                   {"false_negatives", a.false_negatives}};
    Json cats = Json::array();
    for (const CategoryRow& row : a.categories.rows()) {
      Json c;
      c["category"] = row.category;
      c["total_m"] = row.total_m;
      c["fn_m"] = row.fn_m;
      c["fnr_m"] = optional_json(row.fnr(Group::kMale));
      c["total_f"] = row.total_f;
      c["fn_f"] = row.fn_f;
      c["fnr_f"] = optional_json(row.fnr(Group::kFemale));
      cats.push_back(std::move(c));
    }
    l["categories"] = std::move(cats);
    Json leans = Json::array();
    for (const LeaningEntry& e : a.leanings) {
      Json x;
      x["category"] = e.category;
      x["leaning"] = e.leaning.one_sided ? Json() : Json(e.leaning.value);
      x["one_sided"] = e.leaning.one_sided
                           ? Json(e.leaning.value > 0 ? "female" : "male")
                           : Json();
      x["fn_m"] = e.leaning.fn_m;
      x["fn_f"] = e.leaning.fn_f;
      leans.push_back(std::move(x));
    }
    l["leaning"] = std::move(leans);
    if (a.wfnr) {
      const WfnrReport& w = *a.wfnr;
      l["wfnr"] = {{"fnr_m", w.fnr_m},       {"fnr_f", w.fnr_f},
                   {"wfnr_m", w.wfnr_m},     {"wfnr_f", w.wfnr_f},
                   {"gap_fnr", w.gap_fnr},   {"gap_wfnr", w.gap_wfnr},
                   {"ratio_fnr", optional_json(w.ratio_fnr)},
                   {"ratio_wfnr", optional_json(w.ratio_wfnr)}};
    } else {
      l["wfnr"] = nullptr;
    }
    l["pcc"] = {{"male", optional_json(a.pcc_m)},
                {"female", optional_json(a.pcc_f)}};
    l["notes"] = a.notes;
    labels.push_back(std::move(l));
  }
  j["labels"] = std::move(labels);
  Json aggs = Json::array();
  for (const AggregateRow& r : result.aggregates) {
    Json a;
    a["name"] = r.name;
    a["labels"] = r.labels;
    a["male"] = metrics_json(r.male);
    a["female"] = metrics_json(r.female);
    a["difference"] = diff_json(r.diff);
    aggs.push_back(std::move(a));
  }
  j["aggregates"] = std::move(aggs);
  Json failures = Json::array();
  for (const LabelFailure& f : result.failures) {
    failures.push_back({{"label", f.label}, {"error", f.message}});
  }
  j["failures"] = std::move(failures);
  return j;
}

void write_score_csv(std::ostream& out, const GroupScoreReport& report) {
  out << "group,tp,fp,fn,precision,recall,f1,flags\n";
  auto row = [&](std::string_view name, const GroupScore& s) {
    out << name << ',' << s.counts.tp << ',' << s.counts.fp << ','
        << s.counts.fn << ',' << format_double(s.prf.precision) << ','
        << format_double(s.prf.recall) << ',' << format_double(s.prf.f1)
        << ',' << s.prf.flags() << '\n';
  };
  for (Group g : kAllGroups) row(group_name(g), report.at(g));
  row("overall", report.overall);
}

void write_leaning_csv(std::ostream& out, const LabelAudit& audit) {
  out << "category,leaning,fn_m,fn_f\n";
  for (const LeaningEntry& e : audit.leanings) {
    out << e.category << ',' << leaning_cell(e.leaning) << ','
        << e.leaning.fn_m << ',' << e.leaning.fn_f << '\n';
  }
}

std::string render_score_markdown(const GroupScoreReport& report) {
  std::ostringstream out;
  out << "| Group | TP | FP | FN | Prec. | Rec. | F1 | Flags |\n"
      << "|---|---:|---:|---:|---:|---:|---:|---|\n";
  auto row = [&](std::string_view name, const GroupScore& s) {
    out << "| " << name << " | " << s.counts.tp << " | " << s.counts.fp
        << " | " << s.counts.fn << " | " << md(s.prf.precision) << " | "
        << md(s.prf.recall) << " | " << md(s.prf.f1) << " | " << s.prf.flags()
        << " |\n";
  };
  for (Group g : kAllGroups) row(group_name(g), report.at(g));
  row("overall", report.overall);
  return out.str();
}

std::string render_markdown(const AuditResult& result) {
  std::ostringstream out;
  out << "# Chemical NER gender bias audit\n\n"
      << "Differences are " << kDifferenceConvention << ". Leaning: "
      << kLeaningConvention << ".\n\n";

  out << "## Scores\n\n"
      << "| Run | Male Prec. | Male Rec. | Male F1 | Female Prec. | "
         "Female Rec. | Female F1 | Diff. Prec. | Diff. Rec. | Diff. F1 |\n"
      << "|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const LabelAudit& a : result.labels) {
    score_rows_md(out, a.label, a.scores.at(Group::kMale).prf,
                  a.scores.at(Group::kFemale).prf, a.diff);
  }
  for (const AggregateRow& r : result.aggregates) {
    score_rows_md(out, "**" + r.name + "**", r.male, r.female, r.diff);
  }

  for (const LabelAudit& a : result.labels) {
    out << "\n## Error analysis: " << a.label << "\n\n"
        << "False positives: " << a.false_positives
        << ", false negatives: " << a.false_negatives << "\n\n";
    out << "| Category | Total Male | FNR Male | Total Female | FNR Female | "
           "FN Male | FN Female | Leaning |\n"
        << "|---|---:|---:|---:|---:|---:|---:|---:|\n";
    for (const CategoryRow& row : a.categories.rows()) {
      std::string lean = "";
      for (const LeaningEntry& e : a.leanings) {
        if (e.category == row.category) lean = leaning_cell(e.leaning);
      }
      if (!lean.empty() && lean != "inf" && lean != "-inf") {
        lean = format_fixed(std::stod(lean), 2);
      }
      out << "| " << row.category << " | " << row.total_m << " | "
          << md_opt(row.fnr(Group::kMale)) << " | " << row.total_f << " | "
          << md_opt(row.fnr(Group::kFemale)) << " | " << row.fn_m << " | "
          << row.fn_f << " | " << lean << " |\n";
    }
    out << "| PCC between Total and FNR |  | " << md_opt(a.pcc_m)
        << " |  | " << md_opt(a.pcc_f) << " |  |  |  |\n\n";
    if (a.wfnr) {
      const WfnrReport& w = *a.wfnr;
      out << "|  | FNR | wFNR |\n|---|---:|---:|\n"
          << "| Male | " << md(w.fnr_m) << " | " << md(w.wfnr_m) << " |\n"
          << "| Female | " << md(w.fnr_f) << " | " << md(w.wfnr_f) << " |\n"
          << "| Gap | " << md(w.gap_fnr) << " | " << md(w.gap_wfnr) << " |\n"
          << "| Ratio | " << md_opt(w.ratio_fnr) << " | "
          << md_opt(w.ratio_wfnr) << " |\n";
    }
    for (const std::string& note : a.notes) out << "\n> " << note << "\n";
  }

  if (!result.failures.empty()) {
    out << "\n## Failures\n\n";
    for (const LabelFailure& f : result.failures) {
      out << "- " << f.label << ": " << f.message << "\n";
    }
  }
  return out.str();
}

std::string label_slug(std::string_view label) {
  std::string out;
  for (char c : label) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

std::vector<std::filesystem::path> write_audit(
    const AuditResult& result, ReportFormat format,
    const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  std::vector<std::filesystem::path> written;

  switch (format) {
    case ReportFormat::kJson:
      write_file(dir / "audit.json", audit_to_json(result).dump(2) + "\n",
                 written);
      break;
    case ReportFormat::kMarkdown:
      write_file(dir / "audit.md", render_markdown(result), written);
      break;
    case ReportFormat::kCsv: {
      std::ostringstream scores, diffs, cats, wfnr, pcc, aggs;
      scores << "label,group,tp,fp,fn,precision,recall,f1,flags\n";
      diffs << "label,d_precision,d_recall,d_f1\n";
      cats << "label,category,total_m,fnr_m,total_f,fnr_f,fn_m,fn_f\n";
      wfnr << "label,fnr_m,fnr_f,wfnr_m,wfnr_f,gap_fnr,gap_wfnr,ratio_fnr,"
              "ratio_wfnr\n";
      pcc << "label,pcc_m,pcc_f\n";
      for (const LabelAudit& a : result.labels) {
        std::ostringstream body;
        write_score_csv(body, a.scores);
        std::istringstream lines(body.str());
        std::string line;
        std::getline(lines, line);  // header
        while (std::getline(lines, line)) scores << a.label << ',' << line << '\n';
        diffs << a.label << ',' << format_double(a.diff.d_precision) << ','
              << format_double(a.diff.d_recall) << ','
              << format_double(a.diff.d_f1) << '\n';
        for (const CategoryRow& row : a.categories.rows()) {
          cats << a.label << ',' << row.category << ',' << row.total_m << ','
               << csv_opt(row.fnr(Group::kMale)) << ',' << row.total_f << ','
               << csv_opt(row.fnr(Group::kFemale)) << ',' << row.fn_m << ','
               << row.fn_f << '\n';
        }
        if (a.wfnr) {
          const WfnrReport& w = *a.wfnr;
          wfnr << a.label << ',' << format_double(w.fnr_m) << ','
               << format_double(w.fnr_f) << ',' << format_double(w.wfnr_m)
               << ',' << format_double(w.wfnr_f) << ','
               << format_double(w.gap_fnr) << ',' << format_double(w.gap_wfnr)
               << ',' << csv_opt(w.ratio_fnr) << ',' << csv_opt(w.ratio_wfnr)
               << '\n';
        }
        pcc << a.label << ',' << csv_opt(a.pcc_m) << ',' << csv_opt(a.pcc_f)
            << '\n';
      }
      aggs << "name,labels,male_precision,male_recall,male_f1,"
              "female_precision,female_recall,female_f1,d_precision,"
              "d_recall,d_f1\n";
      for (const AggregateRow& r : result.aggregates) {
        std::string joined;
        for (const auto& l : r.labels) {
          if (!joined.empty()) joined += ';';
          joined += l;
        }
        aggs << r.name << ',' << joined << ',' << format_double(r.male.precision)
             << ',' << format_double(r.male.recall) << ','
             << format_double(r.male.f1) << ','
             << format_double(r.female.precision) << ','
             << format_double(r.female.recall) << ','
             << format_double(r.female.f1) << ','
             << format_double(r.diff.d_precision) << ','
             << format_double(r.diff.d_recall) << ','
             << format_double(r.diff.d_f1) << '\n';
      }
      write_file(dir / "scores.csv", scores.str(), written);
      write_file(dir / "differences.csv", diffs.str(), written);
      write_file(dir / "categories.csv", cats.str(), written);
      write_file(dir / "wfnr.csv", wfnr.str(), written);
      write_file(dir / "correlation.csv", pcc.str(), written);
      write_file(dir / "aggregates.csv", aggs.str(), written);
      if (!result.failures.empty()) {
        std::ostringstream fail;
        fail << "label,error\n";
        for (const LabelFailure& f : result.failures) {
          std::string msg = f.message;
          for (char& c : msg) {
            if (c == ',' || c == '\n') c = ' ';
          }
          fail << f.label << ',' << msg << '\n';
        }
        write_file(dir / "failures.csv", fail.str(), written);
      }
      break;
    }
  }

  for (const LabelAudit& a : result.labels) {
    std::ostringstream fig;
    write_leaning_csv(fig, a);
    write_file(dir / ("leaning_" + label_slug(a.label) + ".csv"), fig.str(),
               written);
  }
  return written;
}

}  // namespace chembias
