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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "chembias/error.h"
#include "test_util.h"

namespace chembias {
namespace {

using testing::data_path;
using testing::read_file;

ConllFile load_gold() {
  std::ifstream in(data_path("gold.conll"));
  return parse_conll(in);
}

CategoryLexicon load_lex() {
  std::ifstream in(data_path("lexicon.tsv"));
  return load_lexicon(in);
}

PredictionSet load_pred(std::string_view name) {
  std::ifstream in(data_path(name));
  return parse_predictions(in);
}

// One single-token mention per document; the first fn of each group and
// category are missed by the predictions.
std::pair<ConllFile, PredictionSet> inject(const CategoryErrorTable& table,
                                           CategoryLexicon& lexicon) {
  ConllFile gold;
  PredictionSet pred;
  std::size_t next_id = 0;
  std::size_t c = 0;
  for (const CategoryRow& row : table.rows()) {
    const std::string surface = "chem" + std::to_string(c++);
    lexicon.add(surface, row.category);
    for (Group g : {Group::kMale, Group::kFemale}) {
      for (std::size_t i = 0; i < row.total(g); ++i) {
        Document doc;
        doc.doc_id = "d" + std::to_string(next_id++);
        doc.group = g;
        doc.sentences.emplace_back(std::vector<Token>{
            Token("took", BioTag::outside()), Token(surface, BioTag::begin())});
        pred.insert({doc.doc_id, 0},
                    {BioTag::outside(),
                     i < row.fn(g) ? BioTag::outside() : BioTag::begin()});
        gold.documents.push_back(std::move(doc));
      }
    }
  }
  return {std::move(gold), std::move(pred)};
}

TEST(AuditLabelTest, PerfectPredictions) {
  const ConllFile gold = load_gold();
  const LabelAudit a =
      audit_label("gold", gold, predictions_from_gold(gold), load_lex());
  EXPECT_EQ(a.diff.d_precision, 0.0);
  EXPECT_EQ(a.diff.d_recall, 0.0);
  EXPECT_EQ(a.diff.d_f1, 0.0);
  EXPECT_EQ(a.false_positives, 0u);
  EXPECT_EQ(a.false_negatives, 0u);
  EXPECT_TRUE(a.leanings.empty());
  for (const CategoryRow& row : a.categories.rows()) {
    EXPECT_EQ(row.fn_m + row.fn_f, 0u);
  }
}

TEST(AuditLabelTest, InjectedTableIsReproduced) {
  std::ifstream in(data_path("askdoc_category_table.csv"));
  const CategoryErrorTable table = read_category_table_csv(in);
  CategoryLexicon lexicon;
  auto [gold, pred] = inject(table, lexicon);
  const LabelAudit a = audit_label("askdoc", gold, pred, lexicon);
  ASSERT_EQ(a.categories.rows().size(), table.rows().size());
  const WfnrReport expected = wfnr_report(table);
  ASSERT_TRUE(a.wfnr.has_value());
  EXPECT_NEAR(a.wfnr->fnr_m, expected.fnr_m, 1e-12);
  EXPECT_NEAR(a.wfnr->wfnr_f, expected.wfnr_f, 1e-12);
  EXPECT_NEAR(a.wfnr->fnr_m, .3948, .005);
  EXPECT_NEAR(a.wfnr->fnr_f, .4064, .005);
  EXPECT_NEAR(a.wfnr->wfnr_m, .6875, .01);
  ASSERT_TRUE(a.pcc_m && a.pcc_f);
  EXPECT_NEAR(*a.pcc_m, -.58, .02);
  EXPECT_NEAR(*a.pcc_f, -.26, .02);
  EXPECT_EQ(a.scores.at(Group::kMale).counts.fn, table.fn(Group::kMale));
  EXPECT_EQ(a.scores.at(Group::kFemale).counts.fn, table.fn(Group::kFemale));
}

std::vector<PredictionInput> two_inputs() {
  return {{"a", data_path("pred_a.jsonl")}, {"b", data_path("pred_b.jsonl")}};
}

TEST(RunAuditTest, DefaultAverageIsMeanOfLabels) {
  const auto inputs = two_inputs();
  const AuditResult r =
      run_audit(load_gold(), inputs, load_lex(), DecodeMode::kLenient, {}, 2);
  ASSERT_EQ(r.labels.size(), 2u);
  EXPECT_EQ(r.labels[0].label, "a");
  ASSERT_EQ(r.aggregates.size(), 1u);
  const AggregateRow& avg = r.aggregates[0];
  EXPECT_EQ(avg.name, "AVERAGE");
  const Prf& ma = r.labels[0].scores.at(Group::kMale).prf;
  const Prf& mb = r.labels[1].scores.at(Group::kMale).prf;
  EXPECT_NEAR(avg.male.recall, (ma.recall + mb.recall) / 2, 1e-12);
  EXPECT_TRUE(r.failures.empty());
}

TEST(RunAuditTest, ParallelMatchesSerial) {
  const auto inputs = two_inputs();
  const auto gold = load_gold();
  const auto serial =
      audit_to_json(run_audit(gold, inputs, load_lex(), DecodeMode::kLenient, {}, 1));
  const auto parallel =
      audit_to_json(run_audit(gold, inputs, load_lex(), DecodeMode::kLenient, {}, 4));
  EXPECT_EQ(serial.dump(), parallel.dump());
}

TEST(RunAuditTest, FailuresDoNotStopOtherLabels) {
  std::vector<PredictionInput> inputs = two_inputs();
  inputs.push_back({"missing", data_path("no_such_file.jsonl")});
  const std::vector<AggregateSpec> specs{{"A_only", "a"}, {"none", "zzz"}};
  const AuditResult r =
      run_audit(load_gold(), inputs, load_lex(), DecodeMode::kLenient, specs);
  EXPECT_EQ(r.labels.size(), 2u);
  ASSERT_EQ(r.failures.size(), 2u);
  EXPECT_EQ(r.failures[0].label, "missing");
  EXPECT_EQ(r.failures[1].label, "aggregate:none");
  ASSERT_EQ(r.aggregates.size(), 1u);
  EXPECT_EQ(r.aggregates[0].labels, std::vector<std::string>{"a"});
}

TEST(AuditJsonTest, StableKeys) {
  const auto inputs = two_inputs();
  const auto j = audit_to_json(
      run_audit(load_gold(), inputs, load_lex(), DecodeMode::kLenient, {}));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"decode_mode", "conventions", "labels",
                                            "aggregates", "failures"}));
  std::vector<std::string> label_keys;
  for (const auto& [k, v] : j["labels"][0].items()) label_keys.push_back(k);
  EXPECT_EQ(label_keys,
            (std::vector<std::string>{"label", "scores", "difference", "errors",
                                      "categories", "leaning", "wfnr", "pcc",
                                      "notes"}));
  const auto& lean = j["labels"][0]["leaning"][0];
  EXPECT_TRUE(lean["leaning"].is_null());
  EXPECT_EQ(lean["one_sided"], "female");
}

TEST(ScoreCsvTest, Layout) {
  const ConllFile gold = load_gold();
  std::ostringstream out;
  write_score_csv(out, score(gold, load_pred("pred_a.jsonl")));
  EXPECT_EQ(out.str(),
            "group,tp,fp,fn,precision,recall,f1,flags\n"
            "male,2,1,0,0.6666666666666666,1,0.8,\n"
            "female,2,1,3,0.6666666666666666,0.4,0.5,\n"
            "unknown,0,0,0,1,1,1,precision_undefined;recall_undefined\n"
            "overall,4,2,3,0.6666666666666666,0.5714285714285714,"
            "0.6153846153846153,\n");
}

TEST(WriteAuditTest, WritesEveryFormat) {
  const auto inputs = two_inputs();
  const AuditResult r =
      run_audit(load_gold(), inputs, load_lex(), DecodeMode::kLenient, {});
  const auto dir = testing::temp_dir("write_audit");
  write_audit(r, ReportFormat::kJson, dir / "json");
  write_audit(r, ReportFormat::kCsv, dir / "csv");
  write_audit(r, ReportFormat::kMarkdown, dir / "md");
  EXPECT_TRUE(std::filesystem::exists(dir / "json" / "audit.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "md" / "audit.md"));
  for (const char* f : {"scores.csv", "differences.csv", "categories.csv",
                        "wfnr.csv", "correlation.csv", "aggregates.csv",
                        "leaning_a.csv", "leaning_b.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "csv" / f)) << f;
  }
  EXPECT_EQ(read_file(dir / "csv" / "leaning_a.csv"),
            "category,leaning,fn_m,fn_f\nAnalgesics,inf,0,1\n"
            "Contraceptives,inf,0,1\nMinerals,inf,0,1\n");
  const std::string md = read_file(dir / "md" / "audit.md");
  EXPECT_NE(md.find("female - male"), std::string::npos);
  EXPECT_NE(md.find("| a | 0.6667 | 1.0000 | 0.8000 | 0.6667 | 0.4000 | "
                    "0.5000 | 0.0000 | -0.6000 | -0.3000 |"),
            std::string::npos);
}

TEST(LabelSlugTest, Sanitizes) {
  EXPECT_EQ(label_slug("CDR + PubMed/Word"), "CDR___PubMed_Word");
  EXPECT_EQ(label_slug(""), "_");
}

}  // namespace
}  // namespace chembias
