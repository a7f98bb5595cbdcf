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


// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "chembias/bias_metrics.h"
#include "chembias/conll_io.h"
#include "chembias/group_extract.h"
#include "chembias/scorer.h"
#include "chembias/template_gen.h"
#include "chembias/text.h"
#include "extraction_fixtures.h"
#include "scoring_oracle.h"
#include "test_util.h"

namespace chembias {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects sub-check failures of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void near(double actual, double expected, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.4f (want %.4f +/- %g)", what.c_str(),
                  actual, expected, tol);
    details_.push_back(buf);
    expect(std::abs(actual - expected) <= tol, buf);
  }
  void note(std::string text) { details_.push_back(std::move(text)); }
  bool ok() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& details() const { return details_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> details_;
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

CategoryErrorTable askdoc_table() {
  std::ifstream in(testing::data_path("askdoc_category_table.csv"));
  return read_category_table_csv(in);
}

void fnr_table(Check& c) {
  const auto start = Clock::now();
  const WfnrReport r = wfnr_report(askdoc_table());
  const double elapsed = seconds_since(start);
  c.near(r.fnr_m, .3948, .005, "FNR male");
  c.near(r.fnr_f, .4064, .005, "FNR female");
  c.near(r.wfnr_m, .6875, .01, "wFNR male");
  c.near(r.wfnr_f, .8088, .01, "wFNR female");
  c.near(r.gap_fnr, .0116, .005, "Gap FNR");
  c.near(r.gap_wfnr, .1213, .01, "Gap wFNR");
  c.near(r.ratio_fnr.value_or(NAN), 1.0294, .005, "Ratio FNR");
  c.near(r.ratio_wfnr.value_or(NAN), 1.1764, .01, "Ratio wFNR");
  c.expect(elapsed < 1.0, "runtime " + format_double(elapsed) + "s >= 1s");
}

void pcc(Check& c) {
  const CategoryErrorTable t = askdoc_table();
  c.near(fnr_frequency_correlation(t, Group::kMale), -.58, .02, "PCC male");
  c.near(fnr_frequency_correlation(t, Group::kFemale), -.26, .02, "PCC female");
}

void contraceptive_leaning(Check& c) {
  const Leaning l = leaning(askdoc_table(), "Contraceptives");
  c.note("fn_m=" + std::to_string(l.fn_m) + " fn_f=" + std::to_string(l.fn_f));
  c.near(l.value, 12.0, .1, "leaning");
}

void published_diff(Check& c) {
  const BiasDiff d = bias_diff({.8375, .6023, .7007, false, false},
                               {.8206, .6249, .7095, false, false});
  const std::string got = format_fixed(d.d_precision, 4) + "," +
                          format_fixed(d.d_recall, 4) + "," +
                          format_fixed(d.d_f1, 4);
  c.note("diff=(" + got + ")");
  c.expect(got == "-0.0169,0.0226,0.0088", "diff " + got);
}

void scorer_oracle(Check& c) {
  const auto start = Clock::now();
  std::mt19937 rng(20260101);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto rc = testing::random_case(rng, 1);
    if (!testing::matches_oracle(score(rc.gold, rc.pred), testing::oracle_score(rc))) {
      ++mismatches;
    }
  }
  const double elapsed = seconds_since(start);
  c.note("1000 corpora, " + std::to_string(mismatches) + " mismatches, " +
         format_fixed(elapsed, 2) + "s");
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
  c.expect(elapsed < 10.0, "runtime " + format_double(elapsed) + "s >= 10s");
}

template <typename T, typename Loader>
T load(std::string_view name, Loader loader) {
  std::ifstream in(testing::data_path(name));
  return loader(in);
}

GenerationConfig toy_config() {
  GenerationConfig config;
  config.templates = load<std::vector<Template>>("toy_templates.tsv", load_templates);
  config.names = load<std::vector<NameEntry>>("toy_names.csv", load_names);
  config.chemicals =
      load<std::vector<ChemicalEntry>>("toy_chemicals.tsv", load_chemicals);
  config.decades = {1960};
  config.genders = {Group::kFemale, Group::kMale};
  return config;
}

// Five published templates, 200 names per gender and decade, 200 chemicals
// (some multi-word), decades 1880-2010.
GenerationConfig full_config() {
  GenerationConfig config;
  std::ifstream in(CHEMBIAS_TEMPLATES);
  config.templates = load_templates(in);
  for (int decade = 1880; decade <= 2010; decade += 10) {
    config.decades.insert(decade);
    for (int rank = 1; rank <= 200; ++rank) {
      const std::string suffix = std::to_string(decade) + "r" + std::to_string(rank);
      config.names.push_back({"Fem" + suffix, Group::kFemale, decade, rank});
      config.names.push_back({"Mal" + suffix, Group::kMale, decade, rank});
    }
  }
  for (int i = 0; i < 200; ++i) {
    std::string surface = "chemical" + std::to_string(i);
    if (i % 7 == 0) surface += " acid";
    config.chemicals.push_back({surface, std::nullopt});
  }
  config.genders = {Group::kFemale, Group::kMale};
  return config;
}

struct FullRun {
  std::size_t female_docs = 0;
  std::size_t male_docs = 0;
  CorpusStats female_stats;
  std::size_t pairs_checked = 0;
  std::size_t pairs_failed = 0;
  double seconds = 0;
};

// Streams the whole full-scale corpus once, keeping only the sampled
// female documents until their male twins arrive.
FullRun run_full_config() {
  const GenerationConfig config = full_config();
  const std::size_t per_gender = config.templates.size() * 200 * 200 * 14;
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> pick(0, per_gender - 1);
  std::unordered_map<std::size_t, Document> sampled;
  while (sampled.size() < 1000) sampled.emplace(pick(rng), Document{});

  FullRun out;
  const auto start = Clock::now();
  std::size_t index = 0;
  generate(config, [&](const Document& doc) {
    const bool female = doc.group == Group::kFemale;
    const std::size_t offset = female ? index : index - per_gender;
    ++index;
    if (female) {
      ++out.female_docs;
      out.female_stats += corpus_stats(doc);
    } else {
      ++out.male_docs;
    }
    auto it = sampled.find(offset);
    if (it == sampled.end()) return;
    if (female) {
      it->second = doc;
    } else {
      ++out.pairs_checked;
      if (!is_counterfactual_pair(it->second, doc)) ++out.pairs_failed;
    }
  });
  out.seconds = seconds_since(start);
  return out;
}

void cardinality(Check& c, const FullRun& full) {
  GenerationConfig toy = toy_config();
  toy.genders = {Group::kFemale};
  std::size_t toy_docs = 0;
  generate(toy, [&](const Document&) { ++toy_docs; });
  c.note("toy=" + std::to_string(toy_docs));
  c.expect(toy_docs == 24, "toy produced " + std::to_string(toy_docs));
  c.note("full female=" + std::to_string(full.female_docs) + " male=" +
         std::to_string(full.male_docs) + " sentences(female)=" +
         std::to_string(full.female_stats.n_sentences) + " in " +
         format_fixed(full.seconds, 1) + "s");
  c.expect(full.female_docs == 2800000, "female count");
  c.expect(full.male_docs == 2800000, "male count");
  c.expect(full.female_stats.n_sentences == 2800000, "female sentences");
  c.expect(full.seconds < 600.0, "runtime >= 10 min");
}

void pairing(Check& c, const FullRun& full) {
  std::vector<Document> docs;
  generate(toy_config(), [&](const Document& d) { docs.push_back(d); });
  const std::size_t half = docs.size() / 2;
  std::size_t toy_failed = 0;
  for (std::size_t i = 0; i < half; ++i) {
    if (!is_counterfactual_pair(docs[i], docs[half + i])) ++toy_failed;
  }
  c.note("toy " + std::to_string(half) + " pairs, sampled " +
         std::to_string(full.pairs_checked) + " pairs");
  c.expect(half == 24 && toy_failed == 0,
           std::to_string(toy_failed) + " toy pairs failed");
  c.expect(full.pairs_checked == 1000, "sampled pairs checked " +
                                            std::to_string(full.pairs_checked));
  c.expect(full.pairs_failed == 0,
           std::to_string(full.pairs_failed) + " sampled pairs failed");
}

void extraction(Check& c) {
  const auto f34 = find_gender_mentions("I [F34]");
  c.expect(f34.size() == 1 && f34[0].gender == Group::kFemale && f34[0].age == 34,
           "I [F34]");
  const auto my = find_gender_mentions("My (23F)");
  c.expect(my.size() == 1 && my[0].pronoun == Pronoun::kMy &&
               my[0].gender == Group::kFemale && my[0].age == 23,
           "My (23F) mention");
  c.expect(assign_group(my) == Group::kUnknown, "My (23F) group");
  c.expect(assign_group(RawPost{"p", "I [M]"}) == Group::kMale, "I [M]");
  std::size_t false_hits = 0;
  for (std::string_view text : testing::kAdversarialNegatives) {
    if (!find_gender_mentions(text).empty()) {
      ++false_hits;
      c.expect(false, "negative matched: " + std::string(text));
    }
  }
  c.note(std::to_string(testing::kAdversarialNegatives.size()) +
         " negatives, " + std::to_string(false_hits) + " matched");
}

void round_trip(Check& c) {
  std::mt19937 rng(9);
  const GenerationConfig base = full_config();
  std::size_t shards = 0;
  std::size_t mismatched = 0;
  while (shards < 100) {
    GenerationConfig config;
    config.templates = base.templates;
    const int decade = 1880 + 10 * static_cast<int>(rng() % 14);
    config.decades = {decade};
    for (const NameEntry& n : base.names) {
      if (n.decade == decade && n.rank <= 3 + static_cast<int>(rng() % 5)) {
        config.names.push_back(n);
      }
    }
    for (std::size_t i = rng() % 20; i < base.chemicals.size(); i += 10 + rng() % 30) {
      config.chemicals.push_back(base.chemicals[i]);
    }
    config.genders = {Group::kFemale, Group::kMale};
    for (const Shard& shard : plan_shards(config)) {
      std::ostringstream written;
      generate_shard(config, shard, [&](const Document& d) { write_document(written, d); });
      std::istringstream in(written.str());
      std::ostringstream rewritten;
      write_conll(rewritten, parse_conll(in));
      if (rewritten.str() != written.str()) ++mismatched;
      ++shards;
    }
  }
  c.note(std::to_string(shards) + " shards, " + std::to_string(mismatched) +
         " differ");
  c.expect(mismatched == 0, std::to_string(mismatched) + " shards differ");
}

void properties(Check& c) {
  constexpr int kInstances = 500;
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  int antisym = 0;
  for (int i = 0; i < kInstances; ++i) {
    const Prf a{u(rng), u(rng), u(rng), false, false};
    const Prf b{u(rng), u(rng), u(rng), false, false};
    const BiasDiff x = bias_diff(a, b), y = bias_diff(b, a);
    antisym += x.d_precision == -y.d_precision && x.d_recall == -y.d_recall &&
               x.d_f1 == -y.d_f1;
  }
  c.expect(antisym == kInstances, "antisymmetry " + std::to_string(antisym));

  int additive = 0;
  for (int i = 0; i < kInstances; ++i) {
    const auto a = testing::random_case(rng, 2);
    auto b = testing::random_case(rng, 2);
    testing::RandomCase joined = a;
    for (Document doc : b.gold.documents) {
      const std::string old_id = doc.doc_id;
      doc.doc_id = "b" + old_id;
      for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        joined.pred.insert({doc.doc_id, s}, *b.pred.find({old_id, s}));
      }
      joined.gold.documents.push_back(std::move(doc));
    }
    const auto ra = score(a.gold, a.pred), rb = score(b.gold, b.pred);
    const auto rj = score(joined.gold, joined.pred);
    bool ok = rj.overall.counts == ra.overall.counts + rb.overall.counts;
    for (Group g : kAllGroups) ok = ok && rj.at(g).counts == ra.at(g).counts + rb.at(g).counts;
    additive += ok;
  }
  c.expect(additive == kInstances, "additivity " + std::to_string(additive));

  int mean_fnr = 0;
  for (int i = 0; i < kInstances; ++i) {
    const std::size_t k = 1 + rng() % 10;
    const std::size_t scale_m = 1 + rng() % 4, scale_f = 1 + rng() % 4;
    std::vector<CategoryRow> rows;
    double mean_m = 0, mean_f = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t base = 1 + rng() % 50;
      CategoryRow row{"c" + std::to_string(j), base * scale_m, 0, base * scale_f, 0};
      row.fn_m = rng() % (row.total_m + 1);
      row.fn_f = rng() % (row.total_f + 1);
      mean_m += *row.fnr(Group::kMale) / static_cast<double>(k);
      mean_f += *row.fnr(Group::kFemale) / static_cast<double>(k);
      rows.push_back(row);
    }
    const CategoryErrorTable t(rows);
    mean_fnr += std::abs(weighted_fnr(t, Group::kMale).value - mean_m) < 1e-9 &&
                std::abs(weighted_fnr(t, Group::kFemale).value - mean_f) < 1e-9;
  }
  c.expect(mean_fnr == kInstances, "equal prevalence " + std::to_string(mean_fnr));

  int lean_ok = 0, lean_n = 0;
  while (lean_n < kInstances) {
    const std::size_t fn_m = rng() % 100, fn_f = rng() % 100;
    if (fn_m + fn_f == 0) continue;
    ++lean_n;
    const Leaning l = leaning(CategoryErrorTable({{"c", 100, fn_m, 100, fn_f}}), "c");
    lean_ok += std::abs(l.value) >= 1.0 && (l.value > 0) == (fn_f >= fn_m);
  }
  c.expect(lean_ok == kInstances, "leaning " + std::to_string(lean_ok));
  c.note(std::to_string(kInstances) + " instances per property");
}

}  // namespace
}  // namespace chembias

int main() {
  using namespace chembias;
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Check&)> run;
  };
  FullRun full;
  bool full_done = false;
  auto full_run = [&]() -> const FullRun& {
    if (!full_done) {
      full = run_full_config();
      full_done = true;
    }
    return full;
  };
  const std::vector<Criterion> criteria = {
      {1, "FNR/wFNR table from category counts", fnr_table},
      {2, "Total/FNR correlation row", pcc},
      {3, "contraceptives leaning", contraceptive_leaning},
      {4, "difference arithmetic", published_diff},
      {5, "scorer matches brute-force oracle", scorer_oracle},
      {6, "generation cardinality", [&](Check& c) { cardinality(c, full_run()); }},
      {7, "counterfactual pairing", [&](Check& c) { pairing(c, full_run()); }},
      {8, "gender extraction fixtures", extraction},
      {9, "conll round-trip of generated shards", round_trip},
      {10, "metric property suite", properties},
  };
  int failed = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %2d %s | %s", check.ok() ? "PASS" : "FAIL", criterion.id,
                criterion.name, join(check.details()).c_str());
    if (!check.ok()) {
      ++failed;
      std::printf(" | failed: %s", join(check.failures()).c_str());
    }
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
