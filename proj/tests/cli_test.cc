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


#include "chembias/cli.h"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"

namespace chembias {
namespace {

using testing::data_path;
using testing::read_file;

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> generate_args(const std::filesystem::path& out) {
  return {"generate",
          "--templates", data_path("toy_templates.tsv").string(),
          "--names", data_path("toy_names.csv").string(),
          "--chemicals", data_path("toy_chemicals.tsv").string(),
          "--genders", "female",
          "--output-dir", out.string()};
}

TEST(CliTest, HelpExitsZero) {
  for (const char* cmd : {"generate", "extract-groups", "stats", "score", "audit"}) {
    const CliRun r = run({cmd, "--help"});
    EXPECT_EQ(r.status, 0) << cmd;
    EXPECT_NE(r.out.find("--"), std::string::npos) << cmd;
  }
  EXPECT_EQ(run({"--help"}).status, 0);
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"frobnicate"}).status, 2);
  EXPECT_EQ(run({"score", "--gold", "x"}).status, 2);
  EXPECT_EQ(run({"score", "--gold", "x", "--pred", "y", "--format", "xml"}).status, 2);
}

TEST(CliTest, GenerateToyConfigDeterministically) {
  const auto dir = testing::temp_dir("cli_generate");
  const CliRun first = run(generate_args(dir / "a"));
  ASSERT_EQ(first.status, 0) << first.err;
  EXPECT_EQ(first.out,
            "corpus,n_mentions,n_sentences,n_words\n"
            "synthetic_female_1960.conll,24,24,248\n"
            "total,24,24,248\n");
  auto args = generate_args(dir / "b");
  args.insert(args.end(), {"--jobs", "3"});
  ASSERT_EQ(run(args).status, 0);
  EXPECT_EQ(read_file(dir / "a" / "synthetic_female_1960.conll"),
            read_file(dir / "b" / "synthetic_female_1960.conll"));
}

TEST(CliTest, GenerateMissingNamesFile) {
  auto args = generate_args(testing::temp_dir("cli_missing"));
  args[4] = "/nonexistent/names.csv";
  const CliRun r = run(args);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("/nonexistent/names.csv"), std::string::npos);
}

TEST(CliTest, GenerateFromConfigFile) {
  const auto dir = testing::temp_dir("cli_config");
  std::ofstream(dir / "run.toml")
      << "[generate]\n"
      << "templates = \"" << data_path("toy_templates.tsv").string() << "\"\n"
      << "names = \"" << data_path("toy_names.csv").string() << "\"\n"
      << "chemicals = \"" << data_path("toy_chemicals.tsv").string() << "\"\n"
      << "output-dir = \"" << (dir / "out").string() << "\"\n";
  const CliRun r = run({"--config", (dir / "run.toml").string(), "generate"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("total,48,48,496"), std::string::npos);
}

TEST(CliTest, ExtractGroups) {
  const CliRun r = run({"extract-groups", "--input", data_path("posts.jsonl").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.err, "group,count\nmale,1\nfemale,1\nunknown,1\n");
  EXPECT_NE(r.out.find(R"("post_id":"a3","group":"unknown")"), std::string::npos);
}

TEST(CliTest, ExtractGroupsEmptyAndMalformed) {
  const auto dir = testing::temp_dir("cli_extract");
  std::ofstream(dir / "empty.jsonl");
  const CliRun empty = run({"extract-groups", "--input", (dir / "empty.jsonl").string(),
                         "--output", (dir / "out.jsonl").string()});
  EXPECT_EQ(empty.status, 0);
  EXPECT_EQ(empty.out, "group,count\nmale,0\nfemale,0\nunknown,0\n");

  std::ofstream(dir / "bad.jsonl") << R"({"post_id":"a","text":"x"})" << "\n{oops\n";
  const CliRun bad = run({"extract-groups", "--input", (dir / "bad.jsonl").string(),
                       "--output", (dir / "out.jsonl").string()});
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;

  std::ofstream(dir / "dup.jsonl") << R"({"post_id":"a","text":"x"})" << "\n"
                                   << R"({"post_id":"a","text":"y"})" << "\n";
  EXPECT_EQ(run({"extract-groups", "--input", (dir / "dup.jsonl").string(),
                 "--output", (dir / "out.jsonl").string()})
                .status,
            1);
}

TEST(CliTest, StatsByGroup) {
  const std::string gold = data_path("gold.conll").string();
  const CliRun r = run({"stats", "--by-group", gold});
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "corpus,n_mentions,n_sentences,n_words\n" + gold + ",7,6,31\n" +
                       gold + ":male,2,2,11\n" + gold + ":female,5,3,17\n" + gold +
                       ":unknown,0,1,3\n");
}

TEST(CliTest, ScoreFormats) {
  const std::string gold = data_path("gold.conll").string();
  const std::string pred = data_path("pred_a.jsonl").string();
  const CliRun csv = run({"score", "--gold", gold, "--pred", pred, "--format", "csv"});
  ASSERT_EQ(csv.status, 0) << csv.err;
  EXPECT_NE(csv.out.find("female,2,1,3,"), std::string::npos);
  const CliRun json = run({"score", "--gold", gold, "--pred", pred});
  EXPECT_NE(json.out.find("\"difference\""), std::string::npos);
  const CliRun md = run({"score", "--gold", gold, "--pred", pred, "--format", "markdown"});
  EXPECT_NE(md.out.find("| female | 2 | 1 | 3 |"), std::string::npos);
}

TEST(CliTest, ScoreDataErrorsExitOne) {
  const auto dir = testing::temp_dir("cli_score");
  std::ofstream(dir / "short.jsonl")
      << R"({"doc_id":"p1","sentence_idx":0,"tags":["O"]})" << "\n";
  const CliRun r = run({"score", "--gold", data_path("gold.conll").string(), "--pred",
                     (dir / "short.jsonl").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("LengthMismatch"), std::string::npos);
}

TEST(CliTest, AuditWritesReportAndFailsOnBadLabel) {
  const auto dir = testing::temp_dir("cli_audit");
  const std::string gold = data_path("gold.conll").string();
  const std::string a = "a=" + data_path("pred_a.jsonl").string();
  const std::string b = "b=" + data_path("pred_b.jsonl").string();
  const std::string lex = data_path("lexicon.tsv").string();
  const CliRun ok = run({"audit", "--gold", gold, "--pred", a, "--pred", b, "--lexicon",
                      lex, "--output-dir", (dir / "ok").string(), "--jobs", "2"});
  ASSERT_EQ(ok.status, 0) << ok.err;
  const std::string json = read_file(dir / "ok" / "audit.json");
  EXPECT_NE(json.find("\"AVERAGE\""), std::string::npos);
  const CliRun again = run({"audit", "--gold", gold, "--pred", a, "--pred", b,
                         "--lexicon", lex, "--output-dir", (dir / "again").string()});
  EXPECT_EQ(read_file(dir / "again" / "audit.json"), json);

  std::ofstream(dir / "broken.jsonl") << "not json\n";
  const CliRun bad = run({"audit", "--gold", gold, "--pred", a, "--pred",
                       "c=" + (dir / "broken.jsonl").string(), "--output-dir",
                       (dir / "bad").string(), "--format", "csv"});
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("c: "), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "bad" / "leaning_a.csv"));

  EXPECT_EQ(run({"audit", "--gold", gold, "--pred", a, "--pred", a}).status, 2);
  EXPECT_EQ(run({"audit", "--gold", gold, "--pred", "nolabel"}).status, 2);
}

}  // namespace
}  // namespace chembias
