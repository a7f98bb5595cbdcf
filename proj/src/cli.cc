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

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "chembias/bias_metrics.h"
#include "chembias/conll_io.h"
#include "chembias/error.h"
#include "chembias/group_extract.h"
#include "chembias/report.h"
#include "chembias/scorer.h"
#include "chembias/template_gen.h"
#include "chembias/text.h"

namespace chembias {
namespace {

namespace fs = std::filesystem;

// A usage or configuration problem: maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  return in;
}

template <typename T, typename Loader>
T load_file(const fs::path& path, Loader loader) {
  std::ifstream in = open_input(path);
  try {
    return loader(in);
  } catch (const Error& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

std::vector<Group> parse_genders(const std::vector<std::string>& values) {
  std::vector<Group> out;
  for (const auto& v : values) {
    const auto g = parse_group(v);
    if (!g || *g == Group::kUnknown) {
      throw UsageError("invalid gender '" + v + "' (expected male or female)");
    }
    out.push_back(*g);
  }
  return out;
}

DecodeMode decode_mode_or_throw(const std::string& text) {
  const auto mode = parse_decode_mode(text);
  if (!mode) throw UsageError("invalid mode '" + text + "'");
  return *mode;
}

ReportFormat format_or_throw(const std::string& text) {
  const auto format = parse_report_format(text);
  if (!format) throw UsageError("invalid format '" + text + "'");
  return *format;
}

// "NAME=VALUE" -> (NAME, VALUE).
std::pair<std::string, std::string> split_assignment(const std::string& text,
                                                     std::string_view what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError(std::string(what) + " must be NAME=VALUE, got '" + text +
                     "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

ConllFile load_gold(const fs::path& path) {
  std::ifstream in = open_input(path);
  return parse_conll(in);
}

struct GenerateOptions {
  std::string templates;
  std::string names;
  std::string chemicals;
  std::string output_dir = "synthetic";
  std::vector<int> decades;
  std::vector<std::string> genders{"female", "male"};
  unsigned jobs = 1;
};

int cmd_generate(const GenerateOptions& opt, std::ostream& out) {
  GenerationConfig config;
  config.templates = load_file<std::vector<Template>>(opt.templates, load_templates);
  config.names = load_file<std::vector<NameEntry>>(opt.names, load_names);
  config.chemicals =
      load_file<std::vector<ChemicalEntry>>(opt.chemicals, load_chemicals);
  config.genders = parse_genders(opt.genders);
  if (opt.decades.empty()) {
    for (const NameEntry& n : config.names) config.decades.insert(n.decade);
  } else {
    config.decades.insert(opt.decades.begin(), opt.decades.end());
  }
  try {
    validate_config(config);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  const fs::path dir(opt.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " +
                                    ec.message());
  }

  const std::vector<Shard> shards = plan_shards(config);
  std::vector<CorpusStats> stats(shards.size());
  std::vector<std::string> failures(shards.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < shards.size(); i = next++) {
      try {
        const fs::path path = dir / shards[i].file_name();
        std::ofstream file(path, std::ios::binary);
        generate_shard(config, shards[i], [&](const Document& doc) {
          write_document(file, doc);
          stats[i] += corpus_stats(doc);
        });
        file.close();
        if (!file) throw Error(ErrorCode::kIo, "cannot write " + path.string());
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    const unsigned n = std::max(1u, std::min<unsigned>(
                                        opt.jobs, static_cast<unsigned>(shards.size())));
    for (unsigned t = 1; t < n; ++t) threads.emplace_back(worker);
    worker();
  }
  for (const std::string& f : failures) {
    if (!f.empty()) throw Error(ErrorCode::kIo, f);
  }

  out << corpus_stats_csv_header() << '\n';
  CorpusStats total;
  for (std::size_t i = 0; i < shards.size(); ++i) {
    out << corpus_stats_csv_row(shards[i].file_name(), stats[i]) << '\n';
    total += stats[i];
  }
  out << corpus_stats_csv_row("total", total) << '\n';
  return kExitOk;
}

struct ExtractOptions {
  std::string input;
  std::string output = "-";
};

int cmd_extract_groups(const ExtractOptions& opt, std::ostream& out,
                       std::ostream& err) {
  std::ifstream in = open_input(opt.input);
  std::ofstream file;
  const bool to_stdout = opt.output == "-";
  if (!to_stdout) {
    file.open(opt.output, std::ios::binary);
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + opt.output);
  }
  std::ostream& records = to_stdout ? out : file;

  std::map<Group, std::size_t> counts{
      {Group::kMale, 0}, {Group::kFemale, 0}, {Group::kUnknown, 0}};
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    RawPost post;
    try {
      post = parse_post(line);
    } catch (const Error& e) {
      throw Error(e.code(), e.message(), line_no);
    }
    if (!seen.insert(post.post_id).second) {
      throw Error(ErrorCode::kDuplicateKey,
                  "duplicate post_id '" + post.post_id + "'", line_no);
    }
    const nlohmann::ordered_json record = extraction_record(post);
    ++counts[*parse_group(record["group"].get<std::string>())];
    records << record.dump() << '\n';
  }
  if (!to_stdout) {
    file.close();
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + opt.output);
  }

  std::ostream& summary = to_stdout ? err : out;
  summary << "group,count\n";
  for (Group g : kAllGroups) summary << group_name(g) << ',' << counts[g] << '\n';
  return kExitOk;
}

struct StatsOptions {
  std::vector<std::string> files;
  bool by_group = false;
};

int cmd_stats(const StatsOptions& opt, std::ostream& out) {
  out << corpus_stats_csv_header() << '\n';
  for (const std::string& path : opt.files) {
    std::ifstream in = open_input(path);
    ConllReader reader(in);
    CorpusStats total;
    std::map<Group, CorpusStats> per_group;
    while (auto doc = reader.next()) {
      const CorpusStats s = corpus_stats(*doc);
      total += s;
      per_group[doc->group_or_unknown()] += s;
    }
    out << corpus_stats_csv_row(path, total) << '\n';
    if (opt.by_group) {
      for (Group g : kAllGroups) {
        out << corpus_stats_csv_row(path + ":" + std::string(group_name(g)),
                                    per_group[g])
            << '\n';
      }
    }
  }
  return kExitOk;
}

struct ScoreOptions {
  std::string gold;
  std::string pred;
  std::string format = "json";
  std::string mode = "lenient";
};

int cmd_score(const ScoreOptions& opt, std::ostream& out) {
  const ReportFormat format = format_or_throw(opt.format);
  const DecodeMode mode = decode_mode_or_throw(opt.mode);
  std::ifstream pred_in = open_input(opt.pred);
  const ConllFile gold = load_gold(opt.gold);
  const PredictionSet pred = parse_predictions(pred_in);
  const GroupScoreReport report = score(gold, pred, mode);
  switch (format) {
    case ReportFormat::kJson:
      out << score_to_json(report).dump(2) << '\n';
      break;
    case ReportFormat::kCsv:
      write_score_csv(out, report);
      break;
    case ReportFormat::kMarkdown:
      out << render_score_markdown(report);
      break;
  }
  return kExitOk;
}

struct AuditOptions {
  std::string gold;
  std::vector<std::string> preds;
  std::string lexicon;
  std::string output_dir = "audit";
  std::string format = "json";
  std::string mode = "lenient";
  std::vector<std::string> aggregates;
  unsigned jobs = 1;
};

int cmd_audit(const AuditOptions& opt, std::ostream& out, std::ostream& err) {
  const ReportFormat format = format_or_throw(opt.format);
  const DecodeMode mode = decode_mode_or_throw(opt.mode);
  std::vector<PredictionInput> inputs;
  std::set<std::string> labels;
  for (const std::string& p : opt.preds) {
    auto [label, path] = split_assignment(p, "--pred");
    if (!labels.insert(label).second) {
      throw UsageError("duplicate label '" + label + "'");
    }
    if (!fs::is_regular_file(path)) throw UsageError("cannot open " + path);
    inputs.push_back({label, path});
  }
  std::vector<AggregateSpec> aggregates;
  for (const std::string& a : opt.aggregates) {
    auto [name, pattern] = split_assignment(a, "--aggregate");
    aggregates.push_back({name, pattern});
  }
  CategoryLexicon lexicon;
  if (!opt.lexicon.empty()) {
    std::ifstream in = open_input(opt.lexicon);
    lexicon = load_lexicon(in);
  }
  const ConllFile gold = load_gold(opt.gold);

  const AuditResult result =
      run_audit(gold, inputs, lexicon, mode, aggregates, opt.jobs);
  for (const fs::path& p : write_audit(result, format, opt.output_dir)) {
    out << p.string() << '\n';
  }
  for (const LabelFailure& f : result.failures) {
    err << "error: " << f.label << ": " << f.message << '\n';
  }
  return result.failures.empty() ? kExitOk : kExitFailure;
}

void add_mode_option(CLI::App* cmd, std::string& mode) {
  cmd->add_option("--mode", mode, "BIO decoding: lenient or strict")
      ->check(CLI::IsMember({"lenient", "strict"}))
      ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Gender bias audit toolkit for chemical named entity recognition",
               "chembias"};
  app.set_config("--config", "",
                 "Read options from a TOML/INI file, one [section] per "
                 "subcommand");
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand(
      "generate", "Write sharded synthetic .conll files from templates");
  generate->add_option("--templates", gen.templates, "TSV: id<TAB>text")
      ->required();
  generate->add_option("--names", gen.names, "CSV: name,gender,decade,rank")
      ->required();
  generate->add_option("--chemicals", gen.chemicals, "TSV: surface[<TAB>id]")
      ->required();
  generate->add_option("--output-dir", gen.output_dir)->capture_default_str();
  generate->add_option("--decades", gen.decades,
                       "Decades to generate (default: all in the names file)");
  generate->add_option("--genders", gen.genders)->capture_default_str();
  generate->add_option("--jobs", gen.jobs, "Shards written in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ExtractOptions ext;
  auto* extract = app.add_subcommand(
      "extract-groups", "Assign a gender group to JSON-lines posts");
  extract->add_option("--input", ext.input, "JSON lines with post_id, text")
      ->required();
  extract->add_option("--output", ext.output, "Output JSON lines, - for stdout")
      ->capture_default_str();

  StatsOptions st;
  auto* stats = app.add_subcommand("stats", "Mention, sentence and word counts");
  stats->add_option("files", st.files, ".conll files")->required();
  stats->add_flag("--by-group", st.by_group, "Also break counts down by group");

  ScoreOptions sc;
  auto* score_cmd =
      app.add_subcommand("score", "Per-group precision, recall and F1");
  score_cmd->add_option("--gold", sc.gold)->required();
  score_cmd->add_option("--pred", sc.pred, "Predictions JSON lines")
      ->required();
  score_cmd->add_option("--format", sc.format)
      ->check(CLI::IsMember({"json", "csv", "markdown"}))
      ->capture_default_str();
  add_mode_option(score_cmd, sc.mode);

  AuditOptions au;
  auto* audit = app.add_subcommand(
      "audit", "Scores, differences and error analysis for several runs");
  audit->add_option("--gold", au.gold)->required();
  audit->add_option("--pred", au.preds, "LABEL=PATH, repeatable")->required();
  audit->add_option("--lexicon", au.lexicon, "TSV: surface<TAB>category");
  audit->add_option("--output-dir", au.output_dir)->capture_default_str();
  audit->add_option("--format", au.format)
      ->check(CLI::IsMember({"json", "csv", "markdown"}))
      ->capture_default_str();
  add_mode_option(audit, au.mode);
  audit->add_option("--aggregate", au.aggregates,
                    "NAME=REGEX: mean over labels fully matching REGEX");
  audit->add_option("--jobs", au.jobs, "Labels audited in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (extract->parsed()) return cmd_extract_groups(ext, out, err);
    if (stats->parsed()) return cmd_stats(st, out);
    if (score_cmd->parsed()) return cmd_score(sc, out);
    if (audit->parsed()) return cmd_audit(au, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace chembias
