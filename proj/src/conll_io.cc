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

#include "chembias/conll_io.h"

#include <set>
#include <string_view>
#include <utility>

#include "chembias/error.h"
#include "chembias/text.h"
#include "json.hpp"

namespace chembias {
namespace {

constexpr std::string_view kDocHeader = "#doc";
constexpr std::string_view kBom = "\xEF\xBB\xBF";

bool is_comment(std::string_view line) {
  return !line.empty() && line.front() == '#' &&
         line.find('\t') == std::string_view::npos;
}

bool is_header(std::string_view line) {
  return is_comment(line) && line.starts_with(kDocHeader) &&
         (line.size() == kDocHeader.size() ||
          is_space(line[kDocHeader.size()]));
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

void check_attr(std::string_view what, const std::string& s) {
  if (s.empty() || contains_space(s)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be non-empty and whitespace-free: '" +
                    s + "'");
  }
}

}  // namespace

ConllReader::ConllReader(std::istream& in) : in_(in) {}

bool ConllReader::read_line() {
  if (eof_ || !std::getline(in_, line_)) {
    eof_ = true;
    return false;
  }
  ++line_no_;
  if (line_no_ == 1 && std::string_view(line_).starts_with(kBom)) {
    line_.erase(0, kBom.size());
  }
  if (!line_.empty() && line_.back() == '\r') line_.pop_back();
  return true;
}

Document ConllReader::parse_header(std::string_view line) const {
  const auto fields = split_whitespace(line.substr(kDocHeader.size()));
  if (fields.empty()) {
    throw Error(ErrorCode::kParseError, "document header without doc id",
                line_no_);
  }
  Document doc;
  doc.doc_id = std::string(fields[0]);
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const std::string_view field = fields[i];
    const std::size_t eq = field.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == field.size()) {
      throw Error(ErrorCode::kParseError,
                  "malformed header attribute '" + std::string(field) + "'",
                  line_no_);
    }
    const std::string key(field.substr(0, eq));
    const std::string_view value = field.substr(eq + 1);
    if (key == "group") {
      if (doc.group) {
        throw Error(ErrorCode::kParseError, "duplicate group attribute",
                    line_no_);
      }
      doc.group = parse_group(value);
      if (!doc.group) {
        throw Error(ErrorCode::kParseError,
                    "unknown group '" + std::string(value) + "'", line_no_);
      }
      continue;
    }
    if (!doc.source_meta.emplace(key, std::string(value)).second) {
      throw Error(ErrorCode::kParseError, "duplicate attribute '" + key + "'",
                  line_no_);
    }
  }
  return doc;
}

std::optional<Document> ConllReader::next() {
  while (!pending_header_) {
    if (!read_line()) return std::nullopt;
    if (is_header(line_)) {
      pending_header_ = true;
    } else if (is_comment(line_)) {
      preamble_.push_back(line_);
    } else if (!is_blank(line_)) {
      // Column errors take precedence so that a malformed first row is
      // reported as such.
      if (split(line_, '\t').size() != 2) {
        throw Error(ErrorCode::kParseError,
                    "expected 2 tab-separated columns, got " +
                        std::to_string(split(line_, '\t').size()),
                    line_no_);
      }
      throw Error(ErrorCode::kParseError,
                  "token row before any '#doc' header", line_no_);
    }
  }

  Document doc = parse_header(line_);
  header_line_ = line_no_;
  pending_header_ = false;
  std::vector<Token> tokens;
  auto flush = [&] {
    if (!tokens.empty()) {
      doc.sentences.emplace_back(std::move(tokens));
      tokens.clear();
    }
  };

  while (read_line()) {
    if (is_header(line_)) {
      pending_header_ = true;
      break;
    }
    if (is_comment(line_)) {
      doc.comments.push_back(line_);
      continue;
    }
    if (is_blank(line_)) {
      flush();
      continue;
    }
    const auto cols = split(line_, '\t');
    if (cols.size() != 2) {
      throw Error(ErrorCode::kParseError,
                  "expected 2 tab-separated columns, got " +
                      std::to_string(cols.size()),
                  line_no_);
    }
    try {
      tokens.emplace_back(std::string(cols[0]), BioTag::parse(cols[1]));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError, e.message(), line_no_);
    }
  }
  flush();
  return doc;
}

ConllFile parse_conll(std::istream& in) {
  ConllReader reader(in);
  ConllFile file;
  std::set<std::string> seen;
  while (auto doc = reader.next()) {
    if (!seen.insert(doc->doc_id).second) {
      throw Error(ErrorCode::kParseError,
                  "duplicate doc id '" + doc->doc_id + "'",
                  reader.header_line());
    }
    file.documents.push_back(std::move(*doc));
  }
  file.comments = reader.preamble();
  return file;
}

void write_document(std::ostream& out, const Document& doc) {
  check_attr("doc id", doc.doc_id);
  out << kDocHeader << ' ' << doc.doc_id;
  if (doc.group) out << " group=" << group_name(*doc.group);
  for (const auto& [key, value] : doc.source_meta) {
    check_attr("attribute key", key);
    check_attr("attribute value", value);
    if (key == "group" || key.find('=') != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "reserved attribute key " + key);
    }
    out << ' ' << key << '=' << value;
  }
  out << '\n';
  for (const std::string& comment : doc.comments) {
    if (!is_comment(comment) || is_header(comment) ||
        comment.find('\n') != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "invalid comment: " + comment);
    }
    out << comment << '\n';
  }
  for (const Sentence& sentence : doc.sentences) {
    for (const Token& token : sentence.tokens()) {
      out << token.text() << '\t' << token.tag().str() << '\n';
    }
    out << '\n';
  }
}

void write_conll(std::ostream& out, const ConllFile& file) {
  for (const std::string& comment : file.comments) {
    if (!is_comment(comment) || is_header(comment) ||
        comment.find('\n') != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "invalid comment: " + comment);
    }
    out << comment << '\n';
  }
  for (const Document& doc : file.documents) write_document(out, doc);
}

void PredictionSet::insert(PredictionKey key, std::vector<BioTag> tags) {
  auto [it, inserted] = entries_.emplace(std::move(key), std::move(tags));
  if (!inserted) {
    throw Error(ErrorCode::kDuplicateKey,
                "duplicate prediction for (" + it->first.doc_id + ", " +
                    std::to_string(it->first.sentence_idx) + ")");
  }
}

const std::vector<BioTag>* PredictionSet::find(const PredictionKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

PredictionSet parse_predictions(std::istream& in) {
  PredictionSet out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    auto fail = [&](const std::string& msg) -> Error {
      return Error(ErrorCode::kSchemaError, msg, line_no);
    };
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw fail(std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) throw fail("record is not an object");

    auto doc_id = record.find("doc_id");
    if (doc_id == record.end() || !doc_id->is_string()) {
      throw fail("'doc_id' must be a string");
    }
    auto idx = record.find("sentence_idx");
    if (idx == record.end() || !idx->is_number_integer() ||
        idx->get<long long>() < 0) {
      throw fail("'sentence_idx' must be a non-negative integer");
    }
    auto tags_json = record.find("tags");
    if (tags_json == record.end() || !tags_json->is_array()) {
      throw fail("'tags' must be an array");
    }
    std::vector<BioTag> tags;
    tags.reserve(tags_json->size());
    for (const auto& t : *tags_json) {
      if (!t.is_string()) throw fail("tags must be strings");
      try {
        tags.push_back(BioTag::parse(t.get<std::string>()));
      } catch (const Error& e) {
        throw fail(e.what());
      }
    }
    try {
      out.insert({doc_id->get<std::string>(), idx->get<std::size_t>()},
                 std::move(tags));
    } catch (const Error& e) {
      throw Error(ErrorCode::kDuplicateKey, e.message(), line_no);
    }
  }
  return out;
}

void write_predictions(std::ostream& out, const PredictionSet& predictions) {
  for (const auto& [key, tags] : predictions.entries()) {
    nlohmann::ordered_json record;
    record["doc_id"] = key.doc_id;
    record["sentence_idx"] = key.sentence_idx;
    auto& arr = record["tags"] = nlohmann::ordered_json::array();
    for (const BioTag& tag : tags) arr.push_back(tag.str());
    out << record.dump() << '\n';
  }
}

PredictionSet predictions_from_gold(const ConllFile& file) {
  PredictionSet out;
  for (const Document& doc : file.documents) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      out.insert({doc.doc_id, s}, doc.sentences[s].tags());
    }
  }
  return out;
}

CorpusStats& CorpusStats::operator+=(const CorpusStats& other) {
  n_mentions += other.n_mentions;
  n_sentences += other.n_sentences;
  n_words += other.n_words;
  return *this;
}

CorpusStats corpus_stats(const Document& doc) {
  CorpusStats stats;
  for (const Sentence& sentence : doc.sentences) {
    const auto tags = sentence.tags();
    stats.n_mentions += spans_from_tags(tags).size();
    stats.n_sentences += 1;
    stats.n_words += sentence.size();
  }
  return stats;
}

CorpusStats corpus_stats(const ConllFile& file) {
  CorpusStats stats;
  for (const Document& doc : file.documents) stats += corpus_stats(doc);
  return stats;
}

std::string corpus_stats_csv_header() {
  return "corpus,n_mentions,n_sentences,n_words";
}

std::string corpus_stats_csv_row(const std::string& corpus,
                                 const CorpusStats& stats) {
  return corpus + "," + std::to_string(stats.n_mentions) + "," +
         std::to_string(stats.n_sentences) + "," +
         std::to_string(stats.n_words);
}

}  // namespace chembias
