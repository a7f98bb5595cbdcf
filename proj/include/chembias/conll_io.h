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

// Reading and writing of gold corpora (.conll) and predictions (.jsonl).
//
// Gold format, UTF-8 without BOM:
//
//   # free comment (no tab)
//   #doc <doc_id> [group=<male|female|unknown>] [key=value ...]
//   Aspirin<TAB>B-CHEM
//   helps<TAB>O
//   <blank line ends a sentence>
//
// A line starting with '#' and containing no tab is a comment; the "#doc"
// comment opens a document. Comments before the first document belong to
// the file, later ones to the enclosing document. The writer emits header
// attributes as group first then sorted keys, document comments right after
// the header, and one blank line after every sentence.
//
// Predictions are JSON lines, one object per sentence:
//   {"doc_id": "d1", "sentence_idx": 0, "tags": ["B-CHEM", "O"]}

#ifndef CHEMBIAS_CONLL_IO_H_
#define CHEMBIAS_CONLL_IO_H_

#include <compare>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chembias/corpus.h"

namespace chembias {

struct ConllFile {
  std::vector<std::string> comments;
  std::vector<Document> documents;

  friend bool operator==(const ConllFile&, const ConllFile&) = default;
};

// Single-pass reader holding at most one document in memory.
class ConllReader {
 public:
  explicit ConllReader(std::istream& in);

  // Returns the next document, or nullopt at end of input. Throws
  // Error(kParseError) carrying the line number.
  std::optional<Document> next();

  // File-level comments seen before the first "#doc" header.
  const std::vector<std::string>& preamble() const { return preamble_; }

  // Line of the header of the document last returned by next().
  std::size_t header_line() const { return header_line_; }

 private:
  bool read_line();
  Document parse_header(std::string_view line) const;

  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
  std::size_t header_line_ = 0;
  bool pending_header_ = false;
  bool eof_ = false;
  std::vector<std::string> preamble_;
};

// Reads a whole corpus; additionally rejects duplicate doc ids.
ConllFile parse_conll(std::istream& in);

void write_document(std::ostream& out, const Document& doc);
void write_conll(std::ostream& out, const ConllFile& file);

struct PredictionKey {
  std::string doc_id;
  std::size_t sentence_idx = 0;

  friend auto operator<=>(const PredictionKey&, const PredictionKey&) = default;
};

class PredictionSet {
 public:
  using Map = std::map<PredictionKey, std::vector<BioTag>>;

  // Throws Error(kDuplicateKey) if the key is already present.
  void insert(PredictionKey key, std::vector<BioTag> tags);

  const std::vector<BioTag>* find(const PredictionKey& key) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Map& entries() const { return entries_; }

 private:
  Map entries_;
};

// Throws Error(kSchemaError) or Error(kDuplicateKey) with the line number.
// Blank lines are skipped; unknown object keys are ignored.
PredictionSet parse_predictions(std::istream& in);

// One record per entry in key order.
void write_predictions(std::ostream& out, const PredictionSet& predictions);

// Predictions equal to the gold tags of `file`.
PredictionSet predictions_from_gold(const ConllFile& file);

struct CorpusStats {
  std::size_t n_mentions = 0;
  std::size_t n_sentences = 0;
  std::size_t n_words = 0;

  CorpusStats& operator+=(const CorpusStats& other);
  friend CorpusStats operator+(CorpusStats a, const CorpusStats& b) {
    return a += b;
  }
  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

CorpusStats corpus_stats(const Document& doc);
CorpusStats corpus_stats(const ConllFile& file);

// CSV export: "corpus,n_mentions,n_sentences,n_words".
std::string corpus_stats_csv_header();
std::string corpus_stats_csv_row(const std::string& corpus,
                                 const CorpusStats& stats);

}  // namespace chembias

#endif  // CHEMBIAS_CONLL_IO_H_
