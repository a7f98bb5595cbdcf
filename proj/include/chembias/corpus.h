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

// Core data model: BIO-tagged tokens, sentences, group-annotated documents
// and the span semantics used by every scorer.

#ifndef CHEMBIAS_CORPUS_H_
#define CHEMBIAS_CORPUS_H_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chembias {

inline constexpr std::string_view kChemType = "CHEM";

enum class TagKind { kBegin, kInside, kOutside };

class BioTag {
 public:
  // Default-constructed tag is O.
  BioTag() = default;

  static BioTag outside() { return BioTag(); }
  static BioTag begin(std::string entity_type = std::string(kChemType));
  static BioTag inside(std::string entity_type = std::string(kChemType));

  // Accepts "O", "B-<type>" and "I-<type>". Throws Error(kInvalidArgument).
  static BioTag parse(std::string_view text);

  TagKind kind() const { return kind_; }
  const std::string& entity_type() const { return entity_type_; }
  bool is_outside() const { return kind_ == TagKind::kOutside; }

  std::string str() const;

  friend bool operator==(const BioTag&, const BioTag&) = default;

 private:
  BioTag(TagKind kind, std::string entity_type);

  TagKind kind_ = TagKind::kOutside;
  std::string entity_type_;
};

class Token {
 public:
  // Throws Error(kInvalidArgument) if `text` is empty or contains whitespace.
  Token(std::string text, BioTag tag);

  const std::string& text() const { return text_; }
  const BioTag& tag() const { return tag_; }

  friend bool operator==(const Token&, const Token&) = default;

 private:
  std::string text_;
  BioTag tag_;
};

class Sentence {
 public:
  // Throws Error(kInvalidArgument) on an empty token list.
  explicit Sentence(std::vector<Token> tokens);

  const std::vector<Token>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  std::vector<BioTag> tags() const;

  // Token texts in [start, end] joined by single spaces.
  std::string join(std::size_t start, std::size_t end) const;

  friend bool operator==(const Sentence&, const Sentence&) = default;

 private:
  std::vector<Token> tokens_;
};

enum class Group { kMale, kFemale, kUnknown };

std::string_view group_name(Group group);
// Accepts "male", "female" and "unknown".
std::optional<Group> parse_group(std::string_view text);

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;
  std::optional<Group> group;
  std::map<std::string, std::string> source_meta;
  // Free-form '#' comment lines carried with the document, verbatim.
  std::vector<std::string> comments;

  Group group_or_unknown() const { return group.value_or(Group::kUnknown); }

  friend bool operator==(const Document&, const Document&) = default;
};

// Token-level entity mention; `start` and `end` are inclusive token indices.
struct EntitySpan {
  std::size_t sentence_idx = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string entity_type;

  friend auto operator<=>(const EntitySpan&, const EntitySpan&) = default;
};

enum class DecodeMode {
  // conlleval convention: an I- tag after O or after another type opens a
  // new span.
  kLenient,
  // Such I- tags raise Error(kMalformedBio) carrying the token index.
  kStrict,
};

std::optional<DecodeMode> parse_decode_mode(std::string_view text);

std::vector<EntitySpan> spans_from_tags(std::span<const BioTag> tags,
                                        DecodeMode mode = DecodeMode::kLenient,
                                        std::size_t sentence_idx = 0);

// Inverse of lenient decoding. `sentence_idx` of the input spans is ignored.
// Throws Error(kOverlappingSpans) or Error(kSpanOutOfRange).
std::vector<BioTag> tags_from_spans(std::span<const EntitySpan> spans,
                                    std::size_t length);

}  // namespace chembias

#endif  // CHEMBIAS_CORPUS_H_
