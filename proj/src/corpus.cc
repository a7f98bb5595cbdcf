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

#include "chembias/corpus.h"

#include <algorithm>
#include <utility>

#include "chembias/error.h"
#include "chembias/text.h"

namespace chembias {

BioTag::BioTag(TagKind kind, std::string entity_type)
    : kind_(kind), entity_type_(std::move(entity_type)) {
  if (entity_type_.empty() || contains_space(entity_type_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "entity type must be non-empty and whitespace-free");
  }
}

BioTag BioTag::begin(std::string entity_type) {
  return BioTag(TagKind::kBegin, std::move(entity_type));
}

BioTag BioTag::inside(std::string entity_type) {
  return BioTag(TagKind::kInside, std::move(entity_type));
}

BioTag BioTag::parse(std::string_view text) {
  if (text == "O") return outside();
  if (text.size() > 2 && text[1] == '-') {
    if (text[0] == 'B') return begin(std::string(text.substr(2)));
    if (text[0] == 'I') return inside(std::string(text.substr(2)));
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown tag '" + std::string(text) + "'");
}

std::string BioTag::str() const {
  switch (kind_) {
    case TagKind::kBegin: return "B-" + entity_type_;
    case TagKind::kInside: return "I-" + entity_type_;
    case TagKind::kOutside: break;
  }
  return "O";
}

Token::Token(std::string text, BioTag tag)
    : text_(std::move(text)), tag_(std::move(tag)) {
  if (text_.empty() || contains_space(text_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "token text must be non-empty and whitespace-free: '" +
                    text_ + "'");
  }
}

Sentence::Sentence(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sentence has no tokens");
  }
}

std::vector<BioTag> Sentence::tags() const {
  std::vector<BioTag> out;
  out.reserve(tokens_.size());
  for (const Token& t : tokens_) out.push_back(t.tag());
  return out;
}

std::string Sentence::join(std::size_t start, std::size_t end) const {
  std::string out;
  for (std::size_t i = start; i <= end && i < tokens_.size(); ++i) {
    if (i > start) out += ' ';
    out += tokens_[i].text();
  }
  return out;
}

std::string_view group_name(Group group) {
  switch (group) {
    case Group::kMale: return "male";
    case Group::kFemale: return "female";
    case Group::kUnknown: break;
  }
  return "unknown";
}

std::optional<Group> parse_group(std::string_view text) {
  if (text == "male") return Group::kMale;
  if (text == "female") return Group::kFemale;
  if (text == "unknown") return Group::kUnknown;
  return std::nullopt;
}

std::optional<DecodeMode> parse_decode_mode(std::string_view text) {
  if (text == "lenient") return DecodeMode::kLenient;
  if (text == "strict") return DecodeMode::kStrict;
  return std::nullopt;
}

std::vector<EntitySpan> spans_from_tags(std::span<const BioTag> tags,
                                        DecodeMode mode,
                                        std::size_t sentence_idx) {
  std::vector<EntitySpan> spans;
  bool open = false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const BioTag& tag = tags[i];
    switch (tag.kind()) {
      case TagKind::kOutside:
        open = false;
        break;
      case TagKind::kBegin:
        spans.push_back({sentence_idx, i, i, tag.entity_type()});
        open = true;
        break;
      case TagKind::kInside:
        if (open && spans.back().entity_type == tag.entity_type()) {
          spans.back().end = i;
          break;
        }
        if (mode == DecodeMode::kStrict) {
          throw Error(ErrorCode::kMalformedBio,
                      "I-" + tag.entity_type() + " does not continue a span",
                      i);
        }
        spans.push_back({sentence_idx, i, i, tag.entity_type()});
        open = true;
        break;
    }
  }
  return spans;
}

std::vector<BioTag> tags_from_spans(std::span<const EntitySpan> spans,
                                    std::size_t length) {
  std::vector<const EntitySpan*> ordered;
  ordered.reserve(spans.size());
  for (const EntitySpan& s : spans) {
    if (s.start > s.end || s.end >= length) {
      throw Error(ErrorCode::kSpanOutOfRange,
                  "span [" + std::to_string(s.start) + ", " +
                      std::to_string(s.end) + "] outside sentence of length " +
                      std::to_string(length));
    }
    ordered.push_back(&s);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const EntitySpan* a, const EntitySpan* b) {
              return a->start < b->start;
            });

  std::vector<BioTag> tags(length);
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    const EntitySpan& s = *ordered[k];
    if (k > 0 && s.start <= ordered[k - 1]->end) {
      throw Error(ErrorCode::kOverlappingSpans,
                  "span starting at " + std::to_string(s.start) +
                      " overlaps the previous span");
    }
    tags[s.start] = BioTag::begin(s.entity_type);
    for (std::size_t i = s.start + 1; i <= s.end; ++i) {
      tags[i] = BioTag::inside(s.entity_type);
    }
  }
  return tags;
}

}  // namespace chembias
