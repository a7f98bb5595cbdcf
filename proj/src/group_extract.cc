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

#include "chembias/group_extract.h"

#include "chembias/error.h"
#include "chembias/text.h"

namespace chembias {
namespace {

// Non-ASCII bytes count as word characters so that a pronoun glued to an
// accented letter is not taken as a standalone word.
bool is_word(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_blank(char c) { return c == ' ' || c == '\t'; }

std::optional<Group> gender_letter(char c) {
  if (c == 'M' || c == 'm') return Group::kMale;
  if (c == 'F' || c == 'f') return Group::kFemale;
  return std::nullopt;
}

// Parses the inside of a bracket starting at `k`; on success returns the
// position of the closing bracket.
struct BracketBody {
  Group gender;
  std::optional<int> age;
  std::size_t close;
};

std::optional<BracketBody> parse_body(std::string_view text, std::size_t k,
                                      char close_char) {
  const std::size_t n = text.size();
  auto skip_blank = [&] {
    while (k < n && is_blank(text[k])) ++k;
  };
  auto read_age = [&]() -> std::optional<int> {
    const std::size_t begin = k;
    while (k < n && is_digit(text[k])) ++k;
    const std::size_t len = k - begin;
    if (len == 0 || len > 3) return std::nullopt;
    return std::stoi(std::string(text.substr(begin, len)));
  };
  auto read_letter = [&]() -> std::optional<Group> {
    if (k >= n) return std::nullopt;
    auto g = gender_letter(text[k]);
    if (!g) return std::nullopt;
    ++k;
    if (k < n && is_alpha(text[k])) return std::nullopt;
    return g;
  };

  BracketBody body{Group::kUnknown, std::nullopt, 0};
  skip_blank();
  if (k < n && is_digit(text[k])) {
    body.age = read_age();
    if (!body.age) return std::nullopt;
    skip_blank();
    auto g = read_letter();
    if (!g) return std::nullopt;
    body.gender = *g;
  } else {
    auto g = read_letter();
    if (!g) return std::nullopt;
    body.gender = *g;
    skip_blank();
    if (k < n && is_digit(text[k])) {
      body.age = read_age();
      if (!body.age) return std::nullopt;
    }
  }
  skip_blank();
  if (k >= n || text[k] != close_char) return std::nullopt;
  if (body.age && *body.age > kMaxAge) return std::nullopt;
  body.close = k;
  return body;
}

}  // namespace

std::string_view pronoun_name(Pronoun pronoun) {
  return pronoun == Pronoun::kI ? "I" : "My";
}

std::vector<GenderMention> find_gender_mentions(std::string_view text) {
  std::vector<GenderMention> out;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && is_word(text[i - 1])) continue;
    Pronoun pronoun;
    std::size_t j = i;
    if (text[i] == 'I' || text[i] == 'i') {
      pronoun = Pronoun::kI;
      j += 1;
    } else if ((text[i] == 'M' || text[i] == 'm') && i + 1 < n &&
               text[i + 1] == 'y') {
      pronoun = Pronoun::kMy;
      j += 2;
    } else {
      continue;
    }
    if (j < n && is_word(text[j])) continue;
    while (j < n && is_blank(text[j])) ++j;
    if (j >= n || (text[j] != '[' && text[j] != '(')) continue;
    const char close_char = text[j] == '[' ? ']' : ')';
    auto body = parse_body(text, j + 1, close_char);
    if (!body) continue;
    out.push_back({pronoun, body->gender, body->age,
                   utf8_length(text.substr(0, j))});
    i = body->close;
  }
  return out;
}

Group assign_group(std::span<const GenderMention> mentions) {
  std::optional<Group> self;
  for (const GenderMention& m : mentions) {
    if (m.pronoun != Pronoun::kI) continue;
    if (self && *self != m.gender) return Group::kUnknown;
    self = m.gender;
  }
  return self.value_or(Group::kUnknown);
}

Group assign_group(const RawPost& post) {
  return assign_group(find_gender_mentions(post.text));
}

RawPost parse_post(std::string_view json_line) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(json_line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) {
    throw Error(ErrorCode::kSchemaError, "record is not an object");
  }
  auto id = record.find("post_id");
  auto text = record.find("text");
  if (id == record.end() || !id->is_string()) {
    throw Error(ErrorCode::kSchemaError, "'post_id' must be a string");
  }
  if (text == record.end() || !text->is_string()) {
    throw Error(ErrorCode::kSchemaError, "'text' must be a string");
  }
  return {id->get<std::string>(), text->get<std::string>()};
}

nlohmann::ordered_json extraction_record(const RawPost& post) {
  const auto mentions = find_gender_mentions(post.text);
  nlohmann::ordered_json out;
  out["post_id"] = post.post_id;
  out["group"] = group_name(assign_group(mentions));
  auto& arr = out["mentions"] = nlohmann::ordered_json::array();
  for (const GenderMention& m : mentions) {
    nlohmann::ordered_json j;
    j["pronoun"] = pronoun_name(m.pronoun);
    j["gender"] = group_name(m.gender);
    j["age"] = m.age ? nlohmann::ordered_json(*m.age) : nlohmann::ordered_json();
    j["offset"] = m.offset;
    arr.push_back(std::move(j));
  }
  return out;
}

}  // namespace chembias
