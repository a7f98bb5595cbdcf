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

// Self-identified gender extraction from free text, e.g. "I [F34]",
// "My (23F)", "I [M]", "I [25 M]".

#ifndef CHEMBIAS_GROUP_EXTRACT_H_
#define CHEMBIAS_GROUP_EXTRACT_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "chembias/corpus.h"

namespace chembias {

enum class Pronoun { kI, kMy };

std::string_view pronoun_name(Pronoun pronoun);

inline constexpr int kMaxAge = 130;

struct GenderMention {
  Pronoun pronoun = Pronoun::kI;
  Group gender = Group::kUnknown;
  std::optional<int> age;
  // Code-point offset of the opening bracket.
  std::size_t offset = 0;

  friend bool operator==(const GenderMention&, const GenderMention&) = default;
};

struct RawPost {
  std::string post_id;
  std::string text;
};

// A pronoun ("I"/"i" or "My"/"my", word-bounded) followed by optional
// whitespace and a "[...]" or "(...)" group holding one gender letter M/F in
// either case and an optional 1-3 digit age before or after it, e.g. F34,
// 34F, 25 M, F. Ages above kMaxAge disqualify the match. Mentions are
// returned in offset order.
std::vector<GenderMention> find_gender_mentions(std::string_view text);

// Author group policy: only "I" mentions self-identify. Male/female when at
// least one "I" mention exists and all of them agree; unknown otherwise
// (no mentions, third-party "My" mentions only, or conflicting "I"
// mentions).
Group assign_group(std::span<const GenderMention> mentions);
Group assign_group(const RawPost& post);

// Input record {"post_id", "text"}. Throws Error(kSchemaError).
RawPost parse_post(std::string_view json_line);

// Output record {"post_id", "group", "mentions": [{pronoun, gender, age,
// offset}]}; age is null when absent.
nlohmann::ordered_json extraction_record(const RawPost& post);

}  // namespace chembias

#endif  // CHEMBIAS_GROUP_EXTRACT_H_
