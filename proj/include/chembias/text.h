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

// String utilities shared across modules. ASCII semantics throughout; bytes
// >= 0x80 are passed through untouched so UTF-8 text survives unchanged.

#ifndef CHEMBIAS_TEXT_H_
#define CHEMBIAS_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace chembias {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool contains_space(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

std::string ascii_lower(std::string_view s);

// Number of UTF-8 code points in `s` (continuation bytes are not counted).
std::size_t utf8_length(std::string_view s);

// Shortest decimal representation that round-trips.
std::string format_double(double value);

// Fixed-point rendering, e.g. format_fixed(.80874, 4) == "0.8087".
std::string format_fixed(double value, int digits);

}  // namespace chembias

#endif  // CHEMBIAS_TEXT_H_
