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


#include "chembias/text.h"

#include <limits>

#include <gtest/gtest.h>

namespace chembias {
namespace {

TEST(TextTest, Splitting) {
  EXPECT_EQ(split("a\tb\t", '\t'), (std::vector<std::string_view>{"a", "b", ""}));
  EXPECT_EQ(split_whitespace("  a \t b  "),
            (std::vector<std::string_view>{"a", "b"}));
  EXPECT_EQ(trim(" \tx y\n"), "x y");
}

TEST(TextTest, Utf8Length) {
  EXPECT_EQ(utf8_length("abc"), 3u);
  EXPECT_EQ(utf8_length("\xC3\xA9t\xC3\xA9"), 3u);
}

TEST(TextTest, FormatsNumbers) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_fixed(-0.00001, 4), "0.0000");
  EXPECT_EQ(format_fixed(-0.01694, 4), "-0.0169");
}

}  // namespace
}  // namespace chembias
