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

#ifndef CHEMBIAS_ERROR_H_
#define CHEMBIAS_ERROR_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chembias {

enum class ErrorCode {
  kInvalidArgument,
  kMalformedBio,
  kOverlappingSpans,
  kSpanOutOfRange,
  kParseError,
  kSchemaError,
  kDuplicateKey,
  kMissingPrediction,
  kLengthMismatch,
  kUnexpectedPrediction,
  kTokenizationMismatch,
  kInvalidTemplate,
  kInvalidConfig,
  kEmptyAxis,
  kEmptySelection,
  kNoErrors,
  kDegenerateWeights,
  kZeroVariance,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this exception. `position` is
// the offending token index for kMalformedBio and the 1-based line number
// for errors raised while reading a file.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> position() const { return position_; }
  // The message without the code name and position.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<std::size_t> position_;
};

}  // namespace chembias

#endif  // CHEMBIAS_ERROR_H_
