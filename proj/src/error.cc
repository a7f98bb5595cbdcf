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

#include "chembias/error.h"

namespace chembias {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedBio: return "MalformedBIO";
    case ErrorCode::kOverlappingSpans: return "OverlappingSpans";
    case ErrorCode::kSpanOutOfRange: return "SpanOutOfRange";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kDuplicateKey: return "DuplicateKey";
    case ErrorCode::kMissingPrediction: return "MissingPrediction";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kUnexpectedPrediction: return "UnexpectedPrediction";
    case ErrorCode::kTokenizationMismatch: return "TokenizationMismatch";
    case ErrorCode::kInvalidTemplate: return "InvalidTemplate";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kEmptyAxis: return "EmptyAxis";
    case ErrorCode::kEmptySelection: return "EmptySelection";
    case ErrorCode::kNoErrors: return "NoErrors";
    case ErrorCode::kDegenerateWeights: return "DegenerateWeights";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> position) {
  std::string out(error_code_name(code));
  if (position) {
    out += code == ErrorCode::kMalformedBio ? " at token " : " at line ";
    out += std::to_string(*position);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> position)
    : std::runtime_error(decorate(code, message, position)),
      code_(code),
      message_(message),
      position_(position) {}

}  // namespace chembias
