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

// Entity-level strict-match scoring per group, error extraction and
// inter-annotator agreement.

#ifndef CHEMBIAS_SCORER_H_
#define CHEMBIAS_SCORER_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chembias/conll_io.h"
#include "chembias/corpus.h"

namespace chembias {

struct MatchCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  MatchCounts& operator+=(const MatchCounts& other);
  friend MatchCounts operator+(MatchCounts a, const MatchCounts& b) {
    return a += b;
  }
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

// Zero-denominator convention:
//   tp = fp = fn = 0          -> P = R = F1 = 1, both flags set
//   tp + fp = 0, fn > 0       -> P = 0 (flagged), R = 0, F1 = 0
//   tp + fn = 0, fp > 0       -> P = 0, R = 1 (flagged), F1 = 0
struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;

  bool degenerate() const { return precision_degenerate || recall_degenerate; }
  // "" or a ';'-joined subset of {precision_undefined, recall_undefined}.
  std::string flags() const;
};

Prf compute_prf(const MatchCounts& counts);

// Strict matching of two span sets: identical (sentence, start, end, type).
MatchCounts match_spans(std::span<const EntitySpan> gold,
                        std::span<const EntitySpan> predicted);

struct GroupScore {
  MatchCounts counts;
  Prf prf;
};

inline constexpr std::array<Group, 3> kAllGroups = {
    Group::kMale, Group::kFemale, Group::kUnknown};

struct GroupScoreReport {
  // Indexed by Group; documents without a group count as unknown.
  std::array<GroupScore, 3> per_group;
  GroupScore overall;

  const GroupScore& at(Group g) const {
    return per_group[static_cast<std::size_t>(g)];
  }
};

// Micro-averaged strict-match scores per group and overall. Throws
// Error(kMissingPrediction), Error(kLengthMismatch) and, for prediction keys
// absent from the gold corpus, Error(kUnexpectedPrediction).
GroupScoreReport score(const ConllFile& gold, const PredictionSet& pred,
                       DecodeMode mode = DecodeMode::kLenient);

enum class ErrorKind { kFalsePositive, kFalseNegative };

std::string_view error_kind_name(ErrorKind kind);

struct ErrorRecord {
  std::string doc_id;
  std::size_t sentence_idx = 0;
  EntitySpan span;
  ErrorKind kind = ErrorKind::kFalseNegative;
  std::string surface;  // span tokens joined by single spaces
  Group group = Group::kUnknown;
};

// One record per FP and FN, in document order, then sentence, then span
// position; an FN precedes an FP on the same span position.
std::vector<ErrorRecord> extract_errors(const ConllFile& gold,
                                        const PredictionSet& pred,
                                        DecodeMode mode = DecodeMode::kLenient);

struct Agreement {
  double token_kappa = 1.0;
  // Set when expected agreement is 1 (a single label everywhere); kappa is
  // then reported as 1.
  bool kappa_degenerate = false;
  double entity_f1 = 1.0;
  bool entity_f1_degenerate = false;
  MatchCounts counts;
};

// Cohen's kappa over per-token tag labels and strict entity F1 with `a` as
// reference. Throws Error(kTokenizationMismatch) unless both files have the
// same documents, sentences and token texts.
Agreement agreement(const ConllFile& a, const ConllFile& b,
                    DecodeMode mode = DecodeMode::kLenient);

}  // namespace chembias

#endif  // CHEMBIAS_SCORER_H_
