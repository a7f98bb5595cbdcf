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

#include "chembias/scorer.h"

#include <algorithm>
#include <iterator>
#include <map>
#include <unordered_map>

#include "chembias/error.h"

namespace chembias {
namespace {

// Calls `fn(doc, sentence_idx, gold_sentence, predicted_tags)` for every
// gold sentence after checking that predictions line up with the corpus.
template <typename Fn>
void for_each_sentence(const ConllFile& gold, const PredictionSet& pred,
                       Fn&& fn) {
  std::unordered_map<std::string_view, const Document*> docs;
  docs.reserve(gold.documents.size());
  for (const Document& doc : gold.documents) docs.emplace(doc.doc_id, &doc);
  for (const auto& [key, tags] : pred.entries()) {
    auto it = docs.find(key.doc_id);
    if (it == docs.end() || key.sentence_idx >= it->second->sentences.size()) {
      throw Error(ErrorCode::kUnexpectedPrediction,
                  "prediction (" + key.doc_id + ", " +
                      std::to_string(key.sentence_idx) +
                      ") has no gold sentence");
    }
  }

  PredictionKey key;
  for (const Document& doc : gold.documents) {
    key.doc_id = doc.doc_id;
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      key.sentence_idx = s;
      const std::vector<BioTag>* tags = pred.find(key);
      if (tags == nullptr) {
        throw Error(ErrorCode::kMissingPrediction,
                    "no prediction for (" + doc.doc_id + ", " +
                        std::to_string(s) + ")");
      }
      if (tags->size() != doc.sentences[s].size()) {
        throw Error(ErrorCode::kLengthMismatch,
                    "(" + doc.doc_id + ", " + std::to_string(s) + "): " +
                        std::to_string(tags->size()) + " predicted tags for " +
                        std::to_string(doc.sentences[s].size()) + " tokens");
      }
      fn(doc, s, doc.sentences[s], *tags);
    }
  }
}

std::vector<EntitySpan> sorted(std::span<const EntitySpan> spans) {
  std::vector<EntitySpan> out(spans.begin(), spans.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

MatchCounts& MatchCounts::operator+=(const MatchCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

std::string Prf::flags() const {
  std::string out;
  if (precision_degenerate) out = "precision_undefined";
  if (recall_degenerate) {
    if (!out.empty()) out += ';';
    out += "recall_undefined";
  }
  return out;
}

Prf compute_prf(const MatchCounts& c) {
  Prf prf;
  const std::size_t predicted = c.tp + c.fp;
  const std::size_t actual = c.tp + c.fn;
  if (predicted == 0 && actual == 0) {
    return {1.0, 1.0, 1.0, true, true};
  }
  if (predicted == 0) {
    prf.precision_degenerate = true;
  } else {
    prf.precision = static_cast<double>(c.tp) / static_cast<double>(predicted);
  }
  if (actual == 0) {
    prf.recall = 1.0;
    prf.recall_degenerate = true;
  } else {
    prf.recall = static_cast<double>(c.tp) / static_cast<double>(actual);
  }
  const double denom = prf.precision + prf.recall;
  prf.f1 = denom > 0.0 ? 2.0 * prf.precision * prf.recall / denom : 0.0;
  return prf;
}

MatchCounts match_spans(std::span<const EntitySpan> gold,
                        std::span<const EntitySpan> predicted) {
  const auto g = sorted(gold);
  const auto p = sorted(predicted);
  std::vector<EntitySpan> common;
  std::set_intersection(g.begin(), g.end(), p.begin(), p.end(),
                        std::back_inserter(common));
  MatchCounts c;
  c.tp = common.size();
  c.fp = p.size() - c.tp;
  c.fn = g.size() - c.tp;
  return c;
}

GroupScoreReport score(const ConllFile& gold, const PredictionSet& pred,
                       DecodeMode mode) {
  std::array<MatchCounts, 3> counts{};
  for_each_sentence(gold, pred,
                    [&](const Document& doc, std::size_t s,
                        const Sentence& sentence,
                        const std::vector<BioTag>& tags) {
                      const auto gold_tags = sentence.tags();
                      const auto g = spans_from_tags(gold_tags, mode, s);
                      const auto p = spans_from_tags(tags, mode, s);
                      counts[static_cast<std::size_t>(doc.group_or_unknown())] +=
                          match_spans(g, p);
                    });
  GroupScoreReport report;
  for (Group group : kAllGroups) {
    const auto i = static_cast<std::size_t>(group);
    report.per_group[i] = {counts[i], compute_prf(counts[i])};
    report.overall.counts += counts[i];
  }
  report.overall.prf = compute_prf(report.overall.counts);
  return report;
}

std::string_view error_kind_name(ErrorKind kind) {
  return kind == ErrorKind::kFalsePositive ? "false_positive"
                                           : "false_negative";
}

std::vector<ErrorRecord> extract_errors(const ConllFile& gold,
                                        const PredictionSet& pred,
                                        DecodeMode mode) {
  std::vector<ErrorRecord> out;
  for_each_sentence(
      gold, pred,
      [&](const Document& doc, std::size_t s, const Sentence& sentence,
          const std::vector<BioTag>& tags) {
        const auto gold_tags = sentence.tags();
        const auto g = sorted(spans_from_tags(gold_tags, mode, s));
        const auto p = sorted(spans_from_tags(tags, mode, s));
        std::vector<EntitySpan> missed;
        std::vector<EntitySpan> spurious;
        std::set_difference(g.begin(), g.end(), p.begin(), p.end(),
                            std::back_inserter(missed));
        std::set_difference(p.begin(), p.end(), g.begin(), g.end(),
                            std::back_inserter(spurious));
        std::vector<ErrorRecord> local;
        for (auto& span : missed) {
          local.push_back({doc.doc_id, s, span, ErrorKind::kFalseNegative,
                           sentence.join(span.start, span.end),
                           doc.group_or_unknown()});
        }
        for (auto& span : spurious) {
          local.push_back({doc.doc_id, s, span, ErrorKind::kFalsePositive,
                           sentence.join(span.start, span.end),
                           doc.group_or_unknown()});
        }
        std::stable_sort(local.begin(), local.end(),
                         [](const ErrorRecord& a, const ErrorRecord& b) {
                           if (a.span.start != b.span.start) {
                             return a.span.start < b.span.start;
                           }
                           if (a.span.end != b.span.end) {
                             return a.span.end < b.span.end;
                           }
                           return a.kind == ErrorKind::kFalseNegative &&
                                  b.kind == ErrorKind::kFalsePositive;
                         });
        std::move(local.begin(), local.end(), std::back_inserter(out));
      });
  return out;
}

Agreement agreement(const ConllFile& a, const ConllFile& b, DecodeMode mode) {
  auto mismatch = [](const std::string& where) {
    return Error(ErrorCode::kTokenizationMismatch, where);
  };
  if (a.documents.size() != b.documents.size()) {
    throw mismatch("document counts differ");
  }
  std::map<std::string, std::size_t> marginal_a;
  std::map<std::string, std::size_t> marginal_b;
  std::size_t n = 0;
  std::size_t agree = 0;
  Agreement result;
  for (std::size_t d = 0; d < a.documents.size(); ++d) {
    const Document& da = a.documents[d];
    const Document& db = b.documents[d];
    if (da.doc_id != db.doc_id || da.sentences.size() != db.sentences.size()) {
      throw mismatch("document " + da.doc_id + " differs in id or sentences");
    }
    for (std::size_t s = 0; s < da.sentences.size(); ++s) {
      const auto& ta = da.sentences[s].tokens();
      const auto& tb = db.sentences[s].tokens();
      if (ta.size() != tb.size()) {
        throw mismatch("document " + da.doc_id + " sentence " +
                       std::to_string(s) + " differs in length");
      }
      for (std::size_t i = 0; i < ta.size(); ++i) {
        if (ta[i].text() != tb[i].text()) {
          throw mismatch("document " + da.doc_id + " sentence " +
                         std::to_string(s) + " token " + std::to_string(i) +
                         " differs");
        }
        const std::string la = ta[i].tag().str();
        const std::string lb = tb[i].tag().str();
        ++marginal_a[la];
        ++marginal_b[lb];
        ++n;
        if (la == lb) ++agree;
      }
      const auto tags_a = da.sentences[s].tags();
      const auto tags_b = db.sentences[s].tags();
      result.counts += match_spans(spans_from_tags(tags_a, mode, s),
                                   spans_from_tags(tags_b, mode, s));
    }
  }

  if (n > 0) {
    const double total = static_cast<double>(n);
    const double observed = static_cast<double>(agree) / total;
    double expected = 0.0;
    for (const auto& [label, count_a] : marginal_a) {
      auto it = marginal_b.find(label);
      if (it == marginal_b.end()) continue;
      expected += (static_cast<double>(count_a) / total) *
                  (static_cast<double>(it->second) / total);
    }
    if (expected < 1.0) {
      result.token_kappa = (observed - expected) / (1.0 - expected);
    } else {
      result.kappa_degenerate = true;
    }
  } else {
    result.kappa_degenerate = true;
  }

  const Prf prf = compute_prf(result.counts);
  result.entity_f1 = prf.f1;
  result.entity_f1_degenerate = prf.degenerate();
  return result;
}

}  // namespace chembias
