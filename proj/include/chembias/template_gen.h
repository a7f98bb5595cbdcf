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

// Synthetic bias-probe corpus: every template is instantiated with every
// gendered name of a decade and every chemical, yielding one gold-labelled
// sentence per combination. Output is streamed one document at a time and
// sharded by (gender, decade).

#ifndef CHEMBIAS_TEMPLATE_GEN_H_
#define CHEMBIAS_TEMPLATE_GEN_H_

#include <cstddef>
#include <functional>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chembias/corpus.h"

namespace chembias {

inline constexpr std::string_view kNamePlaceholder = "[NAME]";
inline constexpr std::string_view kChemicalPlaceholder = "[CHEMICAL]";

struct Template {
  std::string template_id;
  std::string text;
};

// Throws Error(kInvalidTemplate) unless the text holds exactly one of each
// placeholder and no other bracketed placeholder, and the id is a non-empty
// whitespace-free string.
void validate_template(const Template& tmpl);

struct NameEntry {
  std::string name;
  Group gender = Group::kUnknown;  // male or female
  int decade = 0;
  int rank = 0;
};

struct ChemicalEntry {
  std::string surface;
  std::optional<std::string> source_id;
};

struct GenerationConfig {
  std::vector<Template> templates;
  std::vector<NameEntry> names;
  std::vector<ChemicalEntry> chemicals;
  std::set<int> decades;
  std::vector<Group> genders;
};

// Whitespace split, then trailing . , ! ? split off as separate tokens.
std::vector<std::string> tokenize_text(std::string_view text);

// Substitutes the name and chemical verbatim. Chemical tokens are tagged
// B-CHEM / I-CHEM and split on whitespace only; everything else is O.
Sentence instantiate(const Template& tmpl, const NameEntry& name,
                     const ChemicalEntry& chemical);

// A (gender, decade) output shard.
struct Shard {
  Group gender = Group::kUnknown;
  int decade = 0;

  std::string file_name() const;  // synthetic_<gender>_<decade>.conll
};

// Throws Error(kEmptyAxis) if templates, chemicals, decades or genders are
// empty, or if a requested (gender, decade) has no names. Throws
// Error(kInvalidConfig) on invalid templates, unknown genders, decades
// outside 1880-2010 step 10, duplicate ranks or empty names.
void validate_config(const GenerationConfig& config);

// Shards in generation order: genders as listed, decades ascending.
std::vector<Shard> plan_shards(const GenerationConfig& config);

std::size_t shard_document_count(const GenerationConfig& config,
                                 const Shard& shard);

std::string synthetic_doc_id(std::string_view template_id, Group gender,
                             int decade, int rank, std::size_t chemical_index);

using DocumentSink = std::function<void(const Document&)>;

// Emits the shard's documents in (template, name rank, chemical index)
// order. The config must already be valid.
void generate_shard(const GenerationConfig& config, const Shard& shard,
                    const DocumentSink& sink);

// Validates, then emits every shard in plan_shards order.
void generate(const GenerationConfig& config, const DocumentSink& sink);

// True when `a` and `b` come from the same template, decade, name rank and
// chemical, belong to opposite genders, and agree everywhere outside their
// [NAME] tokens.
bool is_counterfactual_pair(const Document& a, const Document& b);

// Loaders for the on-disk inputs. All throw Error(kInvalidConfig) with the
// 1-based line number on malformed rows.
// Templates: "template_id<TAB>text" per line.
std::vector<Template> load_templates(std::istream& in);
// Names: CSV "name,gender,decade,rank"; an identical header row is skipped.
std::vector<NameEntry> load_names(std::istream& in);
// Chemicals: "surface[<TAB>source_id]" per line.
std::vector<ChemicalEntry> load_chemicals(std::istream& in);

}  // namespace chembias

#endif  // CHEMBIAS_TEMPLATE_GEN_H_
