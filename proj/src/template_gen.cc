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

#include "chembias/template_gen.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <tuple>
#include <utility>

#include "chembias/error.h"
#include "chembias/text.h"

namespace chembias {
namespace {

constexpr int kFirstDecade = 1880;
constexpr int kLastDecade = 2010;

bool is_split_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?';
}

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

// Any "[UPPER_CASE]" run other than the two known placeholders.
bool has_foreign_placeholder(std::string_view text) {
  for (std::size_t open = text.find('['); open != std::string_view::npos;
       open = text.find('[', open + 1)) {
    const std::size_t close = text.find(']', open);
    if (close == std::string_view::npos) return false;
    const std::string_view inner = text.substr(open + 1, close - open - 1);
    const bool placeholder_like =
        !inner.empty() && std::all_of(inner.begin(), inner.end(), [](char c) {
          return (c >= 'A' && c <= 'Z') || c == '_';
        });
    const std::string_view whole = text.substr(open, close - open + 1);
    if (placeholder_like && whole != kNamePlaceholder &&
        whole != kChemicalPlaceholder) {
      return true;
    }
  }
  return false;
}

int parse_int(std::string_view s, std::size_t line_no, std::string_view what) {
  s = trim(s);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidConfig,
                "invalid " + std::string(what) + " '" + std::string(s) + "'",
                line_no);
  }
  return value;
}

enum class Slot { kLiteral, kName, kChemical };

// Template text pre-split into literal tokens and the two slots.
struct CompiledTemplate {
  std::vector<std::pair<Slot, std::string>> parts;
};

CompiledTemplate compile(const Template& tmpl) {
  const std::string_view text = tmpl.text;
  const std::size_t name_pos = text.find(kNamePlaceholder);
  const std::size_t chem_pos = text.find(kChemicalPlaceholder);
  struct Hole {
    std::size_t pos;
    std::size_t len;
    Slot slot;
  };
  std::vector<Hole> holes = {{name_pos, kNamePlaceholder.size(), Slot::kName},
                             {chem_pos, kChemicalPlaceholder.size(),
                              Slot::kChemical}};
  std::sort(holes.begin(), holes.end(),
            [](const Hole& a, const Hole& b) { return a.pos < b.pos; });

  CompiledTemplate out;
  std::size_t cursor = 0;
  for (const Hole& hole : holes) {
    for (auto& tok : tokenize_text(text.substr(cursor, hole.pos - cursor))) {
      out.parts.emplace_back(Slot::kLiteral, std::move(tok));
    }
    out.parts.emplace_back(hole.slot, std::string());
    cursor = hole.pos + hole.len;
  }
  for (auto& tok : tokenize_text(text.substr(cursor))) {
    out.parts.emplace_back(Slot::kLiteral, std::move(tok));
  }
  return out;
}

struct Instance {
  Sentence sentence;
  std::size_t name_start;
  std::size_t name_len;
};

Instance fill(const CompiledTemplate& compiled,
              const std::vector<std::string_view>& name_tokens,
              const std::vector<std::string_view>& chem_tokens) {
  std::vector<Token> tokens;
  tokens.reserve(compiled.parts.size() + name_tokens.size() +
                 chem_tokens.size());
  std::size_t name_start = 0;
  for (const auto& [slot, literal] : compiled.parts) {
    switch (slot) {
      case Slot::kLiteral:
        tokens.emplace_back(literal, BioTag::outside());
        break;
      case Slot::kName:
        name_start = tokens.size();
        for (std::string_view t : name_tokens) {
          tokens.emplace_back(std::string(t), BioTag::outside());
        }
        break;
      case Slot::kChemical:
        for (std::size_t i = 0; i < chem_tokens.size(); ++i) {
          tokens.emplace_back(std::string(chem_tokens[i]),
                              i == 0 ? BioTag::begin() : BioTag::inside());
        }
        break;
    }
  }
  return {Sentence(std::move(tokens)), name_start, name_tokens.size()};
}

std::vector<const NameEntry*> shard_names(const GenerationConfig& config,
                                          const Shard& shard) {
  std::vector<const NameEntry*> names;
  for (const NameEntry& n : config.names) {
    if (n.gender == shard.gender && n.decade == shard.decade) {
      names.push_back(&n);
    }
  }
  std::sort(names.begin(), names.end(),
            [](const NameEntry* a, const NameEntry* b) {
              return a->rank < b->rank;
            });
  return names;
}

}  // namespace

void validate_template(const Template& tmpl) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kInvalidTemplate,
                "template '" + tmpl.template_id + "': " + why);
  };
  if (tmpl.template_id.empty() || contains_space(tmpl.template_id)) {
    fail("id must be non-empty and whitespace-free");
  }
  if (count_occurrences(tmpl.text, kNamePlaceholder) != 1) {
    fail("expected exactly one [NAME]");
  }
  if (count_occurrences(tmpl.text, kChemicalPlaceholder) != 1) {
    fail("expected exactly one [CHEMICAL]");
  }
  if (has_foreign_placeholder(tmpl.text)) fail("unknown placeholder");
}

std::vector<std::string> tokenize_text(std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view word : split_whitespace(text)) {
    std::size_t stem = word.size();
    while (stem > 0 && is_split_punct(word[stem - 1])) --stem;
    if (stem > 0) out.emplace_back(word.substr(0, stem));
    for (std::size_t i = stem; i < word.size(); ++i) {
      out.emplace_back(1, word[i]);
    }
  }
  return out;
}

Sentence instantiate(const Template& tmpl, const NameEntry& name,
                     const ChemicalEntry& chemical) {
  validate_template(tmpl);
  const auto name_tokens = split_whitespace(name.name);
  const auto chem_tokens = split_whitespace(chemical.surface);
  if (name_tokens.empty() || chem_tokens.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty name or chemical");
  }
  return fill(compile(tmpl), name_tokens, chem_tokens).sentence;
}

std::string Shard::file_name() const {
  return "synthetic_" + std::string(group_name(gender)) + "_" +
         std::to_string(decade) + ".conll";
}

void validate_config(const GenerationConfig& config) {
  if (config.templates.empty()) {
    throw Error(ErrorCode::kEmptyAxis, "no templates");
  }
  if (config.chemicals.empty()) {
    throw Error(ErrorCode::kEmptyAxis, "no chemicals");
  }
  if (config.decades.empty()) throw Error(ErrorCode::kEmptyAxis, "no decades");
  if (config.genders.empty()) throw Error(ErrorCode::kEmptyAxis, "no genders");

  std::set<std::string> template_ids;
  for (const Template& t : config.templates) {
    try {
      validate_template(t);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig, e.what());
    }
    if (!template_ids.insert(t.template_id).second) {
      throw Error(ErrorCode::kInvalidConfig,
                  "duplicate template id '" + t.template_id + "'");
    }
  }
  for (const ChemicalEntry& c : config.chemicals) {
    if (trim(c.surface).empty()) {
      throw Error(ErrorCode::kInvalidConfig, "empty chemical surface");
    }
  }
  auto check_decade = [](int decade) {
    if (decade < kFirstDecade || decade > kLastDecade || decade % 10 != 0) {
      throw Error(ErrorCode::kInvalidConfig,
                  "decade " + std::to_string(decade) +
                      " outside 1880-2010 step 10");
    }
  };
  for (int d : config.decades) check_decade(d);

  std::set<std::tuple<Group, int, int>> ranks;
  for (const NameEntry& n : config.names) {
    if (n.gender != Group::kMale && n.gender != Group::kFemale) {
      throw Error(ErrorCode::kInvalidConfig,
                  "name '" + n.name + "' has no binary gender");
    }
    check_decade(n.decade);
    if (n.rank < 1) {
      throw Error(ErrorCode::kInvalidConfig,
                  "name '" + n.name + "' has rank < 1");
    }
    if (trim(n.name).empty()) {
      throw Error(ErrorCode::kInvalidConfig, "empty name");
    }
    if (!ranks.emplace(n.gender, n.decade, n.rank).second) {
      throw Error(ErrorCode::kInvalidConfig,
                  "duplicate rank " + std::to_string(n.rank) + " for " +
                      std::string(group_name(n.gender)) + " " +
                      std::to_string(n.decade));
    }
  }
  std::set<Group> seen_genders;
  for (Group g : config.genders) {
    if (g != Group::kMale && g != Group::kFemale) {
      throw Error(ErrorCode::kInvalidConfig, "only male/female can be generated");
    }
    if (!seen_genders.insert(g).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate gender");
    }
  }
  for (const Shard& shard : plan_shards(config)) {
    if (shard_names(config, shard).empty()) {
      throw Error(ErrorCode::kEmptyAxis,
                  "no " + std::string(group_name(shard.gender)) +
                      " names for decade " + std::to_string(shard.decade));
    }
  }
}

std::vector<Shard> plan_shards(const GenerationConfig& config) {
  std::vector<Shard> shards;
  for (Group g : config.genders) {
    for (int d : config.decades) shards.push_back({g, d});
  }
  return shards;
}

std::size_t shard_document_count(const GenerationConfig& config,
                                 const Shard& shard) {
  return config.templates.size() * shard_names(config, shard).size() *
         config.chemicals.size();
}

std::string synthetic_doc_id(std::string_view template_id, Group gender,
                             int decade, int rank,
                             std::size_t chemical_index) {
  std::string id(template_id);
  id += '-';
  id += group_name(gender);
  id += '-';
  id += std::to_string(decade);
  id += "-n";
  id += std::to_string(rank);
  id += "-c";
  id += std::to_string(chemical_index);
  return id;
}

void generate_shard(const GenerationConfig& config, const Shard& shard,
                    const DocumentSink& sink) {
  const auto names = shard_names(config, shard);
  std::vector<std::vector<std::string_view>> name_tokens;
  name_tokens.reserve(names.size());
  for (const NameEntry* n : names) {
    name_tokens.push_back(split_whitespace(n->name));
  }
  std::vector<std::vector<std::string_view>> chem_tokens;
  chem_tokens.reserve(config.chemicals.size());
  for (const ChemicalEntry& c : config.chemicals) {
    chem_tokens.push_back(split_whitespace(c.surface));
  }
  const std::string decade = std::to_string(shard.decade);

  for (const Template& tmpl : config.templates) {
    const CompiledTemplate compiled = compile(tmpl);
    for (std::size_t n = 0; n < names.size(); ++n) {
      const std::string rank = std::to_string(names[n]->rank);
      for (std::size_t c = 0; c < config.chemicals.size(); ++c) {
        Instance inst = fill(compiled, name_tokens[n], chem_tokens[c]);
        Document doc;
        doc.doc_id = synthetic_doc_id(tmpl.template_id, shard.gender,
                                      shard.decade, names[n]->rank, c);
        doc.group = shard.gender;
        doc.source_meta = {
            {"template", tmpl.template_id},
            {"decade", decade},
            {"rank", rank},
            {"chemical", std::to_string(c)},
            {"name_start", std::to_string(inst.name_start)},
            {"name_len", std::to_string(inst.name_len)},
        };
        doc.sentences.push_back(std::move(inst.sentence));
        sink(doc);
      }
    }
  }
}

void generate(const GenerationConfig& config, const DocumentSink& sink) {
  validate_config(config);
  for (const Shard& shard : plan_shards(config)) {
    generate_shard(config, shard, sink);
  }
}

bool is_counterfactual_pair(const Document& a, const Document& b) {
  if (!a.group || !b.group) return false;
  const bool opposite =
      (*a.group == Group::kMale && *b.group == Group::kFemale) ||
      (*a.group == Group::kFemale && *b.group == Group::kMale);
  if (!opposite) return false;
  for (const char* key : {"template", "decade", "rank", "chemical",
                          "name_start"}) {
    auto ia = a.source_meta.find(key);
    auto ib = b.source_meta.find(key);
    if (ia == a.source_meta.end() || ib == b.source_meta.end() ||
        ia->second != ib->second) {
      return false;
    }
  }
  if (a.sentences.size() != 1 || b.sentences.size() != 1) return false;
  auto meta_size = [](const Document& d, const char* key) -> std::size_t {
    auto it = d.source_meta.find(key);
    if (it == d.source_meta.end()) return 0;
    std::size_t v = 0;
    std::from_chars(it->second.data(), it->second.data() + it->second.size(),
                    v);
    return v;
  };
  const std::size_t start = meta_size(a, "name_start");
  const std::size_t len_a = meta_size(a, "name_len");
  const std::size_t len_b = meta_size(b, "name_len");
  const auto& ta = a.sentences[0].tokens();
  const auto& tb = b.sentences[0].tokens();
  if (len_a == 0 || len_b == 0 || start + len_a > ta.size() ||
      start + len_b > tb.size() || ta.size() - len_a != tb.size() - len_b) {
    return false;
  }
  for (std::size_t i = 0; i < start; ++i) {
    if (ta[i] != tb[i]) return false;
  }
  for (std::size_t i = 0; i < len_a; ++i) {
    if (!ta[start + i].tag().is_outside()) return false;
  }
  for (std::size_t i = 0; i < len_b; ++i) {
    if (!tb[start + i].tag().is_outside()) return false;
  }
  for (std::size_t i = start + len_a, j = start + len_b; i < ta.size();
       ++i, ++j) {
    if (ta[i] != tb[j]) return false;
  }
  return true;
}

std::vector<Template> load_templates(std::istream& in) {
  std::vector<Template> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig, "expected template_id<TAB>text",
                  line_no);
    }
    Template t{line.substr(0, tab), line.substr(tab + 1)};
    try {
      validate_template(t);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig, e.message(), line_no);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<NameEntry> load_names(std::istream& in) {
  std::vector<NameEntry> out;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (first && trim(line) == "name,gender,decade,rank") {
      first = false;
      continue;
    }
    first = false;
    const auto cols = split(line, ',');
    if (cols.size() != 4) {
      throw Error(ErrorCode::kInvalidConfig,
                  "expected name,gender,decade,rank", line_no);
    }
    NameEntry entry;
    entry.name = std::string(trim(cols[0]));
    const auto gender = parse_group(trim(cols[1]));
    if (!gender || *gender == Group::kUnknown) {
      throw Error(ErrorCode::kInvalidConfig, "gender must be male or female",
                  line_no);
    }
    entry.gender = *gender;
    entry.decade = parse_int(cols[2], line_no, "decade");
    entry.rank = parse_int(cols[3], line_no, "rank");
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<ChemicalEntry> load_chemicals(std::istream& in) {
  std::vector<ChemicalEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::size_t tab = line.find('\t');
    ChemicalEntry entry;
    entry.surface = std::string(trim(std::string_view(line).substr(0, tab)));
    if (tab != std::string::npos) {
      const auto id = trim(std::string_view(line).substr(tab + 1));
      if (!id.empty()) entry.source_id = std::string(id);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace chembias
