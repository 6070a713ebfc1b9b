/*
 * Copyright 2026 The vscreen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vscreen/registry.h"

#include <charconv>
#include <utility>

#include "vscreen/common.h"

namespace vscreen::features {
namespace {

constexpr std::array<std::string_view, kNumFeatureGroups> kGroupNames = {
    "syntactic",   "lexical",     "cohesion", "stylistics",
    "readability", "grammatical", "topical",  "emotion"};

constexpr std::pair<std::string_view, RecipeKind> kPlainRecipes[] = {
    {"syn.length", RecipeKind::kSentenceLength},
    {"syn.clauses", RecipeKind::kClauses},
    {"syn.words_per_clause", RecipeKind::kWordsPerClause},
    {"syn.subordination_rate", RecipeKind::kSubordinationRate},
    {"syn.coordination_rate", RecipeKind::kCoordinationRate},
    {"syn.sconj_count", RecipeKind::kSconjCount},
    {"syn.conj_count", RecipeKind::kConjCount},
    {"syn.participial", RecipeKind::kParticipial},
    {"syn.verb_count", RecipeKind::kVerbCount},
    {"syn.noun_count", RecipeKind::kNounCount},
    {"syn.adp_count", RecipeKind::kAdpCount},
    {"syn.adj_noun", RecipeKind::kAdjNoun},
    {"lex.bttr", RecipeKind::kBttr},
    {"lex.ttr", RecipeKind::kTtr},
    {"lex.rttr", RecipeKind::kRttr},
    {"lex.cttr", RecipeKind::kCttr},
    {"lex.lemma_ttr", RecipeKind::kLemmaTtr},
    {"lex.bttr_doc", RecipeKind::kBttrDoc},
    {"lex.ttr_doc", RecipeKind::kTtrDoc},
    {"lex.rttr_doc", RecipeKind::kRttrDoc},
    {"lex.ndw", RecipeKind::kDistinctWords},
    {"lex.density", RecipeKind::kLexicalDensity},
    {"lex.sophistication", RecipeKind::kSophistication},
    {"lex.prevalence", RecipeKind::kPrevalence},
    {"lex.word_length", RecipeKind::kWordLength},
    {"lex.syllables_per_word", RecipeKind::kSyllablesPerWord},
    {"lex.long_words", RecipeKind::kLongWords},
    {"read.fkgl", RecipeKind::kFkgl},
    {"read.fre", RecipeKind::kFre},
    {"read.ari", RecipeKind::kAri},
    {"read.cli", RecipeKind::kCli},
    {"read.fog", RecipeKind::kFog},
    {"read.smog", RecipeKind::kSmog},
    {"read.lix", RecipeKind::kLix},
    {"read.rix", RecipeKind::kRix},
    {"read.polysyllables", RecipeKind::kPolysyllables},
    {"read.syllables", RecipeKind::kSyllables},
};

constexpr std::array<std::string_view, 5> kSelectorNames = {
    "lemma", "pronoun", "function_word", "adverb", "noun"};

int ParseSmallInt(const std::string& text, std::string_view recipe) {
  int value = 0;
  const auto [p, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw Error("bad integer parameter in recipe " + std::string(recipe));
  }
  return value;
}

}  // namespace

std::string_view FeatureGroupName(FeatureGroup group) {
  return kGroupNames[static_cast<std::size_t>(group)];
}

std::optional<FeatureGroup> ParseFeatureGroup(std::string_view name) {
  for (std::size_t i = 0; i < kGroupNames.size(); ++i) {
    if (kGroupNames[i] == name) return static_cast<FeatureGroup>(i);
  }
  return std::nullopt;
}

std::string_view OverlapSelectorName(OverlapSelector selector) {
  return kSelectorNames[static_cast<std::size_t>(selector)];
}

Recipe Recipe::Parse(std::string_view text) {
  Recipe r;
  r.text = std::string(text);
  for (const auto& [name, kind] : kPlainRecipes) {
    if (name == text) {
      r.kind = kind;
      return r;
    }
  }
  const auto parts = Split(text, ':');
  const std::string& head = parts[0];
  if (head == "coh.overlap") {
    if (parts.size() != 3) throw Error("coh.overlap needs selector and window");
    bool found = false;
    for (std::size_t i = 0; i < kSelectorNames.size(); ++i) {
      if (kSelectorNames[i] == parts[1]) {
        r.selector = static_cast<OverlapSelector>(i);
        found = true;
      }
    }
    if (!found) throw Error("unknown overlap selector: " + parts[1]);
    r.window = ParseSmallInt(parts[2], text);
    if (r.window != 1 && r.window != 2) {
      throw Error("overlap window must be 1 or 2: " + r.text);
    }
    r.kind = RecipeKind::kOverlap;
    return r;
  }
  if (head == "sty.nlf" || head == "sty.coverage") {
    if (parts.size() != 3) throw Error(head + " needs register and order");
    r.name = parts[1];
    r.order = ParseSmallInt(parts[2], text);
    if (r.order < 1) throw Error("n-gram order must be positive: " + r.text);
    r.kind = head == "sty.nlf" ? RecipeKind::kNgramNlf
                               : RecipeKind::kNgramCoverage;
    return r;
  }
  if (head == "coh.lexicon" || head == "gram.lexicon" ||
      head == "top.lexicon" || head == "emo.lexicon") {
    if (parts.size() != 2 || parts[1].empty()) {
      throw Error(head + " needs a lexicon code");
    }
    r.name = parts[1];
    r.kind = RecipeKind::kLexiconRate;
    return r;
  }
  throw Error("unknown recipe: " + r.text);
}

FeatureGroup Recipe::group() const {
  const auto dot = text.find('.');
  const std::string prefix = text.substr(0, dot);
  if (prefix == "syn") return FeatureGroup::kSyntactic;
  if (prefix == "lex") return FeatureGroup::kLexical;
  if (prefix == "coh") return FeatureGroup::kCohesion;
  if (prefix == "sty") return FeatureGroup::kStylistics;
  if (prefix == "read") return FeatureGroup::kReadability;
  if (prefix == "gram") return FeatureGroup::kGrammatical;
  if (prefix == "top") return FeatureGroup::kTopical;
  if (prefix == "emo") return FeatureGroup::kEmotion;
  throw Error("recipe without group prefix: " + text);
}

FeatureRegistry::FeatureRegistry(std::vector<FeatureSpec> specs)
    : specs_(std::move(specs)) {
  if (specs_.empty()) throw Error("feature registry is empty");
  std::string canonical;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& s = specs_[i];
    if (s.code.empty()) throw Error("feature with empty code");
    if (!index_.emplace(s.code, i).second) {
      throw Error("duplicate feature code " + s.code);
    }
    if (s.recipe.group() != s.group) {
      throw Error("feature " + s.code + ": recipe " + s.recipe.text +
                  " does not belong to group " +
                  std::string(FeatureGroupName(s.group)));
    }
    group_columns_[static_cast<std::size_t>(s.group)].push_back(i);
    canonical += s.code + '\t' + std::string(FeatureGroupName(s.group)) + '\t' +
                 s.recipe.text + '\n';
  }
  for (std::size_t g = 0; g < kNumFeatureGroups; ++g) {
    if (group_columns_[g].empty()) {
      throw Error("feature registry has no " +
                  std::string(kGroupNames[g]) + " features");
    }
  }
  fingerprint_ = Sha256Hex(canonical);
}

FeatureRegistry FeatureRegistry::Load(const std::filesystem::path& path) {
  try {
    return Parse(ReadFile(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

FeatureRegistry FeatureRegistry::Parse(std::string_view contents) {
  std::vector<FeatureSpec> specs;
  std::size_t line_no = 0;
  for (const auto& raw : Split(contents, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty() || line.front() == '#') continue;
    const auto fields = Split(line, '\t');
    if (fields.size() < 3 || fields.size() > 4) {
      throw Error("line " + std::to_string(line_no) +
                  ": expected code, group, recipe[, description]");
    }
    FeatureSpec spec;
    spec.code = std::string(Trim(fields[0]));
    const auto group = ParseFeatureGroup(Trim(fields[1]));
    if (!group) {
      throw Error("line " + std::to_string(line_no) + ": unknown group " +
                  fields[1]);
    }
    spec.group = *group;
    try {
      spec.recipe = Recipe::Parse(Trim(fields[2]));
    } catch (const Error& e) {
      throw Error("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (fields.size() == 4) spec.description = std::string(Trim(fields[3]));
    specs.push_back(std::move(spec));
  }
  return FeatureRegistry(std::move(specs));
}

std::optional<std::size_t> FeatureRegistry::IndexOf(std::string_view code) const {
  const auto it = index_.find(std::string(code));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FeatureRegistry::RequireIndex(std::string_view code) const {
  const auto idx = IndexOf(code);
  if (!idx) throw Error("unknown feature code " + std::string(code));
  return *idx;
}

std::vector<std::string> FeatureRegistry::codes() const {
  std::vector<std::string> out;
  out.reserve(specs_.size());
  for (const auto& s : specs_) out.push_back(s.code);
  return out;
}

}  // namespace vscreen::features
