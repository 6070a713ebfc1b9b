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

// The ordered, fingerprinted list of features and how each is computed.

#ifndef VSCREEN_REGISTRY_H_
#define VSCREEN_REGISTRY_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vscreen::features {

enum class FeatureGroup : unsigned char {
  kSyntactic,
  kLexical,
  kCohesion,
  kStylistics,
  kReadability,
  kGrammatical,
  kTopical,
  kEmotion,
};
inline constexpr std::size_t kNumFeatureGroups = 8;

std::string_view FeatureGroupName(FeatureGroup group);
std::optional<FeatureGroup> ParseFeatureGroup(std::string_view name);

enum class RecipeKind {
  // syntactic
  kSentenceLength,
  kClauses,
  kWordsPerClause,
  kSubordinationRate,
  kCoordinationRate,
  kSconjCount,
  kConjCount,
  kParticipial,
  kVerbCount,
  kNounCount,
  kAdpCount,
  kAdjNoun,
  // lexical
  kBttr,
  kTtr,
  kRttr,
  kCttr,
  kLemmaTtr,
  kBttrDoc,
  kTtrDoc,
  kRttrDoc,
  kDistinctWords,
  kLexicalDensity,
  kSophistication,
  kPrevalence,
  kWordLength,
  kSyllablesPerWord,
  kLongWords,
  // readability
  kFkgl,
  kFre,
  kAri,
  kCli,
  kFog,
  kSmog,
  kLix,
  kRix,
  kPolysyllables,
  kSyllables,
  // parameterized
  kOverlap,      // selector, window
  kNgramNlf,     // register, order
  kNgramCoverage,  // register, order
  kLexiconRate,  // lexicon code
};

enum class OverlapSelector { kLemma, kPronoun, kFunctionWord, kAdverb, kNoun };

std::string_view OverlapSelectorName(OverlapSelector selector);

struct Recipe {
  RecipeKind kind = RecipeKind::kSentenceLength;
  std::string text;  // canonical recipe string, e.g. "coh.overlap:lemma:2"
  // Parameters (meaning depends on kind).
  OverlapSelector selector = OverlapSelector::kLemma;
  int window = 0;       // overlap lookahead (1 or 2)
  std::string name;     // n-gram register or lexicon code
  int order = 0;        // n-gram order

  // Throws on unknown recipes or malformed parameters.
  static Recipe Parse(std::string_view text);

  // Group implied by the recipe prefix ("syn." -> syntactic, ...).
  FeatureGroup group() const;
};

struct FeatureSpec {
  std::string code;
  FeatureGroup group = FeatureGroup::kSyntactic;
  Recipe recipe;
  std::string description;
};

class FeatureRegistry {
 public:
  FeatureRegistry() = default;
  explicit FeatureRegistry(std::vector<FeatureSpec> specs);

  // Tab-separated rows: code, group, recipe[, description]. '#' comments.
  static FeatureRegistry Load(const std::filesystem::path& path);
  static FeatureRegistry Parse(std::string_view contents);

  std::size_t size() const { return specs_.size(); }
  const std::vector<FeatureSpec>& specs() const { return specs_; }
  const FeatureSpec& operator[](std::size_t i) const { return specs_[i]; }

  std::optional<std::size_t> IndexOf(std::string_view code) const;
  std::size_t RequireIndex(std::string_view code) const;
  std::vector<std::string> codes() const;

  // Column indices of each group, in registry order.
  const std::vector<std::size_t>& GroupColumns(FeatureGroup group) const {
    return group_columns_[static_cast<std::size_t>(group)];
  }

  // SHA-256 over the canonical code/group/recipe rows.
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  std::vector<FeatureSpec> specs_;
  std::unordered_map<std::string, std::size_t> index_;
  std::array<std::vector<std::size_t>, kNumFeatureGroups> group_columns_;
  std::string fingerprint_;
};

}  // namespace vscreen::features

#endif  // VSCREEN_REGISTRY_H_
