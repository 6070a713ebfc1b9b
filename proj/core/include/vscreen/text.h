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

// Text analysis primitives consumed by the feature engine: tokenization,
// sentence segmentation, lemmatization, syllable counting and finite-clause
// detection. POS tagging lives in tagger.h; TextPipeline wires them together.

#ifndef VSCREEN_TEXT_H_
#define VSCREEN_TEXT_H_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace vscreen::text {

// Coarse universal tag set.
enum class PosTag : unsigned char {
  kNoun,
  kVerb,
  kAux,
  kAdj,
  kAdv,
  kPron,
  kDet,
  kAdp,
  kConj,
  kSconj,
  kNum,
  kPart,
  kIntj,
  kPunct,
  kSym,
  kX,
  kPropn,
};

inline constexpr std::size_t kNumPosTags = 17;

std::string_view PosTagName(PosTag tag);
std::optional<PosTag> ParsePosTag(std::string_view name);
bool IsFunctionPos(PosTag tag);

struct Token {
  std::string surface;
  std::string lemma;
  PosTag pos = PosTag::kX;
  bool is_function_word = false;
  // Participle or gerund reading of a verb/aux; such tokens head no clause.
  bool participle = false;

  bool is_punct() const { return pos == PosTag::kPunct; }
};

struct Sentence {
  std::vector<Token> tokens;
  int index_in_document = 0;
};

// Abbreviations that end in '.' but do not end a sentence ("dr.", "e.g.").
class Abbreviations {
 public:
  Abbreviations() = default;
  explicit Abbreviations(std::vector<std::string> entries);
  static Abbreviations Load(const std::filesystem::path& path);

  bool Contains(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

// Characters the tokenizer separates into their own tokens.
bool IsPunctChar(char c);
bool IsSentenceTerminator(char c);

// Whitespace split with punctuation separated into its own tokens.
// Contractions ("can't") stay whole; internal periods ("3.5") stay whole, and
// a trailing period stays attached when the word is a known abbreviation.
std::vector<std::string> Tokenize(std::string_view sentence_text,
                                  const Abbreviations* abbreviations = nullptr);

// Splits after '.', '!' or '?' when followed by whitespace or end of text,
// except after an abbreviation. Segments are trimmed and empties dropped.
std::vector<std::string> SegmentSentences(std::string_view text,
                                          const Abbreviations& abbreviations);

// Vowel-group count with the silent final 'e' rule; never below 1.
int CountSyllables(std::string_view word);

// Number of clause-heading finite verbs. A verb/aux token counts when it is
// not a participle, does not directly follow "to", and does not continue a
// verb chain (the closest preceding non-adverb, non-particle token is not
// itself a verb or aux). "she has been running" therefore counts once.
int CountFiniteClauses(const Sentence& sentence);

// Suffix-rule lemmatizer with an irregular-form exception table.
class Lemmatizer {
 public:
  Lemmatizer() = default;
  // Table rows: pos<TAB>form<TAB>lemma.
  static Lemmatizer Load(const std::filesystem::path& path);
  void AddException(PosTag pos, std::string form, std::string lemma);

  std::string Lemmatize(const Token& token) const;
  std::string Lemmatize(std::string_view surface, PosTag pos) const;

 private:
  std::unordered_map<std::string, std::string> exceptions_;  // "pos|form"
};

}  // namespace vscreen::text

#endif  // VSCREEN_TEXT_H_
