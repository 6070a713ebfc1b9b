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

// Averaged-perceptron part-of-speech tagger plus the text pipeline that turns
// a normalized post into tagged, lemmatized sentences.

#ifndef VSCREEN_TAGGER_H_
#define VSCREEN_TAGGER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vscreen/text.h"

namespace vscreen::text {

// Model classes: the 17 coarse tags plus a participle reading of verbs.
inline constexpr std::size_t kNumTaggerClasses = kNumPosTags + 1;
inline constexpr std::size_t kParticipleClass = kNumPosTags;

struct TaggedWord {
  std::string word;
  std::string tag;  // coarse tag name or "verb:part"
};
using TaggedSentence = std::vector<TaggedWord>;

// Reads "token<TAB>tag" lines with blank lines between sentences.
std::vector<TaggedSentence> LoadTaggedCorpus(const std::filesystem::path& path);

// Word -> tag for unambiguous closed-class words, consulted before the model.
class ClosedClassLexicon {
 public:
  ClosedClassLexicon() = default;
  static ClosedClassLexicon Load(const std::filesystem::path& path);
  void Add(std::string word, PosTag tag);
  const PosTag* Find(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, PosTag> entries_;
};

class TaggerModel {
 public:
  using Weights = std::array<double, kNumTaggerClasses>;

  struct TrainOptions {
    int iterations = 10;
    uint64_t seed = 7;
  };

  TaggerModel() = default;

  static TaggerModel Train(const std::vector<TaggedSentence>& corpus,
                           const ClosedClassLexicon& closed_class,
                           const TrainOptions& options);
  static TaggerModel Train(const std::vector<TaggedSentence>& corpus,
                           const ClosedClassLexicon& closed_class) {
    return Train(corpus, closed_class, TrainOptions{});
  }

  // "VSTAG1" header line, then feature<TAB>class<TAB>weight rows.
  static TaggerModel Load(const std::filesystem::path& path);
  static TaggerModel Parse(std::string_view contents);
  std::string Serialize() const;

  bool trained() const { return !weights_.empty(); }
  bool averaged() const { return averaged_; }
  std::size_t num_features() const { return weights_.size(); }

  // Class index per word; closed-class words are fixed by the lexicon.
  // Throws if the model is untrained.
  std::vector<std::size_t> Predict(const std::vector<std::string>& words,
                                   const ClosedClassLexicon& closed_class) const;

  const std::unordered_map<std::string, Weights>& weights() const {
    return weights_;
  }

 private:
  std::size_t Score(const std::vector<std::string>& features) const;

  std::unordered_map<std::string, Weights> weights_;
  bool averaged_ = false;
};

std::string_view TaggerClassName(std::size_t cls);
std::size_t TaggerClassFromName(std::string_view name);

// Tags `tokens` and returns one Token per input (lemma left empty).
std::vector<Token> PosTagTokens(const std::vector<std::string>& tokens,
                                const TaggerModel& model,
                                const ClosedClassLexicon& closed_class);

// Tokenize -> tag -> lemmatize for already-normalized text.
class TextPipeline {
 public:
  TextPipeline(Abbreviations abbreviations, ClosedClassLexicon closed_class,
               TaggerModel tagger, Lemmatizer lemmatizer);

  // Loads abbreviations.txt, closed_class.tsv, tagger.vstag and
  // irregular_lemmas.tsv from an asset directory.
  static TextPipeline Load(const std::filesystem::path& assets_dir);

  std::vector<std::string> Segment(std::string_view text) const;
  Sentence AnalyzeSentence(std::string_view sentence_text, int index) const;
  std::vector<Sentence> Analyze(std::string_view document) const;

  const Abbreviations& abbreviations() const { return abbreviations_; }
  const ClosedClassLexicon& closed_class() const { return closed_class_; }
  const TaggerModel& tagger() const { return tagger_; }
  const Lemmatizer& lemmatizer() const { return lemmatizer_; }

 private:
  Abbreviations abbreviations_;
  ClosedClassLexicon closed_class_;
  TaggerModel tagger_;
  Lemmatizer lemmatizer_;
};

}  // namespace vscreen::text

#endif  // VSCREEN_TAGGER_H_
