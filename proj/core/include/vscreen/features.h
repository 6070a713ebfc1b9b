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

// Per-sentence linguistic feature extraction with a two-sentence lookahead
// window, user-level aggregation and z-scored contours.
//
// Undefined values (lookahead past the end of a post, type-token ratios of
// fewer than two words, readability of a wordless sentence) are stored as 0
// with the cell flagged in a parallel missing mask. Means skip flagged cells.

#ifndef VSCREEN_FEATURES_H_
#define VSCREEN_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "vscreen/corpus.h"
#include "vscreen/lexicon.h"
#include "vscreen/registry.h"
#include "vscreen/tagger.h"
#include "vscreen/text.h"

namespace vscreen::features {

// ---- Group operations -----------------------------------------------------

struct SyntacticProfile {
  double length = 0;  // words
  double clauses = 0;
  double words_per_clause = 0;
  double subordination_rate = 0;
  double coordination_rate = 0;
  double sconj_count = 0;
  double conj_count = 0;
  double participial = 0;  // verbs directly after a noun
  double verb_count = 0;
  double noun_count = 0;
  double adp_count = 0;
  double adj_noun = 0;  // adjective directly before a noun
};
SyntacticProfile ComputeSyntactic(const text::Sentence& sentence);

// Tokens seen so far in the current post, including the current sentence.
struct DocumentCache {
  std::unordered_set<std::string> types;
  std::size_t tokens = 0;
  void Add(const text::Sentence& sentence);
};

struct LexicalProfile {
  std::optional<double> bttr, ttr, rttr, cttr, lemma_ttr;
  std::optional<double> bttr_doc, ttr_doc, rttr_doc;
  double distinct_words = 0;
  std::optional<double> density, sophistication, prevalence;
  std::optional<double> word_length, syllables_per_word, long_words;
};
LexicalProfile ComputeLexical(const text::Sentence& sentence,
                              const FrequencyRanks& ranks,
                              const DocumentCache& cache);

struct ReadabilityProfile {
  std::optional<double> fkgl, fre, ari, cli, fog, smog, lix, rix;
  double polysyllables = 0;
  double syllables = 0;
};
ReadabilityProfile ComputeReadability(std::span<const text::Sentence> sentences);

// 0.39 * words/sentences + 11.8 * syllables/words - 15.59 over non-punctuation
// tokens. Throws when there are no words.
double ComputeFkgl(std::span<const text::Sentence> sentences);

// ln(types) / ln(tokens); nullopt below two tokens.
std::optional<double> ComputeBttr(const std::vector<std::string>& tokens);

// Jaccard similarity of the selected type set of `a` and the union over the
// window. Empty window or two empty sets give 0.
double ComputeOverlap(const text::Sentence& a,
                      std::span<const text::Sentence> window,
                      OverlapSelector selector);

// Mean normalized log frequency ln(1+c)/ln(1+max) over the sentence's
// word n-grams; 0 when the sentence is shorter than the table order.
double ComputeNgramNlf(const text::Sentence& sentence, const NgramTable& table);
// Share of the sentence's n-grams present in the table.
double ComputeNgramCoverage(const text::Sentence& sentence,
                            const NgramTable& table);

// Matched words / non-punctuation tokens; 0 for a wordless sentence.
double ComputeLexiconRate(const text::Sentence& sentence, const Lexicon& lexicon);

// ---- Extraction -------------------------------------------------------------

struct SentenceFeatureVector {
  std::vector<double> values;
  std::vector<uint8_t> missing;  // 1 where the value is undefined (stored 0)
};

struct UserFeatureSeries {
  std::string user_id;
  int label = 0;
  std::size_t cols = 0;
  std::vector<double> values;    // rows x cols, row-major
  std::vector<uint8_t> missing;  // same shape
  std::vector<std::size_t> post_boundaries;  // first row of each post

  std::size_t rows() const { return cols == 0 ? 0 : values.size() / cols; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  bool is_missing(std::size_t r, std::size_t c) const {
    return missing[r * cols + c] != 0;
  }
  void AppendRow(const SentenceFeatureVector& row);
};

class FeatureExtractor {
 public:
  // Resolves every recipe against the resources; unknown lexicons or tables
  // are errors here rather than during extraction. Both arguments must
  // outlive the extractor.
  FeatureExtractor(const FeatureRegistry& registry,
                   const FeatureResources& resources);

  const FeatureRegistry& registry() const { return *registry_; }
  std::size_t size() const { return registry_->size(); }

  // `following` holds up to two sentences after `current` in the same post;
  // `cache` already includes `current`.
  SentenceFeatureVector ExtractSentence(const text::Sentence& current,
                                        std::span<const text::Sentence> following,
                                        const DocumentCache& cache) const;

  // One row per sentence of a post.
  void ExtractDocument(const std::vector<text::Sentence>& sentences,
                       UserFeatureSeries& out) const;

 private:
  struct CompiledFeature {
    RecipeKind kind;
    OverlapSelector selector = OverlapSelector::kLemma;
    int window = 0;
    const NgramTable* table = nullptr;
    std::size_t lexicon_slot = 0;
  };

  const FeatureRegistry* registry_;
  const FeatureResources* resources_;
  std::vector<CompiledFeature> compiled_;
  std::vector<const Lexicon*> lexicons_;  // by slot
  bool needs_lexical_ = false;
  bool needs_readability_ = false;
};

// Analyzes every post of the user in order. Throws if no sentence remains.
UserFeatureSeries ExtractUserSeries(const corpus::UserRecord& user,
                                    const text::TextPipeline& pipeline,
                                    const FeatureExtractor& extractor);

// Per-user extraction on up to `workers` threads (0 = default); output order
// follows the input, independent of scheduling.
std::vector<UserFeatureSeries> ExtractUsers(
    const std::vector<corpus::UserRecord>& users,
    const text::TextPipeline& pipeline, const FeatureExtractor& extractor,
    std::size_t workers = 1);

// Column means over non-missing cells; an all-missing column yields 0.
std::vector<double> AggregateUser(const UserFeatureSeries& series);

struct ContourPoint {
  std::size_t sentence_index = 0;
  std::string code;
  double z = 0;
};

// Per code, population z-scores over the series' defined cells; constant
// columns give zeros. Requires at least two rows.
std::vector<ContourPoint> ZscoreContour(const UserFeatureSeries& series,
                                        const FeatureRegistry& registry,
                                        const std::vector<std::string>& codes);

// ---- Files -------------------------------------------------------------------

// user_id column, then one column per feature code.
void WriteUserMatrixCsv(const std::filesystem::path& path,
                        const FeatureRegistry& registry,
                        const std::vector<UserFeatureSeries>& series);
// user_id, post_index, sentence_index, then one column per code; missing
// cells are empty fields.
void WriteSeriesCsv(const std::filesystem::path& path,
                    const FeatureRegistry& registry,
                    const std::vector<UserFeatureSeries>& series);
// Sidecar "<path>.manifest.json" with the registry fingerprint.
void WriteFeatureManifest(const std::filesystem::path& matrix_path,
                          const FeatureRegistry& registry,
                          const std::string& mode, std::size_t rows);

void WriteContourTsv(const std::filesystem::path& path,
                     const std::vector<ContourPoint>& points);
// Static line plot of the contour, one polyline per code.
std::string RenderContourSvg(const std::vector<ContourPoint>& points);

}  // namespace vscreen::features

#endif  // VSCREEN_FEATURES_H_
