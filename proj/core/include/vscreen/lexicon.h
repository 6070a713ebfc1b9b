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

// Word lists, register n-gram tables and the frequency-rank list that back
// the dictionary and stylistic features.

#ifndef VSCREEN_LEXICON_H_
#define VSCREEN_LEXICON_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vscreen/text.h"

namespace vscreen::features {

enum class MatchMode { kLemma, kSurface };

class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::string code, MatchMode mode, std::vector<std::string> entries);

  // "VSLEX1 <code> <lemma|surface>" header, then one entry per line.
  static Lexicon Load(const std::filesystem::path& path);
  static Lexicon Parse(std::string_view contents);

  const std::string& code() const { return code_; }
  MatchMode mode() const { return mode_; }
  std::size_t size() const { return entries_.size(); }
  bool Contains(std::string_view word) const;

  // Lemma-mode lexicons match on the lemma and fall back to the surface.
  bool Matches(const text::Token& token) const;

 private:
  std::string code_;
  MatchMode mode_ = MatchMode::kLemma;
  std::unordered_set<std::string> entries_;
};

class NgramTable {
 public:
  NgramTable() = default;
  NgramTable(std::string register_name, int order,
             std::unordered_map<std::string, int64_t> counts);

  // "VSNGR1 <register> <order>" header, then "w1 w2[ w3]<TAB>count" rows.
  static NgramTable Load(const std::filesystem::path& path);
  static NgramTable Parse(std::string_view contents);

  const std::string& register_name() const { return register_; }
  int order() const { return order_; }
  int64_t max_count() const { return max_count_; }
  std::size_t size() const { return counts_.size(); }

  // Count of the space-joined n-gram, 0 if absent.
  int64_t Count(std::string_view ngram) const;

 private:
  std::string register_;
  int order_ = 2;
  int64_t max_count_ = 0;
  std::unordered_map<std::string, int64_t> counts_;
};

// One word per line, most frequent first; rank 1 is the first line.
class FrequencyRanks {
 public:
  FrequencyRanks() = default;
  explicit FrequencyRanks(const std::vector<std::string>& words_by_rank);
  static FrequencyRanks Load(const std::filesystem::path& path);

  // 0 when the word is unranked.
  std::size_t Rank(std::string_view word) const;
  std::size_t size() const { return ranks_.size(); }

 private:
  std::unordered_map<std::string, std::size_t> ranks_;
};

// Everything the extractor reads besides the registry, loaded from the
// asset directory (lexicons/*.lex, ngrams/*.ngr, frequency_ranks.txt).
struct FeatureResources {
  std::map<std::string, Lexicon> lexicons;       // by code
  std::map<std::string, NgramTable> ngram_tables;  // by "register:order"
  FrequencyRanks frequency_ranks;

  static FeatureResources Load(const std::filesystem::path& assets_dir);

  const Lexicon& lexicon(const std::string& code) const;
  const NgramTable& ngram_table(const std::string& register_name,
                                int order) const;
};

}  // namespace vscreen::features

#endif  // VSCREEN_LEXICON_H_
