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

#include "vscreen/features.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "vscreen/common.h"

namespace vscreen::features {
namespace {

using text::PosTag;
using text::Sentence;
using text::Token;

// Words ranked above this are "sophisticated".
constexpr std::size_t kCommonWordRanks = 2000;
// Words longer than this many characters count as long.
constexpr int kLongWordChars = 6;
// Words with at least this many syllables count as polysyllabic.
constexpr int kPolysyllableMin = 3;

struct Word {
  const Token* token;
  std::string lower;
  int chars = 0;  // letters and digits
  int syllables = 0;
};

std::vector<Word> WordsOf(const Sentence& sentence) {
  std::vector<Word> words;
  words.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) {
    if (t.is_punct()) continue;
    Word w{&t, ToLower(t.surface)};
    for (char c : w.lower) {
      if (std::isalnum(static_cast<unsigned char>(c))) ++w.chars;
    }
    w.syllables = text::CountSyllables(w.lower);
    words.push_back(std::move(w));
  }
  return words;
}

std::string LemmaOf(const Word& w) {
  return w.token->lemma.empty() ? w.lower : w.token->lemma;
}

bool IsNounish(PosTag p) { return p == PosTag::kNoun || p == PosTag::kPropn; }

bool IsContent(PosTag p) {
  return p == PosTag::kNoun || p == PosTag::kPropn || p == PosTag::kVerb ||
         p == PosTag::kAdj || p == PosTag::kAdv;
}

std::size_t DistinctCount(std::vector<std::string> items) {
  std::sort(items.begin(), items.end());
  return static_cast<std::size_t>(
      std::unique(items.begin(), items.end()) - items.begin());
}

std::optional<double> BilogTtr(std::size_t types, std::size_t tokens) {
  if (tokens < 2) return std::nullopt;
  return std::log(static_cast<double>(types)) /
         std::log(static_cast<double>(tokens));
}

LexicalProfile LexicalFromWords(const std::vector<Word>& words,
                                const FrequencyRanks& ranks,
                                const DocumentCache& cache) {
  LexicalProfile p;
  const std::size_t n = words.size();
  std::vector<std::string> lowers, lemmas;
  lowers.reserve(n);
  lemmas.reserve(n);
  for (const auto& w : words) {
    lowers.push_back(w.lower);
    lemmas.push_back(LemmaOf(w));
  }
  const std::size_t types = DistinctCount(lowers);
  const std::size_t lemma_types = DistinctCount(lemmas);
  const double dn = static_cast<double>(n);
  const double dt = static_cast<double>(types);
  p.distinct_words = dt;
  p.bttr = BilogTtr(types, n);
  p.bttr_doc = BilogTtr(cache.types.size(), cache.tokens);
  if (cache.tokens > 0) {
    const double ct = static_cast<double>(cache.tokens);
    p.ttr_doc = static_cast<double>(cache.types.size()) / ct;
    p.rttr_doc = static_cast<double>(cache.types.size()) / std::sqrt(ct);
  }
  if (n == 0) return p;
  p.ttr = dt / dn;
  p.rttr = dt / std::sqrt(dn);
  p.cttr = dt / std::sqrt(2.0 * dn);
  p.lemma_ttr = static_cast<double>(lemma_types) / dn;

  std::size_t content = 0, sophisticated = 0, long_words = 0;
  double prevalence = 0, chars = 0, syllables = 0;
  const double log_size = std::log(static_cast<double>(ranks.size()) + 1.0);
  for (const auto& w : words) {
    content += IsContent(w.token->pos);
    const std::size_t rank = ranks.Rank(w.lower);
    if (rank == 0 || rank > kCommonWordRanks) ++sophisticated;
    if (rank > 0) prevalence += 1.0 - std::log(static_cast<double>(rank)) / log_size;
    chars += w.chars;
    syllables += w.syllables;
    long_words += w.chars > kLongWordChars;
  }
  p.density = static_cast<double>(content) / dn;
  p.sophistication = static_cast<double>(sophisticated) / dn;
  p.prevalence = prevalence / dn;
  p.word_length = chars / dn;
  p.syllables_per_word = syllables / dn;
  p.long_words = static_cast<double>(long_words) / dn;
  return p;
}

struct ReadabilityCounts {
  double sentences = 0, words = 0, syllables = 0, chars = 0, complex = 0,
         long_words = 0;
  void Add(const std::vector<Word>& words_in_sentence) {
    sentences += 1;
    for (const auto& w : words_in_sentence) {
      words += 1;
      syllables += w.syllables;
      chars += w.chars;
      complex += w.syllables >= kPolysyllableMin;
      long_words += w.chars > kLongWordChars;
    }
  }
};

ReadabilityProfile ReadabilityFromCounts(const ReadabilityCounts& c) {
  ReadabilityProfile p;
  p.polysyllables = c.complex;
  p.syllables = c.syllables;
  if (c.words == 0 || c.sentences == 0) return p;
  const double wps = c.words / c.sentences;
  const double spw = c.syllables / c.words;
  p.fkgl = 0.39 * wps + 11.8 * spw - 15.59;
  p.fre = 206.835 - 1.015 * wps - 84.6 * spw;
  p.ari = 4.71 * (c.chars / c.words) + 0.5 * wps - 21.43;
  p.cli = 0.0588 * (100.0 * c.chars / c.words) -
          0.296 * (100.0 * c.sentences / c.words) - 15.8;
  p.fog = 0.4 * (wps + 100.0 * c.complex / c.words);
  p.smog = 1.043 * std::sqrt(c.complex * 30.0 / c.sentences) + 3.1291;
  p.lix = wps + 100.0 * c.long_words / c.words;
  p.rix = c.long_words / c.sentences;
  return p;
}

// Sorted, unique selected types of one sentence.
std::vector<std::string> SelectTypes(const Sentence& s, OverlapSelector sel) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) {
    if (t.is_punct()) continue;
    const std::string lower = ToLower(t.surface);
    const std::string& lemma = t.lemma.empty() ? lower : t.lemma;
    switch (sel) {
      case OverlapSelector::kLemma:
        out.push_back(lemma);
        break;
      case OverlapSelector::kPronoun:
        if (t.pos == PosTag::kPron) out.push_back(lower);
        break;
      case OverlapSelector::kFunctionWord:
        if (t.is_function_word) out.push_back(lower);
        break;
      case OverlapSelector::kAdverb:
        if (t.pos == PosTag::kAdv) out.push_back(lemma);
        break;
      case OverlapSelector::kNoun:
        if (IsNounish(t.pos)) out.push_back(lemma);
        break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double Jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

double OverlapImpl(const Sentence& a, std::span<const Sentence> window,
                   OverlapSelector selector) {
  if (window.empty()) return 0.0;
  const auto mine = SelectTypes(a, selector);
  std::vector<std::string> theirs;
  for (const auto& s : window) {
    auto part = SelectTypes(s, selector);
    theirs.insert(theirs.end(), part.begin(), part.end());
  }
  std::sort(theirs.begin(), theirs.end());
  theirs.erase(std::unique(theirs.begin(), theirs.end()), theirs.end());
  return Jaccard(mine, theirs);
}

// Space-joined word n-grams of the requested order.
std::vector<std::string> NgramKeys(const std::vector<Word>& words, int order) {
  std::vector<std::string> keys;
  const auto n = static_cast<std::size_t>(order);
  if (order < 1 || words.size() < n) return keys;
  keys.reserve(words.size() - n + 1);
  for (std::size_t i = 0; i + n <= words.size(); ++i) {
    std::string key = words[i].lower;
    for (std::size_t k = 1; k < n; ++k) {
      key.push_back(' ');
      key += words[i + k].lower;
    }
    keys.push_back(std::move(key));
  }
  return keys;
}

double NlfFromKeys(const std::vector<std::string>& keys, const NgramTable& t) {
  if (keys.empty() || t.max_count() <= 0) return 0.0;
  const double denom = std::log1p(static_cast<double>(t.max_count()));
  double sum = 0;
  for (const auto& k : keys) {
    const int64_t c = t.Count(k);
    if (c > 0) sum += std::log1p(static_cast<double>(c)) / denom;
  }
  return sum / static_cast<double>(keys.size());
}

double CoverageFromKeys(const std::vector<std::string>& keys,
                        const NgramTable& t) {
  if (keys.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& k : keys) hits += t.Count(k) > 0;
  return static_cast<double>(hits) / static_cast<double>(keys.size());
}

void Put(SentenceFeatureVector& v, std::size_t i, std::optional<double> x) {
  if (x) {
    v.values[i] = *x;
  } else {
    v.values[i] = 0.0;
    v.missing[i] = 1;
  }
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

SyntacticProfile ComputeSyntactic(const Sentence& sentence) {
  SyntacticProfile p;
  const auto& toks = sentence.tokens;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const PosTag pos = toks[i].pos;
    if (pos == PosTag::kPunct) continue;
    p.length += 1;
    switch (pos) {
      case PosTag::kSconj:
        p.sconj_count += 1;
        break;
      case PosTag::kConj:
        p.conj_count += 1;
        break;
      case PosTag::kVerb:
        p.verb_count += 1;
        if (i > 0 && IsNounish(toks[i - 1].pos)) p.participial += 1;
        break;
      case PosTag::kNoun:
      case PosTag::kPropn:
        p.noun_count += 1;
        if (i > 0 && toks[i - 1].pos == PosTag::kAdj) p.adj_noun += 1;
        break;
      case PosTag::kAdp:
        p.adp_count += 1;
        break;
      default:
        break;
    }
  }
  p.clauses = text::CountFiniteClauses(sentence);
  p.words_per_clause = p.length / std::max(1.0, p.clauses);
  if (p.clauses > 0) {
    p.subordination_rate = p.sconj_count / p.clauses;
    p.coordination_rate = p.conj_count / p.clauses;
  }
  return p;
}

void DocumentCache::Add(const Sentence& sentence) {
  for (const auto& t : sentence.tokens) {
    if (t.is_punct()) continue;
    types.insert(ToLower(t.surface));
    ++tokens;
  }
}

LexicalProfile ComputeLexical(const Sentence& sentence,
                              const FrequencyRanks& ranks,
                              const DocumentCache& cache) {
  return LexicalFromWords(WordsOf(sentence), ranks, cache);
}

ReadabilityProfile ComputeReadability(std::span<const Sentence> sentences) {
  ReadabilityCounts counts;
  for (const auto& s : sentences) counts.Add(WordsOf(s));
  return ReadabilityFromCounts(counts);
}

double ComputeFkgl(std::span<const Sentence> sentences) {
  const auto p = ComputeReadability(sentences);
  if (!p.fkgl) throw Error("FKGL is undefined for text without words");
  return *p.fkgl;
}

std::optional<double> ComputeBttr(const std::vector<std::string>& tokens) {
  std::vector<std::string> copy(tokens);
  return BilogTtr(DistinctCount(std::move(copy)), tokens.size());
}

double ComputeOverlap(const Sentence& a, std::span<const Sentence> window,
                      OverlapSelector selector) {
  return OverlapImpl(a, window, selector);
}

double ComputeNgramNlf(const Sentence& sentence, const NgramTable& table) {
  return NlfFromKeys(NgramKeys(WordsOf(sentence), table.order()), table);
}

double ComputeNgramCoverage(const Sentence& sentence, const NgramTable& table) {
  return CoverageFromKeys(NgramKeys(WordsOf(sentence), table.order()), table);
}

double ComputeLexiconRate(const Sentence& sentence, const Lexicon& lexicon) {
  std::size_t words = 0, matched = 0;
  for (const auto& t : sentence.tokens) {
    if (t.is_punct()) continue;
    ++words;
    matched += lexicon.Matches(t);
  }
  return words == 0 ? 0.0
                    : static_cast<double>(matched) / static_cast<double>(words);
}

void UserFeatureSeries::AppendRow(const SentenceFeatureVector& row) {
  if (row.values.size() != cols || row.missing.size() != cols) {
    throw Error("feature row width mismatch");
  }
  values.insert(values.end(), row.values.begin(), row.values.end());
  missing.insert(missing.end(), row.missing.begin(), row.missing.end());
}

FeatureExtractor::FeatureExtractor(const FeatureRegistry& registry,
                                   const FeatureResources& resources)
    : registry_(&registry), resources_(&resources) {
  std::map<std::string, std::size_t> slots;
  for (const auto& spec : registry.specs()) {
    CompiledFeature f{spec.recipe.kind};
    switch (spec.recipe.kind) {
      case RecipeKind::kOverlap:
        f.selector = spec.recipe.selector;
        f.window = spec.recipe.window;
        break;
      case RecipeKind::kNgramNlf:
      case RecipeKind::kNgramCoverage:
        f.table = &resources.ngram_table(spec.recipe.name, spec.recipe.order);
        break;
      case RecipeKind::kLexiconRate: {
        const Lexicon& lex = resources.lexicon(spec.recipe.name);
        auto [it, inserted] = slots.emplace(spec.recipe.name, lexicons_.size());
        if (inserted) lexicons_.push_back(&lex);
        f.lexicon_slot = it->second;
        break;
      }
      default:
        break;
    }
    switch (spec.recipe.kind) {
      case RecipeKind::kBttr:
      case RecipeKind::kTtr:
      case RecipeKind::kRttr:
      case RecipeKind::kCttr:
      case RecipeKind::kLemmaTtr:
      case RecipeKind::kBttrDoc:
      case RecipeKind::kTtrDoc:
      case RecipeKind::kRttrDoc:
      case RecipeKind::kDistinctWords:
      case RecipeKind::kLexicalDensity:
      case RecipeKind::kSophistication:
      case RecipeKind::kPrevalence:
      case RecipeKind::kWordLength:
      case RecipeKind::kSyllablesPerWord:
      case RecipeKind::kLongWords:
        needs_lexical_ = true;
        break;
      case RecipeKind::kFkgl:
      case RecipeKind::kFre:
      case RecipeKind::kAri:
      case RecipeKind::kCli:
      case RecipeKind::kFog:
      case RecipeKind::kSmog:
      case RecipeKind::kLix:
      case RecipeKind::kRix:
      case RecipeKind::kPolysyllables:
      case RecipeKind::kSyllables:
        needs_readability_ = true;
        break;
      default:
        break;
    }
    compiled_.push_back(f);
  }
}

SentenceFeatureVector FeatureExtractor::ExtractSentence(
    const Sentence& current, std::span<const Sentence> following,
    const DocumentCache& cache) const {
  const std::size_t F = compiled_.size();
  SentenceFeatureVector v;
  v.values.assign(F, 0.0);
  v.missing.assign(F, 0);

  const auto words = WordsOf(current);
  const SyntacticProfile syn = ComputeSyntactic(current);
  LexicalProfile lex;
  if (needs_lexical_) lex = LexicalFromWords(words, resources_->frequency_ranks, cache);
  ReadabilityProfile read;
  if (needs_readability_) {
    ReadabilityCounts counts;
    counts.Add(words);
    read = ReadabilityFromCounts(counts);
  }
  std::vector<std::string> keys_by_order[4];
  auto keys = [&](int order) -> const std::vector<std::string>& {
    if (order >= 1 && order <= 3) {
      auto& slot = keys_by_order[order];
      if (slot.empty()) slot = NgramKeys(words, order);
      return slot;
    }
    static thread_local std::vector<std::string> scratch;
    scratch = NgramKeys(words, order);
    return scratch;
  };

  // Lexicon match counts per slot.
  std::vector<std::size_t> lexicon_hits(lexicons_.size(), 0);
  if (!lexicons_.empty() && !words.empty()) {
    for (const auto& w : words) {
      const std::string& lemma = w.token->lemma;
      for (std::size_t s = 0; s < lexicons_.size(); ++s) {
        const Lexicon& lexicon = *lexicons_[s];
        bool hit = lexicon.Contains(w.lower);
        if (!hit && lexicon.mode() == MatchMode::kLemma && !lemma.empty()) {
          hit = lexicon.Contains(lemma);
        }
        lexicon_hits[s] += hit;
      }
    }
  }
  const double n_words = static_cast<double>(words.size());

  for (std::size_t i = 0; i < F; ++i) {
    const CompiledFeature& f = compiled_[i];
    switch (f.kind) {
      case RecipeKind::kSentenceLength: v.values[i] = syn.length; break;
      case RecipeKind::kClauses: v.values[i] = syn.clauses; break;
      case RecipeKind::kWordsPerClause: v.values[i] = syn.words_per_clause; break;
      case RecipeKind::kSubordinationRate: v.values[i] = syn.subordination_rate; break;
      case RecipeKind::kCoordinationRate: v.values[i] = syn.coordination_rate; break;
      case RecipeKind::kSconjCount: v.values[i] = syn.sconj_count; break;
      case RecipeKind::kConjCount: v.values[i] = syn.conj_count; break;
      case RecipeKind::kParticipial: v.values[i] = syn.participial; break;
      case RecipeKind::kVerbCount: v.values[i] = syn.verb_count; break;
      case RecipeKind::kNounCount: v.values[i] = syn.noun_count; break;
      case RecipeKind::kAdpCount: v.values[i] = syn.adp_count; break;
      case RecipeKind::kAdjNoun: v.values[i] = syn.adj_noun; break;
      case RecipeKind::kBttr: Put(v, i, lex.bttr); break;
      case RecipeKind::kTtr: Put(v, i, lex.ttr); break;
      case RecipeKind::kRttr: Put(v, i, lex.rttr); break;
      case RecipeKind::kCttr: Put(v, i, lex.cttr); break;
      case RecipeKind::kLemmaTtr: Put(v, i, lex.lemma_ttr); break;
      case RecipeKind::kBttrDoc: Put(v, i, lex.bttr_doc); break;
      case RecipeKind::kTtrDoc: Put(v, i, lex.ttr_doc); break;
      case RecipeKind::kRttrDoc: Put(v, i, lex.rttr_doc); break;
      case RecipeKind::kDistinctWords: v.values[i] = lex.distinct_words; break;
      case RecipeKind::kLexicalDensity: Put(v, i, lex.density); break;
      case RecipeKind::kSophistication: Put(v, i, lex.sophistication); break;
      case RecipeKind::kPrevalence: Put(v, i, lex.prevalence); break;
      case RecipeKind::kWordLength: Put(v, i, lex.word_length); break;
      case RecipeKind::kSyllablesPerWord: Put(v, i, lex.syllables_per_word); break;
      case RecipeKind::kLongWords: Put(v, i, lex.long_words); break;
      case RecipeKind::kFkgl: Put(v, i, read.fkgl); break;
      case RecipeKind::kFre: Put(v, i, read.fre); break;
      case RecipeKind::kAri: Put(v, i, read.ari); break;
      case RecipeKind::kCli: Put(v, i, read.cli); break;
      case RecipeKind::kFog: Put(v, i, read.fog); break;
      case RecipeKind::kSmog: Put(v, i, read.smog); break;
      case RecipeKind::kLix: Put(v, i, read.lix); break;
      case RecipeKind::kRix: Put(v, i, read.rix); break;
      case RecipeKind::kPolysyllables: v.values[i] = read.polysyllables; break;
      case RecipeKind::kSyllables: v.values[i] = read.syllables; break;
      case RecipeKind::kOverlap:
        if (following.empty()) {
          Put(v, i, std::nullopt);
        } else {
          const std::size_t take =
              std::min(following.size(), static_cast<std::size_t>(f.window));
          v.values[i] = OverlapImpl(current, following.first(take), f.selector);
        }
        break;
      case RecipeKind::kNgramNlf:
        v.values[i] = NlfFromKeys(keys(f.table->order()), *f.table);
        break;
      case RecipeKind::kNgramCoverage:
        v.values[i] = CoverageFromKeys(keys(f.table->order()), *f.table);
        break;
      case RecipeKind::kLexiconRate:
        v.values[i] = words.empty() ? 0.0
                                    : static_cast<double>(
                                          lexicon_hits[f.lexicon_slot]) /
                                          n_words;
        break;
    }
  }
  return v;
}

void FeatureExtractor::ExtractDocument(const std::vector<Sentence>& sentences,
                                       UserFeatureSeries& out) const {
  if (out.cols == 0) out.cols = compiled_.size();
  DocumentCache cache;
  const std::span<const Sentence> all(sentences);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    cache.Add(sentences[i]);
    const std::size_t ahead = std::min<std::size_t>(2, sentences.size() - i - 1);
    out.AppendRow(ExtractSentence(sentences[i], all.subspan(i + 1, ahead), cache));
  }
}

UserFeatureSeries ExtractUserSeries(const corpus::UserRecord& user,
                                    const text::TextPipeline& pipeline,
                                    const FeatureExtractor& extractor) {
  UserFeatureSeries series;
  series.user_id = user.user_id;
  series.label = static_cast<int>(user.label);
  series.cols = extractor.size();
  for (const auto& post : user.posts) {
    const auto sentences = pipeline.Analyze(post.text);
    if (sentences.empty()) continue;
    series.post_boundaries.push_back(series.rows());
    extractor.ExtractDocument(sentences, series);
  }
  if (series.rows() == 0) {
    throw Error("user " + user.user_id + " has no sentences to extract");
  }
  return series;
}

std::vector<UserFeatureSeries> ExtractUsers(
    const std::vector<corpus::UserRecord>& users,
    const text::TextPipeline& pipeline, const FeatureExtractor& extractor,
    std::size_t workers) {
  std::vector<UserFeatureSeries> out(users.size());
  ParallelFor(users.size(), workers, [&](std::size_t i) {
    out[i] = ExtractUserSeries(users[i], pipeline, extractor);
  });
  return out;
}

std::vector<double> AggregateUser(const UserFeatureSeries& series) {
  const std::size_t rows = series.rows();
  if (rows == 0) throw Error("cannot aggregate an empty series");
  std::vector<double> sums(series.cols, 0.0);
  std::vector<std::size_t> counts(series.cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < series.cols; ++c) {
      if (series.is_missing(r, c)) continue;
      sums[c] += series.at(r, c);
      ++counts[c];
    }
  }
  for (std::size_t c = 0; c < series.cols; ++c) {
    if (counts[c] == 0) {
      spdlog::warn("user {}: feature column {} undefined on every sentence; using 0",
                   series.user_id, c);
      sums[c] = 0.0;
    } else {
      sums[c] /= static_cast<double>(counts[c]);
    }
  }
  return sums;
}

std::vector<ContourPoint> ZscoreContour(const UserFeatureSeries& series,
                                        const FeatureRegistry& registry,
                                        const std::vector<std::string>& codes) {
  const std::size_t rows = series.rows();
  if (rows < 2) throw Error("a contour needs at least two sentences");
  if (codes.empty()) throw Error("no feature codes requested");
  std::vector<std::vector<std::optional<double>>> z(codes.size());
  for (std::size_t k = 0; k < codes.size(); ++k) {
    const std::size_t col = registry.RequireIndex(codes[k]);
    std::vector<std::size_t> defined;
    double sum = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (series.is_missing(r, col)) continue;
      defined.push_back(r);
      sum += series.at(r, col);
    }
    z[k].assign(rows, std::nullopt);
    if (defined.empty()) continue;
    const double first = series.at(defined.front(), col);
    const bool constant = std::all_of(defined.begin(), defined.end(),
                                      [&](std::size_t r) {
                                        return series.at(r, col) == first;
                                      });
    if (constant) {
      for (auto r : defined) z[k][r] = 0.0;
      continue;
    }
    const double n = static_cast<double>(defined.size());
    const double mean = sum / n;
    double ss = 0;
    for (auto r : defined) {
      const double d = series.at(r, col) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / n);
    for (auto r : defined) z[k][r] = (series.at(r, col) - mean) / sd;
  }
  std::vector<ContourPoint> points;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < codes.size(); ++k) {
      if (z[k][r]) points.push_back({r, codes[k], *z[k][r]});
    }
  }
  return points;
}

void WriteUserMatrixCsv(const std::filesystem::path& path,
                        const FeatureRegistry& registry,
                        const std::vector<UserFeatureSeries>& series) {
  std::string out = "user_id";
  for (const auto& spec : registry.specs()) out += "," + spec.code;
  out.push_back('\n');
  for (const auto& s : series) {
    const auto means = AggregateUser(s);
    out += CsvField(s.user_id);
    for (double m : means) out += "," + FormatShort(m);
    out.push_back('\n');
  }
  WriteFile(path, out);
}

void WriteSeriesCsv(const std::filesystem::path& path,
                    const FeatureRegistry& registry,
                    const std::vector<UserFeatureSeries>& series) {
  std::string out = "user_id,post_index,sentence_index";
  for (const auto& spec : registry.specs()) out += "," + spec.code;
  out.push_back('\n');
  for (const auto& s : series) {
    const std::string id = CsvField(s.user_id);
    std::size_t post = 0;
    for (std::size_t r = 0; r < s.rows(); ++r) {
      while (post + 1 < s.post_boundaries.size() &&
             s.post_boundaries[post + 1] <= r) {
        ++post;
      }
      const std::size_t start = s.post_boundaries.empty() ? 0 : s.post_boundaries[post];
      out += id + "," + std::to_string(post) + "," + std::to_string(r - start);
      for (std::size_t c = 0; c < s.cols; ++c) {
        out.push_back(',');
        if (!s.is_missing(r, c)) out += FormatShort(s.at(r, c));
      }
      out.push_back('\n');
    }
  }
  WriteFile(path, out);
}

void WriteFeatureManifest(const std::filesystem::path& matrix_path,
                          const FeatureRegistry& registry,
                          const std::string& mode, std::size_t rows) {
  nlohmann::ordered_json m;
  m["format"] = "vscreen-features/1";
  m["mode"] = mode;
  m["registry_fingerprint"] = registry.fingerprint();
  m["features"] = registry.size();
  m["rows"] = rows;
  m["matrix_sha256"] = Sha256Hex(ReadFile(matrix_path));
  WriteFile(matrix_path.string() + ".manifest.json", m.dump(2) + "\n");
}

void WriteContourTsv(const std::filesystem::path& path,
                     const std::vector<ContourPoint>& points) {
  std::string out = "sentence_index\tcode\tz\n";
  for (const auto& p : points) {
    out += std::to_string(p.sentence_index) + "\t" + p.code + "\t" +
           FormatShort(p.z) + "\n";
  }
  WriteFile(path, out);
}

std::string RenderContourSvg(const std::vector<ContourPoint>& points) {
  constexpr double kWidth = 800, kHeight = 320, kPad = 40;
  static constexpr const char* kColors[] = {"#1b6ca8", "#d1495b", "#66a182",
                                            "#edae49", "#6a4c93", "#2e4057"};
  std::vector<std::string> codes;
  std::size_t max_index = 1;
  double z_abs = 1.0;
  for (const auto& p : points) {
    if (std::find(codes.begin(), codes.end(), p.code) == codes.end()) {
      codes.push_back(p.code);
    }
    max_index = std::max(max_index, p.sentence_index);
    z_abs = std::max(z_abs, std::abs(p.z));
  }
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  auto x_of = [&](std::size_t i) {
    return kPad + (kWidth - 2 * kPad) * static_cast<double>(i) /
                      static_cast<double>(max_index);
  };
  auto y_of = [&](double z) {
    return kHeight / 2 - (kHeight / 2 - kPad) * z / z_abs;
  };
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    num(kWidth) + "\" height=\"" + num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + num(kPad) + "\" y1=\"" + num(y_of(0)) + "\" x2=\"" +
         num(kWidth - kPad) + "\" y2=\"" + num(y_of(0)) +
         "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  for (std::size_t k = 0; k < codes.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    std::string pts;
    for (const auto& p : points) {
      if (p.code != codes[k]) continue;
      pts += num(x_of(p.sentence_index)) + "," + num(y_of(p.z)) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    svg += "<text x=\"" + num(kPad + 90.0 * static_cast<double>(k)) +
           "\" y=\"20\" fill=\"" + color + "\" font-family=\"sans-serif\" "
           "font-size=\"13\">" + codes[k] + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace vscreen::features
