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

#include "vscreen/tagger.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <cmath>
#include <sstream>

#include "vscreen/common.h"

namespace vscreen::text {
namespace {

constexpr std::string_view kHeader = "VSTAG1";
constexpr std::string_view kParticipleName = "verb:part";

bool AllPunct(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), IsPunctChar);
}

bool AllDigits(std::string_view w) {
  bool any_digit = false;
  for (char c : w) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      any_digit = true;
    } else if (c != '.' && c != ',') {
      return false;
    }
  }
  return any_digit;
}

// Deterministic tags that bypass both lexicon and model.
std::optional<std::size_t> FixedClass(std::string_view word,
                                      const ClosedClassLexicon& closed_class) {
  if (AllPunct(word)) return static_cast<std::size_t>(PosTag::kPunct);
  if (AllDigits(word)) return static_cast<std::size_t>(PosTag::kNum);
  if (const PosTag* tag = closed_class.Find(word)) {
    return static_cast<std::size_t>(*tag);
  }
  return std::nullopt;
}

std::string Normalize(std::string_view word) {
  if (AllDigits(word)) return "!NUM";
  return ToLower(word);
}

std::string Suffix(std::string_view w, std::size_t n) {
  return std::string(w.size() <= n ? w : w.substr(w.size() - n));
}

std::vector<std::string> Context(const std::vector<std::string>& words) {
  std::vector<std::string> ctx;
  ctx.reserve(words.size() + 4);
  ctx.emplace_back("-START2-");
  ctx.emplace_back("-START-");
  for (const auto& w : words) ctx.push_back(Normalize(w));
  ctx.emplace_back("-END-");
  ctx.emplace_back("-END2-");
  return ctx;
}

// Feature strings for position i (0-based in words; i + 2 in context).
void Features(std::size_t i, const std::vector<std::string>& ctx,
              std::string_view prev, std::string_view prev2,
              std::vector<std::string>& out) {
  out.clear();
  const std::size_t c = i + 2;
  const std::string& w = ctx[c];
  out.emplace_back("b");
  out.push_back("s3 " + Suffix(w, 3));
  out.push_back("s2 " + Suffix(w, 2));
  out.push_back("p1 " + w.substr(0, 1));
  out.push_back("t-1 " + std::string(prev));
  out.push_back("t-2 " + std::string(prev2));
  out.push_back("t-1t-2 " + std::string(prev) + " " + std::string(prev2));
  out.push_back("w " + w);
  out.push_back("t-1w " + std::string(prev) + " " + w);
  out.push_back("w-1 " + ctx[c - 1]);
  out.push_back("s-1 " + Suffix(ctx[c - 1], 3));
  out.push_back("w-2 " + ctx[c - 2]);
  out.push_back("w+1 " + ctx[c + 1]);
  out.push_back("s+1 " + Suffix(ctx[c + 1], 3));
  out.push_back("w+2 " + ctx[c + 2]);
  if (w.find('\'') != std::string::npos) out.emplace_back("apos");
}

struct AveragingState {
  std::unordered_map<std::string, TaggerModel::Weights> totals;
  std::unordered_map<std::string, std::array<int64_t, kNumTaggerClasses>>
      stamps;
};

}  // namespace

std::string_view TaggerClassName(std::size_t cls) {
  if (cls == kParticipleClass) return kParticipleName;
  if (cls >= kNumPosTags) throw Error("tagger class out of range");
  return PosTagName(static_cast<PosTag>(cls));
}

std::size_t TaggerClassFromName(std::string_view name) {
  if (name == kParticipleName) return kParticipleClass;
  const auto tag = ParsePosTag(name);
  if (!tag) throw Error("unknown tag: " + std::string(name));
  return static_cast<std::size_t>(*tag);
}

std::vector<TaggedSentence> LoadTaggedCorpus(const std::filesystem::path& path) {
  std::vector<TaggedSentence> corpus;
  std::istringstream in(ReadFile(path));
  std::string line;
  TaggedSentence current;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) {
      if (!current.empty()) corpus.push_back(std::move(current));
      current.clear();
      continue;
    }
    const auto fields = Split(line, '\t');
    if (fields.size() != 2) throw Error("bad tagged row: " + line);
    TaggerClassFromName(fields[1]);  // validates the tag
    current.push_back({fields[0], fields[1]});
  }
  if (!current.empty()) corpus.push_back(std::move(current));
  return corpus;
}

ClosedClassLexicon ClosedClassLexicon::Load(const std::filesystem::path& path) {
  ClosedClassLexicon lexicon;
  for (const auto& line : ReadAssetLines(path)) {
    const auto fields = Split(line, '\t');
    if (fields.size() != 2) throw Error("bad closed-class row: " + line);
    const auto tag = ParsePosTag(fields[1]);
    if (!tag) throw Error("unknown tag in closed-class lexicon: " + fields[1]);
    lexicon.Add(ToLower(fields[0]), *tag);
  }
  return lexicon;
}

void ClosedClassLexicon::Add(std::string word, PosTag tag) {
  entries_[std::move(word)] = tag;
}

const PosTag* ClosedClassLexicon::Find(std::string_view word) const {
  const auto it = entries_.find(ToLower(word));
  return it == entries_.end() ? nullptr : &it->second;
}

TaggerModel TaggerModel::Train(const std::vector<TaggedSentence>& corpus,
                               const ClosedClassLexicon& closed_class,
                               const TrainOptions& options) {
  if (corpus.empty()) throw Error("tagger training corpus is empty");
  TaggerModel model;
  AveragingState avg;
  int64_t step = 0;

  auto update = [&](const std::vector<std::string>& feats, std::size_t truth,
                    std::size_t guess) {
    if (truth == guess) return;
    for (const auto& f : feats) {
      auto& w = model.weights_[f];
      auto& total = avg.totals[f];
      auto& stamp = avg.stamps[f];
      for (std::size_t cls : {truth, guess}) {
        total[cls] += static_cast<double>(step - stamp[cls]) * w[cls];
        stamp[cls] = step;
        w[cls] += (cls == truth) ? 1.0 : -1.0;
      }
    }
  };

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(options.seed);
  std::vector<std::string> feats;
  for (int iter = 0; iter < options.iterations; ++iter) {
    for (std::size_t k = order.size(); k > 1; --k) {
      std::swap(order[k - 1], order[UniformIndex(rng, k)]);
    }
    for (std::size_t s : order) {
      const auto& sentence = corpus[s];
      std::vector<std::string> words;
      words.reserve(sentence.size());
      for (const auto& tw : sentence) words.push_back(tw.word);
      const auto ctx = Context(words);
      std::string prev = "-START-";
      std::string prev2 = "-START2-";
      for (std::size_t i = 0; i < words.size(); ++i) {
        const std::size_t truth = TaggerClassFromName(sentence[i].tag);
        std::size_t guess;
        if (const auto fixed = FixedClass(words[i], closed_class)) {
          guess = *fixed;
        } else {
          Features(i, ctx, prev, prev2, feats);
          guess = model.weights_.empty() ? 0 : model.Score(feats);
          ++step;
          update(feats, truth, guess);
        }
        prev2 = prev;
        prev = std::string(TaggerClassName(guess));
      }
    }
  }

  // Average: each weight's running total over all steps.
  for (auto& [feat, w] : model.weights_) {
    auto& total = avg.totals[feat];
    auto& stamp = avg.stamps[feat];
    for (std::size_t cls = 0; cls < kNumTaggerClasses; ++cls) {
      total[cls] += static_cast<double>(step - stamp[cls]) * w[cls];
      w[cls] = step > 0 ? total[cls] / static_cast<double>(step) : w[cls];
    }
  }
  // Drop features whose averaged weights are all zero.
  for (auto it = model.weights_.begin(); it != model.weights_.end();) {
    const bool all_zero = std::all_of(it->second.begin(), it->second.end(),
                                      [](double v) { return v == 0.0; });
    it = all_zero ? model.weights_.erase(it) : std::next(it);
  }
  model.averaged_ = true;
  return model;
}

std::size_t TaggerModel::Score(const std::vector<std::string>& features) const {
  Weights scores{};
  for (const auto& f : features) {
    const auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (std::size_t c = 0; c < kNumTaggerClasses; ++c) scores[c] += it->second[c];
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumTaggerClasses; ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return best;
}

std::vector<std::size_t> TaggerModel::Predict(
    const std::vector<std::string>& words,
    const ClosedClassLexicon& closed_class) const {
  if (!trained()) throw Error("POS tagger model is not trained");
  std::vector<std::size_t> out;
  out.reserve(words.size());
  const auto ctx = Context(words);
  std::string prev = "-START-";
  std::string prev2 = "-START2-";
  std::vector<std::string> feats;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::size_t cls;
    if (const auto fixed = FixedClass(words[i], closed_class)) {
      cls = *fixed;
    } else {
      Features(i, ctx, prev, prev2, feats);
      cls = Score(feats);
    }
    out.push_back(cls);
    prev2 = std::move(prev);
    prev = std::string(TaggerClassName(cls));
  }
  return out;
}

std::string TaggerModel::Serialize() const {
  std::map<std::string, const Weights*> sorted;
  for (const auto& [f, w] : weights_) sorted.emplace(f, &w);
  std::string out(kHeader);
  out.push_back('\n');
  for (const auto& [f, w] : sorted) {
    for (std::size_t c = 0; c < kNumTaggerClasses; ++c) {
      if ((*w)[c] == 0.0) continue;
      out += f;
      out.push_back('\t');
      out += TaggerClassName(c);
      out.push_back('\t');
      out += FormatShort((*w)[c]);
      out.push_back('\n');
    }
  }
  return out;
}

TaggerModel TaggerModel::Parse(std::string_view contents) {
  std::istringstream in{std::string(contents)};
  std::string line;
  if (!std::getline(in, line) || Trim(line) != kHeader) {
    throw Error("tagger asset: missing VSTAG1 header");
  }
  TaggerModel model;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = Split(line, '\t');
    if (fields.size() != 3) throw Error("tagger asset: bad row: " + line);
    const std::size_t cls = TaggerClassFromName(fields[1]);
    const double w = ParseExact(fields[2]);
    if (!std::isfinite(w)) throw Error("tagger asset: non-finite weight");
    model.weights_[fields[0]][cls] = w;
  }
  model.averaged_ = true;
  return model;
}

TaggerModel TaggerModel::Load(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

std::vector<Token> PosTagTokens(const std::vector<std::string>& tokens,
                                const TaggerModel& model,
                                const ClosedClassLexicon& closed_class) {
  const auto classes = model.Predict(tokens, closed_class);
  std::vector<Token> out(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out[i].surface = tokens[i];
    if (classes[i] == kParticipleClass) {
      out[i].pos = PosTag::kVerb;
      out[i].participle = true;
    } else {
      out[i].pos = static_cast<PosTag>(classes[i]);
    }
    out[i].is_function_word = IsFunctionPos(out[i].pos);
  }
  return out;
}

TextPipeline::TextPipeline(Abbreviations abbreviations,
                           ClosedClassLexicon closed_class, TaggerModel tagger,
                           Lemmatizer lemmatizer)
    : abbreviations_(std::move(abbreviations)),
      closed_class_(std::move(closed_class)),
      tagger_(std::move(tagger)),
      lemmatizer_(std::move(lemmatizer)) {
  if (!tagger_.trained()) throw Error("text pipeline needs a trained tagger");
}

TextPipeline TextPipeline::Load(const std::filesystem::path& assets_dir) {
  return TextPipeline(Abbreviations::Load(assets_dir / "abbreviations.txt"),
                      ClosedClassLexicon::Load(assets_dir / "closed_class.tsv"),
                      TaggerModel::Load(assets_dir / "tagger.vstag"),
                      Lemmatizer::Load(assets_dir / "irregular_lemmas.tsv"));
}

std::vector<std::string> TextPipeline::Segment(std::string_view text) const {
  return SegmentSentences(text, abbreviations_);
}

Sentence TextPipeline::AnalyzeSentence(std::string_view sentence_text,
                                       int index) const {
  Sentence sentence;
  sentence.index_in_document = index;
  sentence.tokens =
      PosTagTokens(Tokenize(sentence_text, &abbreviations_), tagger_,
                   closed_class_);
  for (auto& t : sentence.tokens) t.lemma = lemmatizer_.Lemmatize(t);
  return sentence;
}

std::vector<Sentence> TextPipeline::Analyze(std::string_view document) const {
  std::vector<Sentence> out;
  for (const auto& s : Segment(document)) {
    Sentence sentence = AnalyzeSentence(s, static_cast<int>(out.size()));
    if (!sentence.tokens.empty()) out.push_back(std::move(sentence));
  }
  return out;
}

}  // namespace vscreen::text
