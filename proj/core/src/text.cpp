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

#include "vscreen/text.h"

#include <cctype>

#include "vscreen/common.h"

namespace vscreen::text {
namespace {

constexpr std::array<std::string_view, kNumPosTags> kTagNames = {
    "noun", "verb", "aux",   "adj",   "adv", "pron", "det", "adp",  "conj",
    "sconj", "num", "part", "intj", "punct", "sym", "x",   "propn"};

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

bool IsVowel(char c) {
  switch (c) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
    case 'y':
      return true;
    default:
      return false;
  }
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool IsConsonant(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) && !IsVowel(c);
}

// Strips inflectional '-ing'/'-ed' and repairs the stem: undoubles a final
// consonant ("stopp" -> "stop") or restores a dropped 'e' after a short
// consonant-vowel-consonant stem ("mak" -> "make").
std::string RepairStem(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && IsConsonant(stem[n - 1]) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
    return stem;
  }
  if (n >= 3 && n <= 4 && IsConsonant(stem[n - 1]) && IsVowel(stem[n - 2]) &&
      IsConsonant(stem[n - 3]) && stem[n - 1] != 'w' && stem[n - 1] != 'x' &&
      stem[n - 1] != 'y' && stem[n - 2] != 'y') {
    stem.push_back('e');
  }
  return stem;
}

std::string NounLemma(const std::string& w) {
  if (w.size() > 4 && EndsWith(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 3 && (EndsWith(w, "sses") || EndsWith(w, "xes") ||
                       EndsWith(w, "zes") || EndsWith(w, "ches") ||
                       EndsWith(w, "shes"))) {
    return w.substr(0, w.size() - 2);
  }
  if (w.size() > 3 && EndsWith(w, "s") && !EndsWith(w, "ss") &&
      !EndsWith(w, "us") && !EndsWith(w, "is") && !EndsWith(w, "'s")) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

std::string VerbLemma(const std::string& w) {
  if (w.size() > 4 && EndsWith(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 4 && EndsWith(w, "ied")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 4 && EndsWith(w, "ing")) {
    return RepairStem(w.substr(0, w.size() - 3));
  }
  if (w.size() > 3 && EndsWith(w, "ed")) {
    if (EndsWith(w, "eed")) return w.substr(0, w.size() - 1);
    return RepairStem(w.substr(0, w.size() - 2));
  }
  if (w.size() > 3 && (EndsWith(w, "sses") || EndsWith(w, "xes") ||
                       EndsWith(w, "zes") || EndsWith(w, "ches") ||
                       EndsWith(w, "shes") || EndsWith(w, "oes"))) {
    return w.substr(0, w.size() - 2);
  }
  if (w.size() > 2 && EndsWith(w, "s") && !EndsWith(w, "ss") &&
      !EndsWith(w, "us") && !EndsWith(w, "is")) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

}  // namespace

std::string_view PosTagName(PosTag tag) {
  return kTagNames[static_cast<std::size_t>(tag)];
}

std::optional<PosTag> ParsePosTag(std::string_view name) {
  for (std::size_t i = 0; i < kTagNames.size(); ++i) {
    if (kTagNames[i] == name) return static_cast<PosTag>(i);
  }
  return std::nullopt;
}

bool IsFunctionPos(PosTag tag) {
  switch (tag) {
    case PosTag::kAux:
    case PosTag::kDet:
    case PosTag::kAdp:
    case PosTag::kPron:
    case PosTag::kConj:
    case PosTag::kSconj:
    case PosTag::kPart:
      return true;
    default:
      return false;
  }
}

Abbreviations::Abbreviations(std::vector<std::string> entries) {
  for (auto& e : entries) entries_.insert(ToLower(Trim(e)));
}

Abbreviations Abbreviations::Load(const std::filesystem::path& path) {
  return Abbreviations(ReadAssetLines(path));
}

bool Abbreviations::Contains(std::string_view word) const {
  return entries_.count(std::string(word)) > 0;
}

bool IsPunctChar(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == '\'' ||
         c == ';' || c == ':' || c == '"' || c == '(' || c == ')';
}

bool IsSentenceTerminator(char c) { return c == '.' || c == '!' || c == '?'; }

std::vector<std::string> Tokenize(std::string_view text,
                                  const Abbreviations* abbreviations) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !IsSpace(text[j])) ++j;
    std::string_view chunk = text.substr(i, j - i);
    i = j;
    if (chunk.empty()) continue;

    // Separators that always split, wherever they occur in the chunk.
    std::size_t start = 0;
    auto emit_part = [&](std::string_view part) {
      std::vector<std::string> tail;
      std::size_t b = 0;
      while (b < part.size() && (part[b] == '.' || part[b] == '\'')) {
        out.emplace_back(1, part[b]);
        ++b;
      }
      part = part.substr(b);
      while (!part.empty() && (part.back() == '.' || part.back() == '\'')) {
        if (part.back() == '.' && abbreviations &&
            abbreviations->Contains(part)) {
          break;
        }
        tail.emplace_back(1, part.back());
        part.remove_suffix(1);
      }
      if (!part.empty()) out.emplace_back(part);
      out.insert(out.end(), tail.rbegin(), tail.rend());
    };
    for (std::size_t k = 0; k < chunk.size(); ++k) {
      const char c = chunk[k];
      if (c == ',' || c == '!' || c == '?' || c == ';' || c == ':' ||
          c == '"' || c == '(' || c == ')') {
        if (k > start) emit_part(chunk.substr(start, k - start));
        out.emplace_back(1, c);
        start = k + 1;
      }
    }
    if (start < chunk.size()) emit_part(chunk.substr(start));
  }
  return out;
}

std::vector<std::string> SegmentSentences(std::string_view text,
                                          const Abbreviations& abbreviations) {
  std::vector<std::string> out;
  std::size_t seg_start = 0;
  auto flush = [&](std::size_t end) {
    const auto piece = Trim(text.substr(seg_start, end - seg_start));
    if (!piece.empty()) out.emplace_back(piece);
    seg_start = end;
  };
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsSentenceTerminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < text.size() && IsSentenceTerminator(text[run_end])) {
      ++run_end;
    }
    const bool at_boundary = run_end == text.size() || IsSpace(text[run_end]);
    if (!at_boundary) {
      i = run_end;
      continue;
    }
    if (text[i] == '.' && run_end == i + 1) {
      std::size_t w = i;
      while (w > seg_start && !IsSpace(text[w - 1])) --w;
      const std::string word = ToLower(text.substr(w, i + 1 - w));
      if (abbreviations.Contains(word)) {
        i = run_end;
        continue;
      }
    }
    flush(run_end);
    i = run_end;
  }
  flush(text.size());
  return out;
}

int CountSyllables(std::string_view word) {
  std::string letters;
  letters.reserve(word.size());
  for (char c : word) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      letters.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (letters.empty()) return 1;
  int groups = 0;
  bool in_group = false;
  for (char c : letters) {
    const bool v = IsVowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  const std::size_t n = letters.size();
  if (groups > 1 && letters[n - 1] == 'e' && n >= 2 &&
      IsConsonant(letters[n - 2])) {
    const bool consonant_le =
        letters[n - 2] == 'l' && n >= 3 && IsConsonant(letters[n - 3]);
    if (!consonant_le) --groups;
  }
  return groups < 1 ? 1 : groups;
}

int CountFiniteClauses(const Sentence& sentence) {
  int clauses = 0;
  const auto& toks = sentence.tokens;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.pos != PosTag::kVerb && t.pos != PosTag::kAux) continue;
    if (t.participle) continue;
    if (i > 0 && toks[i - 1].surface == "to") continue;
    bool continues_chain = false;
    for (std::size_t k = i; k-- > 0;) {
      const PosTag p = toks[k].pos;
      if (p == PosTag::kAdv || p == PosTag::kPart) continue;
      continues_chain = (p == PosTag::kVerb || p == PosTag::kAux);
      break;
    }
    if (!continues_chain) ++clauses;
  }
  return clauses;
}

Lemmatizer Lemmatizer::Load(const std::filesystem::path& path) {
  Lemmatizer lemmatizer;
  for (const auto& line : ReadAssetLines(path)) {
    const auto fields = Split(line, '\t');
    if (fields.size() != 3) {
      throw Error("bad lemma row in " + path.string() + ": " + line);
    }
    const auto pos = ParsePosTag(fields[0]);
    if (!pos) throw Error("unknown tag in lemma table: " + fields[0]);
    lemmatizer.AddException(*pos, fields[1], fields[2]);
  }
  return lemmatizer;
}

void Lemmatizer::AddException(PosTag pos, std::string form,
                              std::string lemma) {
  exceptions_[std::string(PosTagName(pos)) + "|" + form] = std::move(lemma);
}

std::string Lemmatizer::Lemmatize(const Token& token) const {
  return Lemmatize(token.surface, token.pos);
}

std::string Lemmatizer::Lemmatize(std::string_view surface, PosTag pos) const {
  const std::string word = ToLower(surface);
  if (const auto it =
          exceptions_.find(std::string(PosTagName(pos)) + "|" + word);
      it != exceptions_.end()) {
    return it->second;
  }
  switch (pos) {
    case PosTag::kNoun:
      return NounLemma(word);
    case PosTag::kVerb:
      return VerbLemma(word);
    default:
      return word;
  }
}

}  // namespace vscreen::text
