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

#include "vscreen/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "vscreen/common.h"

namespace vscreen::corpus {
namespace {

using Json = nlohmann::ordered_json;

bool IsAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }
bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

// Start offsets of `needle` in `hay` that sit on word boundaries.
std::vector<std::size_t> FindWords(std::string_view hay,
                                   std::string_view needle) {
  std::vector<std::size_t> out;
  if (needle.empty()) return out;
  for (std::size_t pos = hay.find(needle); pos != std::string_view::npos;
       pos = hay.find(needle, pos + 1)) {
    const std::size_t end = pos + needle.size();
    const bool left_ok = pos == 0 || !IsAlnum(hay[pos - 1]);
    const bool right_ok = end == hay.size() || !IsAlnum(hay[end]);
    if (left_ok && right_ok) out.push_back(pos);
  }
  return out;
}

bool StartsWithAt(std::string_view s, std::size_t i, std::string_view p) {
  return s.size() >= i + p.size() && s.substr(i, p.size()) == p;
}

bool IsHandleChar(char c) { return IsAlnum(c) || c == '_' || c == '-'; }

// Curly quotes become ASCII apostrophes; other bytes pass through.
std::string NormalizeApostrophes(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (StartsWithAt(text, i, "\xE2\x80\x99") ||
        StartsWithAt(text, i, "\xE2\x80\x98")) {
      out.push_back('\'');
      i += 2;
      continue;
    }
    out.push_back(text[i]);
  }
  return out;
}

// Removes URLs, HTML tags and entities, and user mentions; expands hashtags.
std::string StripMarkup(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  auto word_start = [&](std::size_t k) {
    return k == 0 || IsSpace(text[k - 1]) || text[k - 1] == '(' ||
           text[k - 1] == '[';
  };
  while (i < text.size()) {
    const char c = text[i];
    if (word_start(i) && (c == 'h' || c == 'H' || c == 'w' || c == 'W')) {
      const std::string head = ToLower(text.substr(i, 8));
      if (StartsWithAt(head, 0, "http://") ||
          StartsWithAt(head, 0, "https://") || StartsWithAt(head, 0, "www.")) {
        while (i < text.size() && !IsSpace(text[i])) ++i;
        out.push_back(' ');
        continue;
      }
    }
    if (c == '<') {
      const std::size_t close = text.find('>', i);
      if (close != std::string_view::npos &&
          text.substr(i, close - i).find('\n') == std::string_view::npos) {
        i = close + 1;
        out.push_back(' ');
        continue;
      }
    }
    if (c == '&') {
      std::size_t k = i + 1;
      while (k < text.size() && k - i <= 10 &&
             (IsAlnum(text[k]) || text[k] == '#')) {
        ++k;
      }
      if (k < text.size() && text[k] == ';' && k > i + 1) {
        const std::string entity = ToLower(text.substr(i + 1, k - i - 1));
        out += (entity == "#39" || entity == "apos" || entity == "rsquo")
                   ? "'"
                   : " ";
        i = k + 1;
        continue;
      }
    }
    if (c == '@' && word_start(i) && i + 1 < text.size() &&
        IsHandleChar(text[i + 1])) {
      ++i;
      while (i < text.size() && IsHandleChar(text[i])) ++i;
      out.push_back(' ');
      continue;
    }
    if (word_start(i)) {
      std::size_t k = i;
      if (k < text.size() && text[k] == '/') ++k;
      if (k + 2 < text.size() && (text[k] == 'u' || text[k] == 'U') &&
          text[k + 1] == '/' && IsHandleChar(text[k + 2])) {
        i = k + 2;
        while (i < text.size() && IsHandleChar(text[i])) ++i;
        out.push_back(' ');
        continue;
      }
    }
    if (c == '#' && i + 1 < text.size() &&
        (IsAlnum(text[i + 1]) || text[i + 1] == '_')) {
      std::size_t k = i + 1;
      while (k < text.size() && (IsAlnum(text[k]) || text[k] == '_')) ++k;
      out.push_back(' ');
      for (const auto& part : SplitHashtag(text.substr(i + 1, k - i - 1))) {
        out += part;
        out.push_back(' ');
      }
      i = k;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

bool IsKeptPunct(char c) {
  return c == '.' || c == '!' || c == '?' || c == ',';
}

// Rebuilds lowercase, filtered text as words separated by single spaces with
// each punctuation run collapsed to one mark attached to the previous word.
std::string RebuildSpacing(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (c == ' ') {
      ++i;
      continue;
    }
    if (IsAlnum(c) || c == '\'') {
      std::size_t j = i;
      while (j < n) {
        if (IsAlnum(text[j]) || text[j] == '\'') {
          ++j;
        } else if (text[j] == '.' && j > i && IsAlnum(text[j - 1]) &&
                   j + 1 < n && IsAlnum(text[j + 1])) {
          ++j;
        } else {
          break;
        }
      }
      std::string_view word = text.substr(i, j - i);
      while (!word.empty() && word.front() == '\'') word.remove_prefix(1);
      while (!word.empty() && word.back() == '\'') word.remove_suffix(1);
      if (!word.empty()) {
        if (!out.empty()) out.push_back(' ');
        out += word;
      }
      i = j;
      continue;
    }
    // Punctuation run, possibly with interior spaces.
    std::size_t j = i;
    char mark = 0;
    while (j < n && (IsKeptPunct(text[j]) || text[j] == ' ')) {
      if (mark == 0 && text::IsSentenceTerminator(text[j])) mark = text[j];
      ++j;
    }
    if (mark == 0) mark = ',';
    if (!out.empty() && out.back() != ' ' && !IsKeptPunct(out.back())) {
      out.push_back(mark);
    }
    i = j;
  }
  return out;
}

bool HasAlnum(std::string_view s) {
  return std::any_of(s.begin(), s.end(), IsAlnum);
}

std::string JoinSentences(const std::vector<std::string>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

bool ContainsTerm(const UserRecord& user, const ExclusionSet& exclusions) {
  static const text::Abbreviations kNone;
  for (const auto& post : user.posts) {
    const std::string raw = ToLower(post.text);
    const std::string normalized = JoinSentences(PreprocessPost(raw, kNone));
    for (const auto& term : exclusions.terms) {
      if (raw.find(term) != std::string::npos ||
          normalized.find(term) != std::string::npos) {
        return true;
      }
    }
  }
  return false;
}

std::string JsonString(const Json& obj, std::initializer_list<const char*> keys,
                       bool required) {
  for (const char* k : keys) {
    const auto it = obj.find(k);
    if (it == obj.end() || it->is_null()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<int64_t>());
    return it->dump();
  }
  if (required) {
    throw Error(std::string("record is missing field '") + *keys.begin() + "'");
  }
  return {};
}

int64_t JsonTimestamp(const Json& obj) {
  const auto it = obj.find("created_utc");
  if (it == obj.end() || it->is_null()) return 0;
  if (it->is_number_integer()) return it->get<int64_t>();
  if (it->is_number_float()) {
    return static_cast<int64_t>(std::floor(it->get<double>()));
  }
  if (it->is_string()) {
    const std::string s = it->get<std::string>();
    try {
      return static_cast<int64_t>(std::floor(std::stod(s)));
    } catch (const std::exception&) {
      throw Error("bad created_utc value: " + s);
    }
  }
  throw Error("bad created_utc value: " + it->dump());
}

template <typename Fn>
void ForEachLine(std::string_view ndjson, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= ndjson.size()) {
    std::size_t end = ndjson.find('\n', start);
    if (end == std::string_view::npos) end = ndjson.size();
    ++line_no;
    const auto line = Trim(ndjson.substr(start, end - start));
    if (!line.empty()) {
      Json obj;
      try {
        obj = Json::parse(line);
      } catch (const std::exception& e) {
        throw Error("line " + std::to_string(line_no) +
                    ": invalid JSON: " + e.what());
      }
      if (!obj.is_object()) {
        throw Error("line " + std::to_string(line_no) + ": not an object");
      }
      fn(obj);
    }
    start = end + 1;
  }
}

bool PostOrder(const RawPost& a, const RawPost& b) {
  if (a.created_utc != b.created_utc) return a.created_utc < b.created_utc;
  return a.post_id < b.post_id;
}

bool UserOrder(const UserRecord& a, const UserRecord& b) {
  return a.user_id < b.user_id;
}

}  // namespace

DiagnosisPattern DiagnosisPattern::Default() {
  DiagnosisPattern p;
  p.diagnosis_phrases = {"diagnosed with", "diagnosis of", "i was diagnosed",
                         "been diagnosed"};
  p.condition_keywords = {"adhd", "add", "attention deficit", "hyperactivity",
                          "attention-deficit"};
  return p;
}

DiagnosisPattern DiagnosisPattern::Load(const std::filesystem::path& path) {
  DiagnosisPattern p;
  for (const auto& line : ReadAssetLines(path)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error("bad pattern line in " + path.string() + ": " + line);
    }
    const std::string key(Trim(std::string_view(line).substr(0, tab)));
    const std::string value(Trim(std::string_view(line).substr(tab + 1)));
    if (key == "phrase") {
      p.diagnosis_phrases.push_back(value);
    } else if (key == "keyword") {
      p.condition_keywords.push_back(value);
    } else if (key == "window") {
      try {
        p.window_chars = std::stoi(value);
      } catch (const std::exception&) {
        throw Error("bad window value: " + value);
      }
    } else if (key == "direction") {
      if (value == "both") {
        p.direction = MatchDirection::kBoth;
      } else if (value == "forward") {
        p.direction = MatchDirection::kForward;
      } else {
        throw Error("bad direction value: " + value);
      }
    } else {
      throw Error("unknown pattern key: " + key);
    }
  }
  p.Validate();
  return p;
}

void DiagnosisPattern::Validate() const {
  if (window_chars <= 0) throw Error("window_chars must be positive");
  if (diagnosis_phrases.empty() || condition_keywords.empty()) {
    throw Error("diagnosis pattern needs at least one phrase and one keyword");
  }
  for (const auto* list : {&diagnosis_phrases, &condition_keywords}) {
    for (const auto& s : *list) {
      if (s.empty() || s != ToLower(s)) {
        throw Error("pattern entries must be non-empty lowercase: '" + s + "'");
      }
    }
  }
}

std::optional<MatchSpan> MatchDiagnosis(std::string_view text,
                                        const DiagnosisPattern& pattern) {
  if (text.empty()) return std::nullopt;
  const std::string lower = ToLower(text);
  const auto window = static_cast<std::size_t>(pattern.window_chars);

  struct Hit {
    std::size_t pos;
    const std::string* s;
  };
  std::vector<Hit> keywords;
  for (const auto& kw : pattern.condition_keywords) {
    for (auto pos : FindWords(lower, kw)) keywords.push_back({pos, &kw});
  }
  if (keywords.empty()) return std::nullopt;

  std::optional<MatchSpan> best;
  for (const auto& phrase : pattern.diagnosis_phrases) {
    for (auto p_begin : FindWords(lower, phrase)) {
      const std::size_t p_end = p_begin + phrase.size();
      for (const auto& kw : keywords) {
        const std::size_t k_begin = kw.pos;
        const std::size_t k_end = kw.pos + kw.s->size();
        const bool after = k_begin >= p_end;
        const bool before = k_end <= p_begin;
        if (!after && !before) continue;  // overlapping occurrence
        if (before && pattern.direction == MatchDirection::kForward) continue;
        const std::size_t distance = after ? k_begin - p_end : p_end - k_begin;
        if (distance > window) continue;
        MatchSpan span{std::min(p_begin, k_begin), std::max(p_end, k_end),
                       phrase, *kw.s};
        if (!best || span.begin < best->begin ||
            (span.begin == best->begin && span.end < best->end)) {
          best = std::move(span);
        }
      }
    }
  }
  return best;
}

std::vector<RawPost> StripLeakage(const std::vector<RawPost>& posts,
                                  const DiagnosisPattern& pattern) {
  std::vector<RawPost> kept;
  for (const auto& post : posts) {
    if (!MatchDiagnosis(post.text, pattern)) kept.push_back(post);
  }
  return kept;
}

ExclusionSet ExclusionSet::Load(const std::filesystem::path& path) {
  ExclusionSet set;
  for (const auto& line : ReadAssetLines(path)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error("bad exclusion line in " + path.string() + ": " + line);
    }
    const std::string key(Trim(std::string_view(line).substr(0, tab)));
    std::string value = ToLower(Trim(std::string_view(line).substr(tab + 1)));
    if (value.empty()) throw Error("empty exclusion value: " + line);
    if (key == "forum") {
      set.forums.insert(std::move(value));
    } else if (key == "term") {
      set.terms.insert(std::move(value));
    } else {
      throw Error("unknown exclusion key: " + key);
    }
  }
  return set;
}

bool IsEligibleControl(const UserRecord& user, const ExclusionSet& exclusions) {
  for (const auto& post : user.posts) {
    if (exclusions.forums.count(ToLower(post.source_forum))) return false;
  }
  return !ContainsTerm(user, exclusions);
}

std::vector<UserRecord> SelectControls(const std::vector<UserRecord>& candidates,
                                       const ExclusionSet& exclusions, int n,
                                       uint64_t seed) {
  if (n < 1) throw Error("select_controls: n must be at least 1");
  std::vector<const UserRecord*> eligible;
  for (const auto& user : candidates) {
    if (IsEligibleControl(user, exclusions)) eligible.push_back(&user);
  }
  if (eligible.size() < static_cast<std::size_t>(n)) {
    throw Error("select_controls: need " + std::to_string(n) +
                " eligible controls but only " +
                std::to_string(eligible.size()) + " of " +
                std::to_string(candidates.size()) + " candidates qualify (short by " +
                std::to_string(n - static_cast<int>(eligible.size())) + ")");
  }
  // Input order must not influence the draw.
  std::sort(eligible.begin(), eligible.end(),
            [](const UserRecord* a, const UserRecord* b) {
              return a->user_id < b->user_id;
            });
  Rng rng(seed);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    const std::size_t j = i + UniformIndex(rng, eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
  }
  std::vector<UserRecord> chosen;
  chosen.reserve(n);
  for (int i = 0; i < n; ++i) chosen.push_back(*eligible[i]);
  std::sort(chosen.begin(), chosen.end(), UserOrder);
  return chosen;
}

std::vector<std::string> SplitHashtag(std::string_view tag) {
  std::vector<std::string> parts;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) parts.push_back(ToLower(current));
    current.clear();
  };
  auto is_upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)); };
  auto is_lower = [](char c) { return std::islower(static_cast<unsigned char>(c)); };
  auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)); };
  for (std::size_t i = 0; i < tag.size(); ++i) {
    const char c = tag[i];
    if (c == '_') {
      flush();
      continue;
    }
    if (!current.empty()) {
      const char prev = current.back();
      const bool lower_to_upper = is_lower(prev) && is_upper(c);
      // "ADHDLife" splits as "ADHD" + "Life".
      const bool acronym_end = is_upper(prev) && is_upper(c) &&
                               i + 1 < tag.size() && is_lower(tag[i + 1]);
      const bool digit_edge = is_digit(prev) != is_digit(c);
      if (lower_to_upper || acronym_end || digit_edge) flush();
    }
    current.push_back(c);
  }
  flush();
  return parts;
}

std::vector<std::string> PreprocessPost(std::string_view text,
                                        const text::Abbreviations& abbreviations) {
  std::string s = StripMarkup(NormalizeApostrophes(text));
  s = ToLower(s);
  for (char& c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                      c == ' ' || c == '.' || c == '!' || c == '?' ||
                      c == ',' || c == '\'';
    if (!keep) c = ' ';
  }
  const std::string rebuilt = RebuildSpacing(s);
  std::vector<std::string> sentences;
  for (auto& sentence : text::SegmentSentences(rebuilt, abbreviations)) {
    if (HasAlnum(sentence)) sentences.push_back(std::move(sentence));
  }
  return sentences;
}

std::vector<UserRecord> GroupByUser(const std::vector<RawPost>& posts) {
  std::map<std::string, UserRecord> by_user;
  for (const auto& post : posts) {
    auto& user = by_user[post.user_id];
    user.user_id = post.user_id;
    user.posts.push_back(post);
  }
  std::vector<UserRecord> out;
  out.reserve(by_user.size());
  for (auto& [id, user] : by_user) {
    std::stable_sort(user.posts.begin(), user.posts.end(), PostOrder);
    out.push_back(std::move(user));
  }
  return out;
}

UserRecord NormalizeUser(const UserRecord& user,
                         const text::Abbreviations& abbreviations,
                         const BuildOptions& options) {
  UserRecord out;
  out.user_id = user.user_id;
  out.label = user.label;
  std::vector<RawPost> posts = user.posts;
  std::stable_sort(posts.begin(), posts.end(), PostOrder);
  std::unordered_set<std::string> seen;
  for (const auto& post : posts) {
    const auto sentences = PreprocessPost(post.text, abbreviations);
    if (static_cast<int>(sentences.size()) < options.min_sentences) continue;
    std::string normalized = JoinSentences(sentences);
    if (!seen.insert(normalized).second) continue;
    RawPost kept = post;
    kept.text = std::move(normalized);
    out.posts.push_back(std::move(kept));
  }
  return out;
}

std::vector<UserRecord> BuildDataset(const std::vector<RawPost>& positives_raw,
                                     const std::vector<RawPost>& controls_raw,
                                     const DiagnosisPattern& pattern,
                                     const text::Abbreviations& abbreviations,
                                     const BuildOptions& options) {
  pattern.Validate();
  std::vector<UserRecord> out;
  for (auto& user : GroupByUser(positives_raw)) {
    const bool diagnosed =
        std::any_of(user.posts.begin(), user.posts.end(), [&](const RawPost& p) {
          return MatchDiagnosis(p.text, pattern).has_value();
        });
    if (!diagnosed) continue;
    user.label = Label::kPositive;
    user.posts = StripLeakage(user.posts, pattern);
    auto normalized = NormalizeUser(user, abbreviations, options);
    if (!normalized.posts.empty()) out.push_back(std::move(normalized));
  }
  for (auto& user : GroupByUser(controls_raw)) {
    user.label = Label::kControl;
    auto normalized = NormalizeUser(user, abbreviations, options);
    if (!normalized.posts.empty()) out.push_back(std::move(normalized));
  }
  if (out.empty()) throw Error("build_dataset produced no users");
  std::stable_sort(out.begin(), out.end(), UserOrder);
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].user_id == out[i - 1].user_id) {
      throw Error("user " + out[i].user_id +
                  " appears in both the positive and control inputs");
    }
  }
  return out;
}

CorpusBuild BuildCorpus(const std::vector<RawPost>& positives_dump,
                        const std::vector<RawPost>& candidates_dump,
                        const DiagnosisPattern& pattern,
                        const ExclusionSet& exclusions,
                        const text::Abbreviations& abbreviations,
                        const BuildOptions& options, uint64_t seed) {
  pattern.Validate();
  CorpusBuild build;
  std::unordered_set<std::string> positive_ids;
  for (auto& user : GroupByUser(positives_dump)) {
    const bool diagnosed =
        std::any_of(user.posts.begin(), user.posts.end(), [&](const RawPost& p) {
          return MatchDiagnosis(p.text, pattern).has_value();
        });
    if (!diagnosed) continue;
    positive_ids.insert(user.user_id);
    user.label = Label::kPositive;
    user.posts = StripLeakage(user.posts, pattern);
    auto normalized = NormalizeUser(user, abbreviations, options);
    if (!normalized.posts.empty()) build.users.push_back(std::move(normalized));
  }
  build.positives = static_cast<int>(build.users.size());
  if (build.positives == 0) throw Error("no diagnosed users found");

  // Only candidates that survive normalization can be matched controls.
  std::vector<UserRecord> viable;
  for (auto& user : GroupByUser(candidates_dump)) {
    if (positive_ids.count(user.user_id)) continue;
    if (!IsEligibleControl(user, exclusions)) continue;
    user.label = Label::kControl;
    auto normalized = NormalizeUser(user, abbreviations, options);
    if (!normalized.posts.empty()) viable.push_back(std::move(normalized));
  }
  auto controls = SelectControls(viable, exclusions, build.positives, seed);
  build.controls = static_cast<int>(controls.size());
  for (auto& c : controls) build.users.push_back(std::move(c));
  std::stable_sort(build.users.begin(), build.users.end(), UserOrder);
  return build;
}

std::array<std::size_t, 3> AllocateSplit(std::size_t n) {
  constexpr std::array<std::size_t, 3> kParts = {8, 1, 1};
  std::array<std::size_t, 3> sizes{};
  std::array<std::size_t, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    sizes[k] = n * kParts[k] / 10;
    remainders[k] = n * kParts[k] % 10;
    assigned += sizes[k];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k]];
  return sizes;
}

DatasetSplit SplitDataset(const std::vector<UserRecord>& users, uint64_t seed) {
  DatasetSplit split;
  split.seed = seed;
  for (const Label label : {Label::kControl, Label::kPositive}) {
    std::vector<const UserRecord*> group;
    for (const auto& u : users) {
      if (u.label == label) group.push_back(&u);
    }
    if (group.size() < 10) {
      throw Error("split_dataset: need at least 10 users per label, got " +
                  std::to_string(group.size()) + " with label " +
                  std::to_string(static_cast<int>(label)));
    }
    std::sort(group.begin(), group.end(),
              [](const UserRecord* a, const UserRecord* b) {
                return a->user_id < b->user_id;
              });
    Rng rng(MixSeed(seed, static_cast<uint64_t>(label)));
    for (std::size_t i = group.size() - 1; i > 0; --i) {
      std::swap(group[i], group[UniformIndex(rng, i + 1)]);
    }
    const auto sizes = AllocateSplit(group.size());
    std::size_t at = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      auto& dest = k == 0 ? split.train : k == 1 ? split.validation : split.test;
      for (std::size_t i = 0; i < sizes[k]; ++i) dest.push_back(*group[at++]);
    }
  }
  for (auto* part : {&split.train, &split.validation, &split.test}) {
    std::sort(part->begin(), part->end(), UserOrder);
  }
  return split;
}

std::vector<RawPost> ParseRawPosts(std::string_view ndjson) {
  std::vector<RawPost> posts;
  ForEachLine(ndjson, [&](const Json& obj) {
    RawPost p;
    p.post_id = JsonString(obj, {"id", "post_id"}, true);
    p.user_id = JsonString(obj, {"author", "user_id"}, true);
    p.created_utc = JsonTimestamp(obj);
    p.source_forum = JsonString(obj, {"subreddit", "source_forum"}, false);
    p.text = JsonString(obj, {"body", "text"}, false);
    if (p.post_id.empty()) throw Error("post with empty id");
    posts.push_back(std::move(p));
  });
  return posts;
}

std::vector<RawPost> ReadRawPosts(const std::filesystem::path& path) {
  try {
    return ParseRawPosts(ReadFile(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string SerializeUsers(const std::vector<UserRecord>& users) {
  std::string out;
  for (const auto& user : users) {
    Json obj;
    obj["user_id"] = user.user_id;
    obj["label"] = static_cast<int>(user.label);
    Json posts = Json::array();
    for (const auto& p : user.posts) {
      Json post;
      post["id"] = p.post_id;
      post["created_utc"] = p.created_utc;
      post["text"] = p.text;
      posts.push_back(std::move(post));
    }
    obj["posts"] = std::move(posts);
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<UserRecord> ParseUsers(std::string_view ndjson) {
  std::vector<UserRecord> users;
  ForEachLine(ndjson, [&](const Json& obj) {
    UserRecord u;
    u.user_id = JsonString(obj, {"user_id"}, true);
    const auto label = obj.find("label");
    if (label == obj.end() || !label->is_number_integer() ||
        (label->get<int>() != 0 && label->get<int>() != 1)) {
      throw Error("user " + u.user_id + ": label must be 0 or 1");
    }
    u.label = static_cast<Label>(label->get<int>());
    const auto posts = obj.find("posts");
    if (posts == obj.end() || !posts->is_array()) {
      throw Error("user " + u.user_id + ": missing posts array");
    }
    for (const auto& p : *posts) {
      RawPost post;
      post.post_id = JsonString(p, {"id", "post_id"}, true);
      post.user_id = u.user_id;
      post.created_utc = JsonTimestamp(p);
      post.text = JsonString(p, {"text", "body"}, false);
      u.posts.push_back(std::move(post));
    }
    users.push_back(std::move(u));
  });
  return users;
}

std::vector<UserRecord> ReadUsers(const std::filesystem::path& path) {
  try {
    return ParseUsers(ReadFile(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void WriteSplit(const std::filesystem::path& dir, const DatasetSplit& split,
                const std::vector<std::pair<std::string, std::string>>&
                    extra_manifest_fields) {
  std::filesystem::create_directories(dir);
  Json manifest;
  manifest["format"] = "vscreen-corpus/1";
  manifest["seed"] = split.seed;
  manifest["split_ratio"] = "8:1:1";
  for (const auto& [key, value] : extra_manifest_fields) manifest[key] = value;
  Json counts;
  const std::pair<const char*, const std::vector<UserRecord>*> parts[] = {
      {"train", &split.train},
      {"validation", &split.validation},
      {"test", &split.test}};
  for (const auto& [name, users] : parts) {
    const std::string body = SerializeUsers(*users);
    WriteFile(dir / (std::string(name) + ".ndjson"), body);
    Json c;
    int positives = 0;
    std::size_t posts = 0;
    for (const auto& u : *users) {
      positives += u.label == Label::kPositive;
      posts += u.posts.size();
    }
    c["users"] = users->size();
    c["positive"] = positives;
    c["control"] = static_cast<int>(users->size()) - positives;
    c["posts"] = posts;
    c["sha256"] = Sha256Hex(body);
    counts[name] = std::move(c);
  }
  manifest["counts"] = std::move(counts);
  WriteFile(dir / "manifest.json", manifest.dump(2) + "\n");
}

DatasetSplit ReadSplit(const std::filesystem::path& dir) {
  DatasetSplit split;
  split.train = ReadUsers(dir / "train.ndjson");
  split.validation = ReadUsers(dir / "validation.ndjson");
  split.test = ReadUsers(dir / "test.ndjson");
  const auto manifest_path = dir / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    const Json manifest = Json::parse(ReadFile(manifest_path));
    if (manifest.contains("seed")) split.seed = manifest["seed"].get<uint64_t>();
  }
  return split;
}

std::vector<UserRecord> ReadCorpusUsers(const std::filesystem::path& path) {
  if (!std::filesystem::is_directory(path)) return ReadUsers(path);
  auto split = ReadSplit(path);
  std::vector<UserRecord> all = std::move(split.train);
  for (auto* part : {&split.validation, &split.test}) {
    for (auto& u : *part) all.push_back(std::move(u));
  }
  std::sort(all.begin(), all.end(), UserOrder);
  return all;
}

}  // namespace vscreen::corpus
