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

#include "vscreen/lexicon.h"

#include <algorithm>
#include <charconv>

#include "vscreen/common.h"

namespace vscreen::features {
namespace {

std::vector<std::string> NonCommentLines(std::string_view contents) {
  std::vector<std::string> lines;
  for (auto& raw : Split(contents, '\n')) {
    const auto line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    lines.emplace_back(line);
  }
  return lines;
}

std::vector<std::string> Words(std::string_view line) {
  std::vector<std::string> out;
  for (auto& w : Split(line, ' ')) {
    if (!w.empty()) out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

Lexicon::Lexicon(std::string code, MatchMode mode,
                 std::vector<std::string> entries)
    : code_(std::move(code)), mode_(mode) {
  if (code_.empty()) throw Error("lexicon code must be non-empty");
  for (auto& e : entries) {
    if (e.empty() || e != ToLower(e)) {
      throw Error("lexicon " + code_ + ": entries must be non-empty lowercase: '" +
                  e + "'");
    }
    entries_.insert(std::move(e));
  }
}

Lexicon Lexicon::Load(const std::filesystem::path& path) {
  try {
    return Parse(ReadFile(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

Lexicon Lexicon::Parse(std::string_view contents) {
  auto lines = NonCommentLines(contents);
  if (lines.empty()) throw Error("empty lexicon");
  const auto header = Words(lines.front());
  if (header.size() != 3 || header[0] != "VSLEX1") {
    throw Error("bad lexicon header: " + lines.front());
  }
  MatchMode mode;
  if (header[2] == "lemma") {
    mode = MatchMode::kLemma;
  } else if (header[2] == "surface") {
    mode = MatchMode::kSurface;
  } else {
    throw Error("bad lexicon match mode: " + header[2]);
  }
  lines.erase(lines.begin());
  return Lexicon(header[1], mode, std::move(lines));
}

bool Lexicon::Contains(std::string_view word) const {
  return entries_.count(std::string(word)) > 0;
}

bool Lexicon::Matches(const text::Token& token) const {
  if (mode_ == MatchMode::kSurface) return Contains(ToLower(token.surface));
  return Contains(token.lemma) || Contains(ToLower(token.surface));
}

NgramTable::NgramTable(std::string register_name, int order,
                       std::unordered_map<std::string, int64_t> counts)
    : register_(std::move(register_name)), order_(order),
      counts_(std::move(counts)) {
  if (order_ < 1) throw Error("n-gram order must be positive");
  for (const auto& [gram, count] : counts_) {
    if (count < 1) throw Error("n-gram count must be at least 1: " + gram);
    max_count_ = std::max(max_count_, count);
  }
}

NgramTable NgramTable::Load(const std::filesystem::path& path) {
  try {
    return Parse(ReadFile(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

NgramTable NgramTable::Parse(std::string_view contents) {
  const auto lines = NonCommentLines(contents);
  if (lines.empty()) throw Error("empty n-gram table");
  const auto header = Words(lines.front());
  if (header.size() != 3 || header[0] != "VSNGR1") {
    throw Error("bad n-gram header: " + lines.front());
  }
  int order = 0;
  const auto [p, ec] = std::from_chars(
      header[2].data(), header[2].data() + header[2].size(), order);
  if (ec != std::errc() || p != header[2].data() + header[2].size()) {
    throw Error("bad n-gram order: " + header[2]);
  }
  std::unordered_map<std::string, int64_t> counts;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto tab = lines[i].find('\t');
    if (tab == std::string::npos) throw Error("bad n-gram row: " + lines[i]);
    const auto words = Words(std::string_view(lines[i]).substr(0, tab));
    if (static_cast<int>(words.size()) != order) {
      throw Error("n-gram of wrong order: " + lines[i]);
    }
    std::string key;
    for (const auto& w : words) {
      if (!key.empty()) key.push_back(' ');
      key += ToLower(w);
    }
    const std::string_view count_text = Trim(
        std::string_view(lines[i]).substr(tab + 1));
    int64_t count = 0;
    const auto [q, ec2] = std::from_chars(
        count_text.data(), count_text.data() + count_text.size(), count);
    if (ec2 != std::errc() || q != count_text.data() + count_text.size()) {
      throw Error("bad n-gram count: " + lines[i]);
    }
    counts[key] += count;
  }
  return NgramTable(header[1], order, std::move(counts));
}

int64_t NgramTable::Count(std::string_view ngram) const {
  const auto it = counts_.find(std::string(ngram));
  return it == counts_.end() ? 0 : it->second;
}

FrequencyRanks::FrequencyRanks(const std::vector<std::string>& words_by_rank) {
  for (std::size_t i = 0; i < words_by_rank.size(); ++i) {
    ranks_.emplace(ToLower(Trim(words_by_rank[i])), i + 1);
  }
}

FrequencyRanks FrequencyRanks::Load(const std::filesystem::path& path) {
  return FrequencyRanks(ReadAssetLines(path));
}

std::size_t FrequencyRanks::Rank(std::string_view word) const {
  const auto it = ranks_.find(std::string(word));
  return it == ranks_.end() ? 0 : it->second;
}

FeatureResources FeatureResources::Load(const std::filesystem::path& assets_dir) {
  FeatureResources res;
  const auto lex_dir = assets_dir / "lexicons";
  const auto ngram_dir = assets_dir / "ngrams";
  if (!std::filesystem::is_directory(lex_dir)) {
    throw Error("missing lexicon directory: " + lex_dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(lex_dir)) {
    if (entry.path().extension() == ".lex") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto lex = Lexicon::Load(f);
    const std::string code = lex.code();
    if (!res.lexicons.emplace(code, std::move(lex)).second) {
      throw Error("duplicate lexicon code " + code);
    }
  }
  files.clear();
  if (std::filesystem::is_directory(ngram_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(ngram_dir)) {
      if (entry.path().extension() == ".ngr") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto table = NgramTable::Load(f);
    const std::string key =
        table.register_name() + ":" + std::to_string(table.order());
    if (!res.ngram_tables.emplace(key, std::move(table)).second) {
      throw Error("duplicate n-gram table " + key);
    }
  }
  res.frequency_ranks = FrequencyRanks::Load(assets_dir / "frequency_ranks.txt");
  return res;
}

const Lexicon& FeatureResources::lexicon(const std::string& code) const {
  const auto it = lexicons.find(code);
  if (it == lexicons.end()) throw Error("no lexicon with code " + code);
  return it->second;
}

const NgramTable& FeatureResources::ngram_table(const std::string& register_name,
                                                int order) const {
  const auto it = ngram_tables.find(register_name + ":" + std::to_string(order));
  if (it == ngram_tables.end()) {
    throw Error("no n-gram table for register " + register_name + " order " +
                std::to_string(order));
  }
  return it->second;
}

}  // namespace vscreen::features
