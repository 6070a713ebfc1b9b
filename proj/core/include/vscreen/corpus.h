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

// Labeled dataset construction from raw post dumps: self-reported diagnosis
// detection, control sampling, leakage removal, normalization, filtering,
// deduplication and the stratified 8:1:1 split.

#ifndef VSCREEN_CORPUS_H_
#define VSCREEN_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vscreen/text.h"

namespace vscreen::corpus {

struct RawPost {
  std::string post_id;
  std::string user_id;
  int64_t created_utc = 0;
  std::string source_forum;
  std::string text;
};

enum class Label : int { kControl = 0, kPositive = 1 };

struct UserRecord {
  std::string user_id;
  Label label = Label::kControl;
  std::vector<RawPost> posts;  // ascending created_utc
};

enum class MatchDirection { kBoth, kForward };

struct DiagnosisPattern {
  std::vector<std::string> diagnosis_phrases;
  std::vector<std::string> condition_keywords;
  int window_chars = 40;
  MatchDirection direction = MatchDirection::kBoth;

  // Defaults shipped in assets/diagnosis_patterns.txt.
  static DiagnosisPattern Default();
  // Lines: phrase<TAB>…, keyword<TAB>…, window<TAB>n, direction<TAB>both|forward.
  static DiagnosisPattern Load(const std::filesystem::path& path);
  void Validate() const;
};

struct MatchSpan {
  std::size_t begin = 0;  // byte offsets into the lowercased text
  std::size_t end = 0;
  std::string phrase;
  std::string keyword;
};

// First (leftmost) span where a condition keyword starts within
// window_chars of the end of a diagnosis phrase. Both are matched on word
// boundaries after lowercasing. With kBoth the keyword may also precede the
// phrase, in which case the distance is phrase end minus keyword start.
std::optional<MatchSpan> MatchDiagnosis(std::string_view text,
                                        const DiagnosisPattern& pattern);

// Removes every post on which MatchDiagnosis fires; order is preserved.
std::vector<RawPost> StripLeakage(const std::vector<RawPost>& posts,
                                  const DiagnosisPattern& pattern);

struct ExclusionSet {
  std::set<std::string> forums;  // lowercase
  std::set<std::string> terms;   // lowercase substrings

  // Lines: forum<TAB>name or term<TAB>text.
  static ExclusionSet Load(const std::filesystem::path& path);
};

// True if the user never posted in an excluded forum and never used an
// excluded term (raw or normalized text, case-insensitive substring).
bool IsEligibleControl(const UserRecord& user, const ExclusionSet& exclusions);

// Exactly n eligible users sampled uniformly without replacement,
// deterministic given seed, returned in user_id order.
std::vector<UserRecord> SelectControls(const std::vector<UserRecord>& candidates,
                                       const ExclusionSet& exclusions, int n,
                                       uint64_t seed);

// Lowercase; URLs, HTML, mentions removed; hashtags split into words;
// everything but [a-z0-9 .!?,'] dropped; punctuation runs collapsed and
// attached; then segmented into sentences.
std::vector<std::string> PreprocessPost(std::string_view text,
                                        const text::Abbreviations& abbreviations);

// Splits a hashtag body on camel-case, digit and underscore boundaries.
std::vector<std::string> SplitHashtag(std::string_view tag);

// Groups posts by user (user_id order), posts sorted by (created_utc, id).
std::vector<UserRecord> GroupByUser(const std::vector<RawPost>& posts);

struct BuildOptions {
  int min_sentences = 3;
};

// Normalizes a user's posts: drops posts with fewer than min_sentences
// sentences and exact duplicates of already-kept normalized text.
UserRecord NormalizeUser(const UserRecord& user,
                         const text::Abbreviations& abbreviations,
                         const BuildOptions& options);

// Users in positives_raw with at least one diagnosis match become positive
// (leaking posts stripped); every user in controls_raw becomes a control.
// Users left without posts are dropped. Throws if the result is empty.
std::vector<UserRecord> BuildDataset(const std::vector<RawPost>& positives_raw,
                                     const std::vector<RawPost>& controls_raw,
                                     const DiagnosisPattern& pattern,
                                     const text::Abbreviations& abbreviations,
                                     const BuildOptions& options = {});

// Full corpus build: detect positives, then sample a matched number of
// eligible controls from the candidates (users detected as positive are
// never candidates).
struct CorpusBuild {
  std::vector<UserRecord> users;  // user_id order
  int positives = 0;
  int controls = 0;
};
CorpusBuild BuildCorpus(const std::vector<RawPost>& positives_dump,
                        const std::vector<RawPost>& candidates_dump,
                        const DiagnosisPattern& pattern,
                        const ExclusionSet& exclusions,
                        const text::Abbreviations& abbreviations,
                        const BuildOptions& options, uint64_t seed);

struct DatasetSplit {
  std::vector<UserRecord> train;
  std::vector<UserRecord> validation;
  std::vector<UserRecord> test;
  uint64_t seed = 0;
};

// Stratified 8:1:1 split by user with largest-remainder allocation per label.
DatasetSplit SplitDataset(const std::vector<UserRecord>& users, uint64_t seed);

// Partition sizes for n users under the 8:1:1 largest-remainder rule.
std::array<std::size_t, 3> AllocateSplit(std::size_t n);

// Newline-delimited JSON I/O.
std::vector<RawPost> ReadRawPosts(const std::filesystem::path& path);
std::vector<RawPost> ParseRawPosts(std::string_view ndjson);
std::string SerializeUsers(const std::vector<UserRecord>& users);
std::vector<UserRecord> ParseUsers(std::string_view ndjson);
std::vector<UserRecord> ReadUsers(const std::filesystem::path& path);

// Writes train/validation/test .ndjson and manifest.json into dir.
void WriteSplit(const std::filesystem::path& dir, const DatasetSplit& split,
                const std::vector<std::pair<std::string, std::string>>&
                    extra_manifest_fields);
DatasetSplit ReadSplit(const std::filesystem::path& dir);

// All users of a corpus directory (train + validation + test), or of a
// single .ndjson file.
std::vector<UserRecord> ReadCorpusUsers(const std::filesystem::path& path);

}  // namespace vscreen::corpus

#endif  // VSCREEN_CORPUS_H_
