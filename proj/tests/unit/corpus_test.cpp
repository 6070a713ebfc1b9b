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

#include <gtest/gtest.h>

#include "vscreen/common.h"
#include "vscreen/corpus.h"

namespace vscreen::corpus {
namespace {

RawPost Post(std::string id, std::string user, int64_t ts, std::string forum,
             std::string text) {
  return RawPost{std::move(id), std::move(user), ts, std::move(forum), std::move(text)};
}

TEST(Diagnosis, MatchesWithinWindowOnWordBoundaries) {
  const auto p = DiagnosisPattern::Default();
  EXPECT_TRUE(MatchDiagnosis("Yesterday I was diagnosed with ADHD.", p).has_value());
  EXPECT_FALSE(MatchDiagnosis("i was diagnosed with asthma", p).has_value());
  EXPECT_FALSE(MatchDiagnosis("diagnosed with a cold, then i had to address it", p)
                   .has_value());
}

TEST(Diagnosis, KeywordBeforePhraseOnlyInBothMode) {
  auto p = DiagnosisPattern::Default();
  const std::string text = "adhd is what i have been diagnosed with";
  EXPECT_TRUE(MatchDiagnosis(text, p).has_value());
  p.direction = MatchDirection::kForward;
  EXPECT_FALSE(MatchDiagnosis(text, p).has_value());
}

TEST(Diagnosis, WindowLimitsDistance) {
  auto p = DiagnosisPattern::Default();
  p.window_chars = 5;
  EXPECT_TRUE(MatchDiagnosis("diagnosed with adhd", p).has_value());
  EXPECT_FALSE(
      MatchDiagnosis("diagnosed with something else entirely, maybe adhd", p).has_value());
}

TEST(Diagnosis, StripLeakageRemovesMatchingPosts) {
  const auto p = DiagnosisPattern::Default();
  const std::vector<RawPost> posts = {Post("1", "u", 1, "f", "i was diagnosed with adhd."),
                                      Post("2", "u", 2, "f", "nice weather today.")};
  const auto kept = StripLeakage(posts, p);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].post_id, "2");
}

TEST(Preprocess, NormalizesAndSegments) {
  const text::Abbreviations abbr({"dr."});
  const auto s = PreprocessPost(
      "Check https://x.com NOW!!! @bob said <b>hi</b> #GoodMorning. Dr. Who is great.",
      abbr);
  ASSERT_FALSE(s.empty());
  for (const auto& sentence : s) {
    EXPECT_EQ(sentence.find("http"), std::string::npos);
    EXPECT_EQ(sentence.find('@'), std::string::npos);
    EXPECT_EQ(sentence.find('<'), std::string::npos);
    EXPECT_EQ(sentence, ToLower(sentence));
  }
  std::string joined;
  for (const auto& sentence : s) joined += sentence + " ";
  EXPECT_NE(joined.find("good morning"), std::string::npos);
}

TEST(Preprocess, SplitHashtag) {
  EXPECT_EQ(SplitHashtag("ADHDLife2024"), (std::vector<std::string>{"adhd", "life", "2024"}));
  EXPECT_EQ(SplitHashtag("snake_case"), (std::vector<std::string>{"snake", "case"}));
}

TEST(Controls, ExclusionsByForumAndTerm) {
  ExclusionSet ex;
  ex.forums = {"adhd"};
  ex.terms = {"ritalin"};
  UserRecord ok{"a", Label::kControl, {Post("1", "a", 1, "cooking", "soup")}};
  UserRecord forum{"b", Label::kControl, {Post("2", "b", 1, "ADHD", "soup")}};
  UserRecord term{"c", Label::kControl, {Post("3", "c", 1, "cooking", "my Ritalin")}};
  EXPECT_TRUE(IsEligibleControl(ok, ex));
  EXPECT_FALSE(IsEligibleControl(forum, ex));
  EXPECT_FALSE(IsEligibleControl(term, ex));
}

TEST(Controls, SelectionIsExactAndSeeded) {
  std::vector<UserRecord> users;
  for (int i = 0; i < 20; ++i) {
    const std::string id = "u" + std::to_string(10 + i);
    users.push_back({id, Label::kControl, {Post(id + "p", id, 1, "f", "text")}});
  }
  const auto a = SelectControls(users, {}, 5, 3);
  const auto b = SelectControls(users, {}, 5, 3);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].user_id, b[i].user_id);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end(), [](const auto& x, const auto& y) {
    return x.user_id < y.user_id;
  }));
  EXPECT_THROW(SelectControls(users, {}, 21, 3), Error);
}

TEST(Split, AllocationAndStratification) {
  EXPECT_EQ(AllocateSplit(10), (std::array<std::size_t, 3>{8, 1, 1}));
  EXPECT_EQ(AllocateSplit(0), (std::array<std::size_t, 3>{0, 0, 0}));
  std::vector<UserRecord> users;
  for (int i = 0; i < 50; ++i) {
    const std::string id = "u" + std::to_string(100 + i);
    users.push_back({id, i < 20 ? Label::kPositive : Label::kControl,
                     {Post(id + "p", id, 1, "f", "text")}});
  }
  const auto split = SplitDataset(users, 9);
  EXPECT_EQ(split.train.size() + split.validation.size() + split.test.size(), 50u);
  auto positives = [](const std::vector<UserRecord>& v) {
    return std::count_if(v.begin(), v.end(),
                         [](const auto& u) { return u.label == Label::kPositive; });
  };
  EXPECT_EQ(positives(split.train), 16);
  EXPECT_EQ(positives(split.validation), 2);
  EXPECT_EQ(positives(split.test), 2);
  std::set<std::string> ids;
  for (const auto* part : {&split.train, &split.validation, &split.test}) {
    for (const auto& u : *part) EXPECT_TRUE(ids.insert(u.user_id).second);
  }
}

TEST(Io, UsersRoundTrip) {
  std::vector<UserRecord> users = {
      {"a", Label::kPositive, {Post("p1", "a", 5, "f", "one. two. three.")}}};
  const auto text = SerializeUsers(users);
  const auto back = ParseUsers(text);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].label, Label::kPositive);
  EXPECT_EQ(SerializeUsers(back), text);
}

TEST(Io, RawPostsAcceptBothKeyStyles) {
  const auto posts = ParseRawPosts(
      "{\"id\":\"1\",\"author\":\"a\",\"created_utc\":10,\"subreddit\":\"x\",\"body\":\"hi\"}\n"
      "{\"post_id\":\"2\",\"user_id\":\"b\",\"created_utc\":\"11.5\",\"text\":\"yo\"}\n");
  ASSERT_EQ(posts.size(), 2u);
  EXPECT_EQ(posts[1].user_id, "b");
  EXPECT_EQ(posts[1].created_utc, 11);
  EXPECT_THROW(ParseRawPosts("{not json}\n"), Error);
}

TEST(Build, FixtureCorpus) {
  const auto assets = DefaultAssetsDir();
  const auto build = BuildCorpus(
      ReadRawPosts(std::filesystem::path(VSCREEN_FIXTURE_DIR) / "corpus/forum_dump.ndjson"),
      ReadRawPosts(std::filesystem::path(VSCREEN_FIXTURE_DIR) /
                   "corpus/candidates_dump.ndjson"),
      DiagnosisPattern::Load(assets / "diagnosis_patterns.txt"),
      ExclusionSet::Load(assets / "exclusions.txt"),
      text::Abbreviations::Load(assets / "abbreviations.txt"), BuildOptions{}, 1);
  EXPECT_EQ(build.positives, 10);
  EXPECT_EQ(build.controls, 10);
  for (const auto& u : build.users) {
    if (u.label == Label::kControl) {
      EXPECT_NE(u.user_id, "forum_user_00");
      EXPECT_NE(u.user_id, "candidate_03");
      EXPECT_NE(u.user_id, "candidate_05");
    }
  }
}

}  // namespace
}  // namespace vscreen::corpus
