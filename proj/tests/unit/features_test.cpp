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

#include <cmath>

#include "vscreen/common.h"
#include "vscreen/features.h"
#include "vscreen/harness.h"

namespace vscreen::features {
namespace {

const harness::Toolkit& Kit() {
  static const auto kit = harness::Toolkit::Load(DefaultAssetsDir());
  return *kit;
}

text::Token Word(std::string surface, text::PosTag pos, std::string lemma = "") {
  text::Token t;
  t.surface = std::move(surface);
  t.lemma = lemma.empty() ? t.surface : std::move(lemma);
  t.pos = pos;
  return t;
}

text::Sentence Make(std::vector<text::Token> tokens) {
  text::Sentence s;
  s.tokens = std::move(tokens);
  return s;
}

TEST(Registry, LoadsAllGroupsWithStableFingerprint) {
  const auto& r = Kit().registry();
  EXPECT_GT(r.size(), 100u);
  for (std::size_t g = 0; g < kNumFeatureGroups; ++g) {
    EXPECT_FALSE(r.GroupColumns(static_cast<FeatureGroup>(g)).empty());
  }
  const auto again = FeatureRegistry::Load(DefaultAssetsDir() / "registry.tsv");
  EXPECT_EQ(again.fingerprint(), r.fingerprint());
  EXPECT_EQ(r.fingerprint().size(), 64u);
}

TEST(Registry, RejectsDuplicatesAndUnknownRecipes) {
  EXPECT_THROW(Recipe::Parse("syn.nonsense"), Error);
  EXPECT_THROW(Recipe::Parse("coh.overlap:lemma:9"), Error);
  EXPECT_EQ(Recipe::Parse("coh.overlap:noun:2").window, 2);
  EXPECT_THROW(FeatureRegistry::Parse("A\tsyntactic\tsyn.length\nA\tsyntactic\tsyn.length\n"),
               Error);
}

TEST(Registry, RecipeGroupMustMatchDeclaredGroup) {
  EXPECT_THROW(FeatureRegistry::Parse("A\tlexical\tsyn.length\n"), Error);
}

TEST(Lexicon, LemmaModeFallsBackToSurface) {
  const Lexicon lex("EMO", MatchMode::kLemma, {"worry", "sad"});
  EXPECT_TRUE(lex.Matches(Word("worried", text::PosTag::kVerb, "worry")));
  EXPECT_TRUE(lex.Matches(Word("sad", text::PosTag::kAdj, "sadness")));
  EXPECT_FALSE(lex.Matches(Word("happy", text::PosTag::kAdj)));
}

TEST(Lexicon, NgramTableParse) {
  const auto t = NgramTable::Parse("VSNGR1 web 2\nof the\t10\nin a\t4\n");
  EXPECT_EQ(t.order(), 2);
  EXPECT_EQ(t.max_count(), 10);
  EXPECT_EQ(t.Count("in a"), 4);
  EXPECT_EQ(t.Count("a b"), 0);
}

TEST(GroupOps, FkglFormula) {
  const auto s = Make({Word("the", text::PosTag::kDet), Word("cat", text::PosTag::kNoun),
                       Word("sat", text::PosTag::kVerb), Word(".", text::PosTag::kPunct)});
  EXPECT_NEAR(ComputeFkgl(std::span<const text::Sentence>(&s, 1)),
              0.39 * 3 + 11.8 * 3.0 / 3.0 - 15.59, 1e-12);
  const auto empty = Make({Word(".", text::PosTag::kPunct)});
  EXPECT_THROW(ComputeFkgl(std::span<const text::Sentence>(&empty, 1)), Error);
}

TEST(GroupOps, BilogTtr) {
  EXPECT_FALSE(ComputeBttr({"one"}).has_value());
  EXPECT_NEAR(*ComputeBttr({"a", "b", "a", "c"}), std::log(3.0) / std::log(4.0), 1e-15);
  EXPECT_NEAR(*ComputeBttr({"a", "a"}), 0.0, 1e-15);
}

TEST(GroupOps, OverlapJaccard) {
  const auto a = Make({Word("dogs", text::PosTag::kNoun, "dog"),
                       Word("run", text::PosTag::kVerb)});
  const auto b = Make({Word("dog", text::PosTag::kNoun), Word("sleeps", text::PosTag::kVerb,
                                                              "sleep")});
  const std::vector<text::Sentence> window = {b};
  EXPECT_NEAR(ComputeOverlap(a, window, OverlapSelector::kLemma), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(ComputeOverlap(a, window, OverlapSelector::kNoun), 1.0, 1e-15);
  EXPECT_EQ(ComputeOverlap(a, {}, OverlapSelector::kLemma), 0.0);
  EXPECT_EQ(ComputeOverlap(a, window, OverlapSelector::kPronoun), 0.0);
}

TEST(GroupOps, LexiconRateIgnoresPunctuation) {
  const Lexicon lex("X", MatchMode::kSurface, {"sad"});
  const auto s = Make({Word("so", text::PosTag::kAdv), Word("sad", text::PosTag::kAdj),
                       Word("!", text::PosTag::kPunct)});
  EXPECT_DOUBLE_EQ(ComputeLexiconRate(s, lex), 0.5);
}

TEST(GroupOps, NgramNlfAndCoverage) {
  const auto t = NgramTable::Parse("VSNGR1 web 2\nthe cat\t9\ncat sat\t1\n");
  const auto s = Make({Word("the", text::PosTag::kDet), Word("cat", text::PosTag::kNoun),
                       Word("sat", text::PosTag::kVerb), Word("down", text::PosTag::kAdv)});
  const double expect = (1.0 + std::log(2.0) / std::log(10.0) + 0.0) / 3.0;
  EXPECT_NEAR(ComputeNgramNlf(s, t), expect, 1e-12);
  EXPECT_NEAR(ComputeNgramCoverage(s, t), 2.0 / 3.0, 1e-12);
}

TEST(Extraction, LookaheadMissingAtPostEnd) {
  const auto& kit = Kit();
  corpus::UserRecord user{"u", corpus::Label::kPositive,
                          {{"p", "u", 1, "f", "i ran home. she sat down. we ate dinner."}}};
  const auto series = ExtractUserSeries(user, kit.pipeline(), kit.extractor());
  ASSERT_EQ(series.rows(), 3u);
  const std::size_t col = kit.registry().RequireIndex("NSLO");
  EXPECT_FALSE(series.is_missing(0, col));
  EXPECT_FALSE(series.is_missing(1, col));
  EXPECT_TRUE(series.is_missing(2, col));
  EXPECT_EQ(series.at(2, col), 0.0);
  EXPECT_EQ(series.post_boundaries, (std::vector<std::size_t>{0}));
}

TEST(Extraction, AggregateSkipsMissingCells) {
  UserFeatureSeries s;
  s.cols = 2;
  s.values = {1, 5, 3, 0};
  s.missing = {0, 0, 0, 1};
  const auto mean = AggregateUser(s);
  EXPECT_DOUBLE_EQ(mean[0], 2.0);
  EXPECT_DOUBLE_EQ(mean[1], 5.0);
}

TEST(Extraction, ParallelMatchesSerial) {
  const auto& kit = Kit();
  std::vector<corpus::UserRecord> users;
  for (int i = 0; i < 12; ++i) {
    users.push_back({"u" + std::to_string(i), corpus::Label::kControl,
                     {{"p", "u", 1, "f",
                       "the job was hard today. i think i need a nap because i am tired. "
                       "we went out " + std::to_string(i) + " times."}}});
  }
  const auto a = kit.Extract(users, 1);
  const auto b = kit.Extract(users, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].values, b[i].values);
    EXPECT_EQ(a[i].missing, b[i].missing);
  }
}

TEST(Contour, ZscoresHaveZeroMeanUnitVariance) {
  const auto& reg = Kit().registry();
  UserFeatureSeries s;
  s.cols = reg.size();
  for (int r = 0; r < 4; ++r) {
    SentenceFeatureVector v;
    v.values.assign(reg.size(), 1.0);
    v.values[0] = r;
    v.missing.assign(reg.size(), 0);
    s.AppendRow(v);
  }
  const auto points = ZscoreContour(s, reg, {reg[0].code, reg[1].code});
  double sum = 0, sq = 0;
  for (const auto& p : points) {
    if (p.code == reg[0].code) {
      sum += p.z;
      sq += p.z * p.z;
    } else {
      EXPECT_EQ(p.z, 0.0);
    }
  }
  EXPECT_NEAR(sum, 0.0, 1e-12);
  EXPECT_NEAR(sq / 4, 1.0, 1e-12);
  EXPECT_NE(RenderContourSvg(points).find("<svg"), std::string::npos);
  EXPECT_THROW(ZscoreContour(s, reg, {"NOPE"}), Error);
}

}  // namespace
}  // namespace vscreen::features
