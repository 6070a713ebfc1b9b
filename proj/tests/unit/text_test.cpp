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
#include "vscreen/tagger.h"
#include "vscreen/text.h"

namespace vscreen::text {
namespace {

const TextPipeline& Pipeline() {
  static const TextPipeline pipeline = TextPipeline::Load(DefaultAssetsDir());
  return pipeline;
}

TEST(Text, TokenizeSplitsPunctuationAndKeepsContractions) {
  const auto tokens = Tokenize("i can't go, really!");
  ASSERT_FALSE(tokens.empty());
  EXPECT_EQ(tokens.front(), "i");
  EXPECT_EQ(tokens.back(), "!");
  EXPECT_NE(std::find(tokens.begin(), tokens.end(), ","), tokens.end());
}

TEST(Text, SegmentRespectsAbbreviations) {
  const Abbreviations abbr({"dr.", "e.g."});
  const auto s = SegmentSentences("i saw dr. smith today. it went well!", abbr);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NE(s[0].find("smith"), std::string::npos);
}

TEST(Text, SyllableCounts) {
  EXPECT_EQ(CountSyllables("cat"), 1);
  EXPECT_EQ(CountSyllables("table"), 2);
  EXPECT_EQ(CountSyllables("beautiful"), 3);
  EXPECT_GE(CountSyllables("a"), 1);
}

TEST(Text, PosTagNamesRoundTrip) {
  for (std::size_t i = 0; i < kNumPosTags; ++i) {
    const auto tag = static_cast<PosTag>(i);
    EXPECT_EQ(ParsePosTag(PosTagName(tag)), tag);
  }
  EXPECT_FALSE(ParsePosTag("nonsense").has_value());
}

TEST(Text, LemmatizerUsesExceptionsThenRules) {
  Lemmatizer lem;
  lem.AddException(PosTag::kVerb, "went", "go");
  EXPECT_EQ(lem.Lemmatize("went", PosTag::kVerb), "go");
  EXPECT_EQ(lem.Lemmatize("dogs", PosTag::kNoun), "dog");
}

TEST(Tagger, OneTagPerTokenFromTheTagSet) {
  const auto& p = Pipeline();
  const auto sentences = p.Analyze(
      "i forgot my keys again because i was late. she said that the meeting "
      "was boring and long.");
  ASSERT_EQ(sentences.size(), 2u);
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      EXPECT_LT(static_cast<std::size_t>(t.pos), kNumPosTags);
      EXPECT_FALSE(t.lemma.empty());
    }
  }
}

TEST(Tagger, ClosedClassWordsAreFixed) {
  const auto& p = Pipeline();
  const auto s = p.AnalyzeSentence("the dog and i ran.", 0);
  ASSERT_GE(s.tokens.size(), 5u);
  EXPECT_EQ(s.tokens[0].pos, PosTag::kDet);
  EXPECT_EQ(s.tokens[2].pos, PosTag::kConj);
  EXPECT_EQ(s.tokens[3].pos, PosTag::kPron);
  EXPECT_EQ(s.tokens.back().pos, PosTag::kPunct);
}

TEST(Tagger, FitsItsTrainingFixture) {
  const auto corpus = LoadTaggedCorpus(DefaultAssetsDir() / "tagger_fixture.tsv");
  const auto& p = Pipeline();
  std::size_t right = 0, total = 0;
  for (const auto& sentence : corpus) {
    std::vector<std::string> words;
    for (const auto& w : sentence) words.push_back(w.word);
    const auto classes = p.tagger().Predict(words, p.closed_class());
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      right += TaggerClassName(classes[i]) == sentence[i].tag;
      ++total;
    }
  }
  EXPECT_GT(static_cast<double>(right) / static_cast<double>(total), 0.95);
}

TEST(Tagger, SerializeRoundTrips) {
  const auto& model = Pipeline().tagger();
  const auto text = model.Serialize();
  EXPECT_EQ(TaggerModel::Parse(text).Serialize(), text);
}

TEST(Tagger, UntrainedModelThrows) {
  TaggerModel model;
  EXPECT_THROW(model.Predict({"hello"}, ClosedClassLexicon{}), Error);
}

TEST(Clauses, SubordinateClauseAddsAClause) {
  const auto& p = Pipeline();
  const auto simple = p.AnalyzeSentence("the dog barked.", 0);
  const auto complex = p.AnalyzeSentence("the dog barked because the cat ran.", 0);
  EXPECT_EQ(CountFiniteClauses(simple), 1);
  EXPECT_EQ(CountFiniteClauses(complex), 2);
}

}  // namespace
}  // namespace vscreen::text
