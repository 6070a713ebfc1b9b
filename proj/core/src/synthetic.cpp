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

#include "vscreen/synthetic.h"

#include <algorithm>
#include <array>
#include <cstdio>

#include "vscreen/common.h"

namespace vscreen::synth {
namespace {

using Pool = std::vector<std::string_view>;

const std::string_view& Pick(const Pool& pool, Rng& rng) {
  return pool[UniformIndex(rng, pool.size())];
}

// Restless first-person style: long sentences, subordinate clauses, negative
// emotion and health or school topics.
const Pool kRestlessSubjects = {"i", "i honestly", "i literally", "i really"};
const Pool kRestlessVerbs = {"forgot", "lost", "missed", "ignored", "dropped",
                             "abandoned", "postponed", "misplaced"};
const Pool kRestlessBase = {"forget", "lose", "miss", "ignore", "drop",
                            "abandon", "postpone", "misplace"};
const Pool kRestlessObjects = {"my keys", "the deadline", "my homework",
                               "another assignment", "my medication",
                               "the appointment", "my exam notes", "my therapy session",
                               "the meeting", "my project"};
const Pool kRestlessClauses = {"because i got distracted again",
                               "although i tried so hard to focus",
                               "while my mind kept racing",
                               "when i was supposed to study",
                               "because my brain would not slow down",
                               "since i could not sit still",
                               "after i procrastinated all night"};
const Pool kRestlessEmotions = {"anxious", "frustrated", "overwhelmed", "angry",
                                "stressed", "restless", "ashamed", "nervous"};

// Calm third-person style with short sentences about leisure.
const Pool kCalmSubjects = {"the team", "my neighbor", "we", "our club",
                            "she", "he", "the chef", "my cousin"};
const Pool kCalmVerbs = {"played", "cooked", "bought", "visited", "watched",
                         "built", "painted", "enjoyed"};
const Pool kCalmObjects = {"a great game", "fresh bread", "a new laptop",
                           "the museum", "a funny movie", "the garden",
                           "a tasty soup", "the concert", "a long hike",
                           "the old church"};
const Pool kCalmTimes = {"yesterday", "last weekend", "today", "on sunday",
                         "in the evening", "this morning"};
const Pool kCalmAdjectives = {"lovely", "pleasant", "wonderful", "cheerful",
                              "peaceful", "delightful", "nice", "calm"};

// Neutral filler shared by both classes.
const Pool kNeutral = {"the bus was late again.",
                       "it rained for most of the day.",
                       "the store closes at nine.",
                       "there is a meeting on tuesday.",
                       "the weather report said it will be cold.",
                       "traffic on the bridge was slow.",
                       "the package arrived in the afternoon.",
                       "prices went up this month."};

std::string RestlessSentence(Rng& rng) {
  std::string s;
  switch (UniformIndex(rng, 3)) {
    case 0:
      s = std::string(Pick(kRestlessSubjects, rng)) + " " +
          std::string(Pick(kRestlessVerbs, rng)) + " " +
          std::string(Pick(kRestlessObjects, rng)) + " " +
          std::string(Pick(kRestlessClauses, rng)) + " and i feel so " +
          std::string(Pick(kRestlessEmotions, rng)) + "!";
      break;
    case 1:
      s = "honestly i can not focus on " + std::string(Pick(kRestlessObjects, rng)) +
          " " + std::string(Pick(kRestlessClauses, rng)) + ", so i am " +
          std::string(Pick(kRestlessEmotions, rng)) + " again.";
      break;
    default:
      s = "why do i always " + std::string(Pick(kRestlessBase, rng)) + " " +
          std::string(Pick(kRestlessObjects, rng)) + " " +
          std::string(Pick(kRestlessClauses, rng)) + "?";
      break;
  }
  return s;
}

std::string CalmSentence(Rng& rng) {
  std::string s;
  switch (UniformIndex(rng, 3)) {
    case 0:
      s = std::string(Pick(kCalmSubjects, rng)) + " " +
          std::string(Pick(kCalmVerbs, rng)) + " " +
          std::string(Pick(kCalmObjects, rng)) + " " +
          std::string(Pick(kCalmTimes, rng)) + ".";
      break;
    case 1:
      s = "it was a " + std::string(Pick(kCalmAdjectives, rng)) + " day.";
      break;
    default:
      s = std::string(Pick(kCalmSubjects, rng)) + " " +
          std::string(Pick(kCalmVerbs, rng)) + " " +
          std::string(Pick(kCalmObjects, rng)) + ".";
      break;
  }
  return s;
}

std::string UserId(const std::string& prefix, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return prefix + "_" + buf;
}

}  // namespace

TextCorpusConfig SeparableConfig(uint64_t seed) {
  TextCorpusConfig c;
  c.seed = seed;
  c.id_prefix = "sep";
  return c;
}

TextCorpusConfig ShiftedConfig(uint64_t seed) {
  TextCorpusConfig c;
  c.seed = seed;
  c.id_prefix = "shf";
  c.own_style = 0.6;
  c.neutral = 0.4;
  return c;
}

std::vector<corpus::UserRecord> GenerateTextCorpus(const TextCorpusConfig& config) {
  if (config.min_posts < 1 || config.max_posts < config.min_posts ||
      config.min_sentences < 1 || config.max_sentences < config.min_sentences) {
    throw Error("invalid synthetic corpus size parameters");
  }
  std::vector<corpus::UserRecord> users;
  const std::size_t total = config.positives + config.controls;
  users.reserve(total);
  for (std::size_t u = 0; u < total; ++u) {
    Rng rng(MixSeed(config.seed, u));
    corpus::UserRecord user;
    user.user_id = UserId(config.id_prefix, u);
    // Interleave labels so any prefix of ids is balanced.
    const bool positive = (u % 2 == 0) ? (u / 2 < config.positives)
                                       : (u / 2 >= config.controls);
    user.label = positive ? corpus::Label::kPositive : corpus::Label::kControl;
    const int posts = config.min_posts +
                      static_cast<int>(UniformIndex(
                          rng, static_cast<uint64_t>(config.max_posts - config.min_posts + 1)));
    for (int p = 0; p < posts; ++p) {
      corpus::RawPost post;
      post.post_id = user.user_id + "_p" + std::to_string(p);
      post.user_id = user.user_id;
      post.created_utc = 1600000000 + static_cast<int64_t>(u) * 1000 + p;
      post.source_forum = "synthetic";
      const int sentences =
          config.min_sentences +
          static_cast<int>(UniformIndex(
              rng, static_cast<uint64_t>(config.max_sentences - config.min_sentences + 1)));
      for (int s = 0; s < sentences; ++s) {
        std::string sentence;
        if (UniformUnit(rng) < config.neutral) {
          sentence = std::string(Pick(kNeutral, rng));
        } else {
          const bool own = UniformUnit(rng) < config.own_style;
          sentence = (positive == own) ? RestlessSentence(rng) : CalmSentence(rng);
        }
        if (!post.text.empty()) post.text.push_back(' ');
        post.text += sentence;
      }
      user.posts.push_back(std::move(post));
    }
    users.push_back(std::move(user));
  }
  std::sort(users.begin(), users.end(),
            [](const auto& a, const auto& b) { return a.user_id < b.user_id; });
  return users;
}

std::size_t PlantedColumn(const features::FeatureRegistry& registry,
                          const PlantedConfig& config) {
  const auto& cols = registry.GroupColumns(config.group);
  if (cols.empty()) throw Error("planted group has no features");
  if (config.planted_code.empty()) return cols.front();
  const std::size_t c = registry.RequireIndex(config.planted_code);
  if (registry[c].group != config.group) {
    throw Error("planted feature " + config.planted_code + " is outside the planted group");
  }
  return c;
}

std::vector<features::UserFeatureSeries> GeneratePlantedSeries(
    const features::FeatureRegistry& registry, const PlantedConfig& config) {
  if (config.min_sentences < 1 || config.max_sentences < config.min_sentences) {
    throw Error("invalid planted sentence range");
  }
  const std::size_t planted = PlantedColumn(registry, config);
  const auto& group_cols = registry.GroupColumns(config.group);
  const std::size_t f = registry.size();
  std::vector<double> shift(f, 0.0);
  for (std::size_t c : group_cols) shift[c] = config.group_strength;
  shift[planted] = config.strength;

  std::vector<features::UserFeatureSeries> out;
  const std::size_t total = config.positives + config.controls;
  for (std::size_t u = 0; u < total; ++u) {
    Rng rng(MixSeed(config.seed, u));
    features::UserFeatureSeries s;
    s.user_id = UserId("planted", u);
    const bool positive = (u % 2 == 0) ? (u / 2 < config.positives)
                                       : (u / 2 >= config.controls);
    s.label = positive ? 1 : 0;
    s.cols = f;
    const int rows = config.min_sentences +
                     static_cast<int>(UniformIndex(
                         rng, static_cast<uint64_t>(config.max_sentences -
                                                    config.min_sentences + 1)));
    s.post_boundaries.push_back(0);
    features::SentenceFeatureVector row;
    row.values.resize(f);
    row.missing.assign(f, 0);
    for (int r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < f; ++c) {
        row.values[c] = StandardNormal(rng) + (positive ? shift[c] : 0.0);
      }
      s.AppendRow(row);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace vscreen::synth
