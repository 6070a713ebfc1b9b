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

// Seeded synthetic fixtures: text corpora whose classes differ in writing
// style, and per-sentence feature series where one group carries the
// class signal.

#ifndef VSCREEN_SYNTHETIC_H_
#define VSCREEN_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "vscreen/corpus.h"
#include "vscreen/features.h"
#include "vscreen/registry.h"

namespace vscreen::synth {

struct TextCorpusConfig {
  std::size_t positives = 1000;
  std::size_t controls = 1000;
  int min_posts = 2;
  int max_posts = 4;
  int min_sentences = 3;  // per post
  int max_sentences = 4;
  // Probability that a sentence is written in the user's own class style;
  // otherwise it comes from the other class.
  double own_style = 0.85;
  // Probability that a sentence is replaced by class-neutral filler.
  double neutral = 0.0;
  std::string id_prefix = "syn";
  uint64_t seed = 0;
};

// Well separated classes.
TextCorpusConfig SeparableConfig(uint64_t seed);
// Same vocabulary with weaker, partly neutral class signal.
TextCorpusConfig ShiftedConfig(uint64_t seed);

// Normalized (lowercase, punctuation-attached) users in user_id order.
std::vector<corpus::UserRecord> GenerateTextCorpus(const TextCorpusConfig& config);

struct PlantedConfig {
  std::size_t positives = 100;
  std::size_t controls = 100;
  int min_sentences = 5;
  int max_sentences = 10;
  features::FeatureGroup group = features::FeatureGroup::kEmotion;
  std::string planted_code;  // empty picks the group's first feature
  double strength = 1.5;     // mean shift of the planted feature, in sd units
  double group_strength = 0.3;  // shift of the group's other features
  uint64_t seed = 0;
};

// Standard normal cells; positives get the shifts above on every sentence.
std::vector<features::UserFeatureSeries> GeneratePlantedSeries(
    const features::FeatureRegistry& registry, const PlantedConfig& config);

// Column of the planted feature for a config.
std::size_t PlantedColumn(const features::FeatureRegistry& registry,
                          const PlantedConfig& config);

}  // namespace vscreen::synth

#endif  // VSCREEN_SYNTHETIC_H_
