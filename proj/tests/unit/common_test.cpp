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
#include <set>

#include "vscreen/artifact.h"
#include "vscreen/common.h"

namespace vscreen {
namespace {

TEST(Common, Sha256KnownVector) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Common, ExactFormatRoundTrips) {
  for (double v : {0.1, -3.25, 1e-300, 6.02214076e23, 1.0 / 3.0}) {
    EXPECT_EQ(ParseExact(FormatExact(v)), v);
  }
}

TEST(Common, SplitAndTrim) {
  EXPECT_EQ(Split("a,b,,c", ','), (std::vector<std::string>{"a", "b", "", "c"}));
  EXPECT_EQ(Trim("  x y \t"), "x y");
  EXPECT_EQ(ToLower("MiXeD"), "mixed");
}

TEST(Common, MixSeedSeparatesStreams) {
  EXPECT_NE(MixSeed(1, 0), MixSeed(1, 1));
  EXPECT_NE(MixSeed(1, 0), MixSeed(2, 0));
  EXPECT_EQ(MixSeed(5, 9), MixSeed(5, 9));
}

TEST(Common, UniformIndexStaysInRange) {
  Rng rng(3);
  std::set<uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto k = UniformIndex(rng, 7);
    ASSERT_LT(k, 7u);
    seen.insert(k);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Common, ParallelForVisitsEveryIndexOnce) {
  std::vector<int> hits(257, 0);
  ParallelFor(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Artifact, RoundTripIsByteIdentical) {
  ArtifactWriter w;
  w.Text("name", "forest model");
  w.Int("count", -42);
  w.Real("pi", M_PI);
  w.Reals("values", {0.1, 0.2, 1e-17});
  Matrix m(2, 3);
  m << 1, 2, 3, 4.5, -6, 1.0 / 7.0;
  w.Mat("matrix", m);
  ArtifactReader r(w.str());
  EXPECT_EQ(r.Text("name"), "forest model");
  EXPECT_EQ(r.Int("count"), -42);
  EXPECT_EQ(r.Real("pi"), M_PI);
  EXPECT_EQ(r.Reals("values"), (std::vector<double>{0.1, 0.2, 1e-17}));
  EXPECT_EQ(r.PeekKey(), "matrix");
  EXPECT_TRUE(r.Mat("matrix") == m);
  EXPECT_TRUE(r.AtEnd());
}

TEST(Artifact, WrongKeyThrows) {
  ArtifactWriter w;
  w.Int("a", 1);
  ArtifactReader r(w.str());
  EXPECT_THROW(r.Int("b"), Error);
}

TEST(Artifact, MultilineTextRejected) {
  ArtifactWriter w;
  EXPECT_THROW(w.Text("k", "two\nlines"), Error);
}

}  // namespace
}  // namespace vscreen
