// Copyright 2026 The bosonkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "bosonkit/random.hpp"

using bosonkit::CounterRng;
using bosonkit::hash64;

TEST(CounterRng, MatchesReferenceSplitMix64Vectors) {
  // Reference SplitMix64 output for seed 1234567.
  CounterRng rng(1234567);
  EXPECT_EQ(rng(), 6457827717110365317ULL);
  EXPECT_EQ(rng(), 3203168211198807973ULL);
  EXPECT_EQ(rng(), 9817491932198370423ULL);
  EXPECT_EQ(rng(), 4593380528125082431ULL);
  EXPECT_EQ(rng(), 16408922859458223821ULL);
}

TEST(CounterRng, RandomAccessAgreesWithSequentialDraws) {
  CounterRng seq(42);
  const CounterRng ref(42);
  for (std::uint64_t k = 0; k < 100; ++k) EXPECT_EQ(seq(), ref.at(k));
  CounterRng skipped(42);
  skipped.discard(57);
  EXPECT_EQ(skipped(), ref.at(57));
}

TEST(CounterRng, UniformAndNormalMoments) {
  CounterRng rng(7);
  const int n = 200000;
  double s = 0, s2 = 0, g = 0, g2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
    const double z = rng.normal();
    g += z;
    g2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.5, 0.005);
  EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12.0, 0.002);
  EXPECT_NEAR(g / n, 0.0, 0.01);
  EXPECT_NEAR(g2 / n, 1.0, 0.01);
}

TEST(CounterRng, IndexStaysInRange) {
  CounterRng rng(3);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(rng.index(7), 7u);
}

TEST(Hash64, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t base = 0; base < 20; ++base) {
    for (std::uint64_t i = 0; i < 200; ++i) seen.insert(hash64(base, i));
  }
  EXPECT_EQ(seen.size(), 4000u);
  EXPECT_NE(hash64(1, 0), CounterRng(1).at(0));
}
