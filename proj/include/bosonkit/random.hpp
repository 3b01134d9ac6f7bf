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

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>

namespace bosonkit {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives the seed of sub-stream \p index from \p base. Used for per-draw
/// unitary seeds, per-segment Hamiltonian seeds and per-chunk sampler seeds.
constexpr std::uint64_t hash64(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(mix64(base ^ 0x6A09E667F3BCC909ULL) + kGoldenGamma * (index + 1));
}

/// Counter-based SplitMix64: draw k (0-based) is mix64(seed + (k+1)*gamma), so
/// any position of the stream can be addressed directly. Matches the reference
/// SplitMix64 sequence for the same seed.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr explicit CounterRng(std::uint64_t seed = 0, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix64(seed_ + kGoldenGamma * counter_);
  }

  /// Value of draw \p k without advancing the stream.
  constexpr result_type at(std::uint64_t k) const noexcept {
    return mix64(seed_ + kGoldenGamma * (k + 1));
  }

  constexpr void discard(std::uint64_t k) noexcept { counter_ += k; }
  constexpr std::uint64_t position() const noexcept { return counter_; }
  constexpr std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n) noexcept {
    auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  /// Standard normal via Box-Muller; consumes two draws and keeps the cosine
  /// branch only, so the stream position never depends on cached state.
  double normal() noexcept {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace bosonkit
