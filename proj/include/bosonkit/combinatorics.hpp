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

#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

#include "bosonkit/error.hpp"
#include "bosonkit/occupation.hpp"

namespace bosonkit {

/// Which outcomes a distribution is indexed over.
enum class Support {
  collision_free,  ///< C(m, n) patterns with at most one photon per mode
  full,            ///< C(m+n-1, n) patterns, collisions included
};

inline const char* to_string(Support s) { return s == Support::full ? "full" : "collision-free"; }

/// Exact C(n, k); throws NumericError when the result exceeds 64 bits.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    // r holds C(n, i); C(n, i) * (n - i) is divisible by i + 1.
    r = r * (n - i) / (i + 1);
    if (r > UINT64_MAX) {
      throw NumericError("binomial coefficient C(" + std::to_string(n) + "," + std::to_string(k) +
                         ") overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(r);
}

/// Number of collision-free outcomes, C(m, n).
inline std::uint64_t count_collision_free(int m, int n) {
  if (n < 0 || m < n) throw InvalidArgument("collision-free count requires 0 <= n <= m");
  return binomial(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n));
}

/// Dimension of the n-boson Fock space over m modes, C(m+n-1, n).
inline std::uint64_t count_full_space(int m, int n) {
  if (m < 1 || n < 0) throw InvalidArgument("full-space count requires m >= 1 and n >= 0");
  return binomial(static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(n) - 1,
                  static_cast<std::uint64_t>(n));
}

/// Nodes of the n-fold Cartesian product of an m-node graph, m^n.
inline std::uint64_t hypercube_node_count(int m, int n) {
  if (m < 1 || n < 0) throw InvalidArgument("hypercube node count requires m >= 1 and n >= 0");
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (__builtin_mul_overflow(r, static_cast<std::uint64_t>(m), &r)) {
      throw NumericError("m^n overflows 64 bits for m=" + std::to_string(m) + ", n=" + std::to_string(n));
    }
  }
  return r;
}

inline std::uint64_t support_size(int m, int n, Support support) {
  return support == Support::full ? count_full_space(m, n) : count_collision_free(m, n);
}

namespace detail {

// Lexicographic rank of a strictly increasing subset of [0, universe).
inline std::uint64_t subset_rank(const std::vector<int>& c, int universe) {
  const auto k = static_cast<std::uint64_t>(c.size());
  std::uint64_t rank = binomial(static_cast<std::uint64_t>(universe), k) - 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    rank -= binomial(static_cast<std::uint64_t>(universe - 1 - c[i]), k - i);
  }
  return rank;
}

inline std::vector<int> subset_unrank(std::uint64_t rank, int universe, int k) {
  std::vector<int> c;
  c.reserve(static_cast<std::size_t>(k));
  int v = 0;
  for (int i = 0; i < k; ++i) {
    for (;; ++v) {
      const std::uint64_t block = binomial(static_cast<std::uint64_t>(universe - 1 - v),
                                           static_cast<std::uint64_t>(k - 1 - i));
      if (rank < block) break;
      rank -= block;
    }
    c.push_back(v++);
  }
  return c;
}

}  // namespace detail

/// Dense index of \p occ in the lexicographic order of \p support.
/// Full-support patterns (non-decreasing a_i) map to the strictly increasing
/// a_i + i over [0, m+n-1), which preserves lexicographic order.
inline std::uint64_t occupation_index(const ModeOccupation& occ, int m, int n, Support support = Support::collision_free) {
  if (occ.photons() != n || !occ.fits(m)) {
    throw InvalidArgument("occupation " + occ.label() + " is not an " + std::to_string(n) + "-photon pattern over " +
                          std::to_string(m) + " modes");
  }
  if (support == Support::collision_free) {
    if (!occ.collision_free()) throw InvalidArgument("occupation " + occ.label() + " is not collision-free");
    return detail::subset_rank(occ.modes(), m);
  }
  std::vector<int> shifted = occ.modes();
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += static_cast<int>(i);
  return detail::subset_rank(shifted, m + n - 1);
}

/// Inverse of occupation_index.
inline ModeOccupation occupation_at(std::uint64_t index, int m, int n, Support support = Support::collision_free) {
  if (index >= support_size(m, n, support)) {
    throw InvalidArgument("occupation index " + std::to_string(index) + " out of range");
  }
  if (support == Support::collision_free) return ModeOccupation(detail::subset_unrank(index, m, n));
  std::vector<int> c = detail::subset_unrank(index, m + n - 1, n);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= static_cast<int>(i);
  return ModeOccupation(std::move(c));
}

/// Lazy lexicographic walk over the n-subsets of [0, m). Iterators can start
/// at any rank, so ranges can be split across workers.
class CollisionFreeOutcomes {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = std::vector<int>;
    using difference_type = std::ptrdiff_t;
    using pointer = const value_type*;
    using reference = const value_type&;

    iterator() = default;
    static iterator sentinel(std::uint64_t count) {
      iterator it;
      it.rank_ = count;
      return it;
    }
    iterator(int m, int n, std::uint64_t rank) : m_(m), rank_(rank), modes_(detail::subset_unrank(rank, m, n)) {}

    reference operator*() const { return modes_; }
    pointer operator->() const { return &modes_; }
    std::uint64_t rank() const noexcept { return rank_; }

    iterator& operator++() {
      ++rank_;
      const int n = static_cast<int>(modes_.size());
      int i = n - 1;
      while (i >= 0 && modes_[static_cast<std::size_t>(i)] == m_ - n + i) --i;
      if (i < 0) return *this;  // past the end; rank_ now equals the count
      ++modes_[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n; ++j) modes_[static_cast<std::size_t>(j)] = modes_[static_cast<std::size_t>(j - 1)] + 1;
      return *this;
    }
    iterator operator++(int) {
      iterator t = *this;
      ++*this;
      return t;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.rank_ == b.rank_; }

   private:
    int m_ = 0;
    std::uint64_t rank_ = 0;
    std::vector<int> modes_;
  };

  CollisionFreeOutcomes(int m, int n) : m_(m), n_(n) {
    if (n < 1 || n > m) throw InvalidArgument("enumeration requires 1 <= n <= m");
    count_ = count_collision_free(m, n);
  }

  iterator begin() const { return at(0); }
  iterator end() const { return iterator::sentinel(count_); }
  iterator at(std::uint64_t rank) const { return rank >= count_ ? end() : iterator(m_, n_, rank); }
  std::uint64_t size() const noexcept { return count_; }

 private:
  int m_;
  int n_;
  std::uint64_t count_;
};

/// All C(m, n) collision-free outcomes in lexicographic order.
inline std::vector<ModeOccupation> enumerate_collision_free(int m, int n) {
  CollisionFreeOutcomes outcomes(m, n);
  std::vector<ModeOccupation> out;
  out.reserve(outcomes.size());
  for (const auto& modes : outcomes) out.emplace_back(modes);
  return out;
}

}  // namespace bosonkit
