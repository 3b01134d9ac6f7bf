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

#include <algorithm>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bosonkit/error.hpp"

namespace bosonkit {

/// An n-photon pattern over m modes, stored as the sorted (non-decreasing)
/// list of occupied modes, one entry per photon. Modes are 0-indexed.
class ModeOccupation {
 public:
  ModeOccupation() = default;

  /// Takes modes in any order; they are sorted.
  explicit ModeOccupation(std::vector<int> modes) : modes_(std::move(modes)) {
    std::sort(modes_.begin(), modes_.end());
    if (!modes_.empty() && modes_.front() < 0) throw InvalidArgument("mode index must be non-negative");
  }

  ModeOccupation(std::initializer_list<int> modes) : ModeOccupation(std::vector<int>(modes)) {}

  /// Builds from an occupation vector (counts per mode).
  static ModeOccupation from_counts(std::span<const int> counts) {
    std::vector<int> modes;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] < 0) throw InvalidArgument("occupation counts must be non-negative");
      modes.insert(modes.end(), static_cast<std::size_t>(counts[i]), static_cast<int>(i));
    }
    ModeOccupation occ;
    occ.modes_ = std::move(modes);
    return occ;
  }

  const std::vector<int>& modes() const noexcept { return modes_; }
  int photons() const noexcept { return static_cast<int>(modes_.size()); }
  int operator[](std::size_t i) const { return modes_[i]; }

  std::vector<int> counts(int m) const {
    if (!fits(m)) throw InvalidArgument("occupation does not fit in " + std::to_string(m) + " modes");
    std::vector<int> c(static_cast<std::size_t>(m), 0);
    for (int mode : modes_) ++c[static_cast<std::size_t>(mode)];
    return c;
  }

  bool fits(int m) const noexcept { return modes_.empty() || modes_.back() < m; }

  bool collision_free() const noexcept {
    return std::adjacent_find(modes_.begin(), modes_.end()) == modes_.end();
  }

  /// Product of factorials of the per-mode counts.
  double count_factorials() const noexcept {
    double f = 1.0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= modes_.size(); ++i) {
      if (i < modes_.size() && modes_[i] == modes_[i - 1]) {
        ++run;
        f *= static_cast<double>(run);
      } else {
        run = 1;
      }
    }
    return f;
  }

  /// Renders "(i,j,k)"; 1-indexed labels when \p one_indexed.
  std::string label(bool one_indexed = true) const {
    std::string s = "(";
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(modes_[i] + (one_indexed ? 1 : 0));
    }
    return s + ")";
  }

  friend auto operator<=>(const ModeOccupation&, const ModeOccupation&) = default;

 private:
  std::vector<int> modes_;
};

}  // namespace bosonkit
