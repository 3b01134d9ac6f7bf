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
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace bosonkit::testing {

/// Test-side generator, deliberately separate from the library's CounterRng.
inline std::mt19937_64 test_rng(std::uint64_t seed) { return std::mt19937_64(seed * 0x9E3779B97F4A7C15ULL + 17); }

inline Eigen::MatrixXcd random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = std::complex<double>(g(rng), g(rng));
  }
  return a;
}

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

/// 50:50 beamsplitter [[1, i], [i, 1]] / sqrt(2).
inline Eigen::MatrixXcd beamsplitter() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd u(2, 2);
  u << s, std::complex<double>(0, s), std::complex<double>(0, s), s;
  return u;
}

}  // namespace bosonkit::testing
