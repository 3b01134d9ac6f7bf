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
#include <bit>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bosonkit/error.hpp"
#include "bosonkit/occupation.hpp"
#include "bosonkit/parallel.hpp"

namespace bosonkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr int kNaivePermanentMaxSize = 7;
inline constexpr int kPermanentMaxSize = 30;

namespace detail {

template <class Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument(std::string(what) + " requires a square matrix, got " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()));
  }
}

// Gray-code steps handled per task once the matrix is large enough to split.
inline constexpr int kPermanentSplitSize = 20;
inline constexpr int kPermanentChunkBits = 16;

// Signed Ryser partial sum over Gray-code steps [begin, end), 1 <= begin.
// Row sums are rebuilt directly for the subset gray(begin - 1), then updated
// by one column per step.
template <class Derived>
typename Derived::Scalar ryser_range(const Eigen::MatrixBase<Derived>& a, std::uint64_t begin, std::uint64_t end) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = a.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row_sums = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  const std::uint64_t start_code = (begin - 1) ^ ((begin - 1) >> 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    if ((start_code >> j) & 1U) row_sums += a.col(j);
  }
  Scalar total{0};
  for (std::uint64_t k = begin; k < end; ++k) {
    const int j = std::countr_zero(k);
    const std::uint64_t code = k ^ (k >> 1);
    if ((code >> j) & 1U) {
      row_sums += a.col(j);
    } else {
      row_sums -= a.col(j);
    }
    const Scalar term = row_sums.prod();
    if (std::popcount(code) & 1) {
      total -= term;
    } else {
      total += term;
    }
  }
  return total;
}

}  // namespace detail

/// Permanent by explicit enumeration of all n! permutations. Test oracle only.
template <class Derived>
typename Derived::Scalar permanent_naive(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(a, "permanent_naive");
  const int n = static_cast<int>(a.rows());
  if (n > kNaivePermanentMaxSize) {
    throw InvalidArgument("permanent_naive is limited to n <= " + std::to_string(kNaivePermanentMaxSize));
  }
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  Scalar sum{0};
  do {
    Scalar term{1};
    for (int i = 0; i < n; ++i) term *= a(i, sigma[static_cast<std::size_t>(i)]);
    sum += term;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return sum;
}

/// Permanent by Ryser's formula in Gray-code order, O(2^n n).
///
/// perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij
///
/// For n >= 20 the 2^n steps are cut into fixed blocks of 2^16 that run on
/// the worker pool and are summed in block order, so the value is
/// bit-identical for any thread limit.
template <class Derived>
typename Derived::Scalar permanent(const Eigen::MatrixBase<Derived>& a, int max_size = kPermanentMaxSize) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(a, "permanent");
  const int n = static_cast<int>(a.rows());
  if (n > max_size) {
    throw InvalidArgument("permanent size " + std::to_string(n) + " exceeds the configured cap " +
                          std::to_string(max_size));
  }
  if (n == 0) return Scalar{1};
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);

  const std::uint64_t steps = std::uint64_t{1} << n;
  Scalar total{0};
  if (n < detail::kPermanentSplitSize) {
    total = detail::ryser_range(a, 1, steps);
  } else {
    const std::uint64_t block = std::uint64_t{1} << detail::kPermanentChunkBits;
    std::vector<Scalar> partial(static_cast<std::size_t>(steps / block), Scalar{0});
    const typename Derived::PlainObject dense = a;
    for_each_chunk(partial.size(), 1, [&](std::size_t c, std::size_t, std::size_t) {
      const std::uint64_t lo = std::max<std::uint64_t>(1, c * block);
      partial[c] = detail::ryser_range(dense, lo, (c + 1) * block);
    });
    for (const Scalar& p : partial) total += p;
  }
  return (n & 1) ? -total : total;
}

/// Builds the n x n matrix whose permanent is the transition amplitude from
/// \p input to \p output: row i of U repeated t_i times (output occupations),
/// column j repeated s_j times (input occupations). U is indexed
/// [output mode, input mode].
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> scattering_submatrix(
    const Eigen::MatrixBase<Derived>& u, const ModeOccupation& input, const ModeOccupation& output) {
  if (input.photons() != output.photons()) {
    throw InvalidArgument("photon number mismatch: input has " + std::to_string(input.photons()) +
                          ", output has " + std::to_string(output.photons()));
  }
  if (!input.fits(static_cast<int>(u.cols())) || !output.fits(static_cast<int>(u.rows()))) {
    throw InvalidArgument("mode index out of range for a " + std::to_string(u.rows()) + "x" +
                          std::to_string(u.cols()) + " transfer matrix");
  }
  const int n = input.photons();
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> sub(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) sub(r, c) = u(output[static_cast<std::size_t>(r)], input[static_cast<std::size_t>(c)]);
  }
  return sub;
}

}  // namespace bosonkit
