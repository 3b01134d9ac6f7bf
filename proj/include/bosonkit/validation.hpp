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
#include <cstdint>
#include <string>
#include <vector>

#include "bosonkit/distribution.hpp"
#include "bosonkit/events.hpp"
#include "bosonkit/parallel.hpp"
#include "bosonkit/permanent.hpp"

namespace bosonkit {

enum class ValidationTest { rne, likelihood_ratio };

inline const char* to_string(ValidationTest t) { return t == ValidationTest::rne ? "rne" : "likelihood-ratio"; }

/// Counter value after each event of a validation run.
struct CounterTrace {
  ValidationTest test = ValidationTest::rne;
  std::vector<int> values;
  double a1 = 0.0;
  double a2 = 0.0;
  /// Events with q_dis == 0 < p_ind, scored as the +2 branch.
  std::size_t infinite_ratio_events = 0;

  int final_value() const noexcept { return values.empty() ? 0 : values.back(); }
};

/// Row-norm estimator prod_i sum_j |A_ij|^2 of a square event submatrix.
template <class Derived>
double row_norm_estimator(const Eigen::MatrixBase<Derived>& a) {
  detail::require_square(a, "row_norm_estimator");
  double p = 1.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) p *= a.row(i).squaredNorm();
  return p;
}

namespace detail {

inline constexpr std::size_t kTraceChunk = 1024;

inline CounterTrace scan(ValidationTest test, const std::vector<int>& increments) {
  CounterTrace t;
  t.test = test;
  t.values.resize(increments.size());
  int c = 0;
  for (std::size_t k = 0; k < increments.size(); ++k) t.values[k] = c += increments[k];
  return t;
}

}  // namespace detail

/// Row-norm estimator test against a uniform sampler. Starting from C = 0,
/// each event adds +1 when P_k > (n/m)^n and -1 otherwise (ties decrement).
inline CounterTrace rne_counter(const EventStream& events, const ComplexMatrix& u, const ModeOccupation& input) {
  if (events.m != u.rows()) {
    throw InvalidArgument("events cover " + std::to_string(events.m) + " modes but the transfer matrix has " +
                          std::to_string(u.rows()));
  }
  if (events.n != input.photons()) throw InvalidArgument("event photon number does not match the input");
  if (!input.fits(static_cast<int>(u.cols()))) throw InvalidArgument("input mode out of range");
  double threshold = 1.0;
  for (int i = 0; i < events.n; ++i) threshold *= static_cast<double>(events.n) / events.m;

  std::vector<int> inc(events.size());
  for_each_chunk(events.size(), detail::kTraceChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double p = row_norm_estimator(scattering_submatrix(u, input, events.events[k]));
      inc[k] = p > threshold ? 1 : -1;
    }
  });
  return detail::scan(ValidationTest::rne, inc);
}

/// Counter increment for a likelihood ratio L. Branches are tried in order,
/// first match wins:
///   a1 < L < 1/a1      ->  0
///   1/a1 <= L < a2     -> +1
///   L >= a2            -> +2
///   1/a2 <= L < a1     -> -1
///   L <= 1/a2          -> -2
/// L == a1 matches none of these and scores -1, mirroring L == 1/a1 -> +1.
inline int likelihood_ratio_increment(double ratio, double a1, double a2) {
  if (a1 < ratio && ratio < 1.0 / a1) return 0;
  if (1.0 / a1 <= ratio && ratio < a2) return 1;
  if (ratio >= a2) return 2;
  if (1.0 / a2 <= ratio && ratio < a1) return -1;
  if (ratio <= 1.0 / a2) return -2;
  return -1;
}

inline void check_likelihood_parameters(double a1, double a2) {
  if (!(a1 > 0.0 && a1 < 1.0)) throw InvalidArgument("a1 must lie in (0, 1)");
  if (!(a2 > 1.0) || !std::isfinite(a2)) throw InvalidArgument("a2 must be greater than 1");
}

/// Probabilities below this are floored before taking logarithms.
inline constexpr double kProbabilityFloor = 1e-300;

/// Likelihood-ratio test against a distinguishable sampler with
/// L_k = p_ind(event) / q_dis(event), computed as exp(log p - log q).
inline CounterTrace likelihood_ratio_counter(const EventStream& events, const OutputDistribution& p_ind,
                                             const OutputDistribution& q_dis, double a1 = 0.9, double a2 = 1.5) {
  check_likelihood_parameters(a1, a2);
  detail::require_same_support(p_ind, q_dis);
  if (events.m != p_ind.m || events.n != p_ind.n) {
    throw InvalidArgument("events and distributions disagree on (m, n)");
  }
  std::vector<int> inc(events.size());
  std::vector<char> infinite(events.size(), 0);
  for_each_chunk(events.size(), detail::kTraceChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const std::uint64_t idx = occupation_index(events.events[k], p_ind.m, p_ind.n, p_ind.support);
      const double p = p_ind[idx];
      const double q = q_dis[idx];
      if (q <= 0.0) {
        if (p <= 0.0) {
          throw NumericError("event " + events.events[k].label() + " has zero probability under both models");
        }
        inc[k] = 2;
        infinite[k] = 1;
        continue;
      }
      const double ratio = std::exp(std::log(std::max(p, kProbabilityFloor)) - std::log(std::max(q, kProbabilityFloor)));
      inc[k] = likelihood_ratio_increment(ratio, a1, a2);
    }
  });
  CounterTrace t = detail::scan(ValidationTest::likelihood_ratio, inc);
  t.a1 = a1;
  t.a2 = a2;
  for (char f : infinite) t.infinite_ratio_events += static_cast<std::size_t>(f);
  return t;
}

}  // namespace bosonkit
