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
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "bosonkit/distribution.hpp"
#include "bosonkit/events.hpp"
#include "bosonkit/parallel.hpp"
#include "bosonkit/permanent.hpp"
#include "bosonkit/random.hpp"

namespace bosonkit {

/// Events drawn with CounterRng(hash64(seed, c)) for chunk c.
inline constexpr std::size_t kSamplerChunk = 4096;

/// Negative weights above this magnitude are treated as bugs, not rounding.
inline constexpr double kWeightClampTolerance = 1e-12;

/// Draws an index with probability proportional to \p weights. Slightly
/// negative weights (rounding) count as zero; anything below
/// -kWeightClampTolerance, or a zero total, is a NumericError.
inline std::size_t draw_weighted(std::span<const double> weights, CounterRng& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (w < -kWeightClampTolerance || !std::isfinite(w)) {
      throw NumericError("conditional probability " + std::to_string(w) + " is not a valid weight");
    }
    if (w > 0.0) total += w;
  }
  if (!(total > 0.0)) throw NumericError("all conditional probabilities vanish");
  const double target = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (target < acc) return i;
  }
  return last;
}

inline SamplerKind sampler_kind_for(DistributionKind k) {
  switch (k) {
    case DistributionKind::boson: return SamplerKind::boson_exact;
    case DistributionKind::distinguishable: return SamplerKind::distinguishable;
    case DistributionKind::uniform: return SamplerKind::uniform;
    case DistributionKind::empirical: return SamplerKind::external;
  }
  return SamplerKind::external;
}

/// Inverse-transform sampling from a precomputed distribution. Each event
/// costs one uniform draw u; the outcome is the first index whose cumulative
/// probability exceeds u times the total (binary search).
inline EventStream sample_from_distribution(const OutputDistribution& dist, std::size_t count, std::uint64_t seed) {
  const double total = dist.total();
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("distribution is not normalized (total " + std::to_string(total) + ")");
  }
  std::vector<double> cdf(dist.size());
  std::partial_sum(dist.probs.begin(), dist.probs.end(), cdf.begin());
  // Outcomes past the last positive probability are never drawn.
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] > 0.0) last_positive = i;
  }

  EventStream out;
  out.m = dist.m;
  out.n = dist.n;
  out.provenance = sampler_kind_for(dist.kind);
  out.seed = seed;
  out.events.resize(count);
  for_each_chunk(count, kSamplerChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    CounterRng rng(hash64(seed, chunk));
    for (std::size_t e = begin; e < end; ++e) {
      const double u = rng.uniform() * cdf.back();
      std::size_t idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      idx = std::min(idx, last_positive);
      out.events[e] = occupation_at(idx, dist.m, dist.n, dist.support);
    }
  });
  return out;
}

/// One exact boson sample by sequential conditional placement.
///
/// The photon columns are shuffled; photon k then lands in row r with weight
/// |perm(A[r_1..r_{k-1}, r ; 1..k])|^2, expanded along the new row:
///   perm = sum_l A(r, l) * perm(A[r_1..r_{k-1} ; 1..k without l]).
/// The k minors are shared by every candidate row.
inline ModeOccupation clifford_clifford_draw(const ComplexMatrix& photon_cols, CounterRng& rng) {
  const Eigen::Index m = photon_cols.rows();
  const int n = static_cast<int>(photon_cols.cols());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::swap(order[static_cast<std::size_t>(i)], order[rng.index(static_cast<std::size_t>(i) + 1)]);
  }
  ComplexMatrix a(m, n);
  for (int c = 0; c < n; ++c) a.col(c) = photon_cols.col(order[static_cast<std::size_t>(c)]);

  std::vector<int> rows;
  rows.reserve(static_cast<std::size_t>(n));
  std::vector<double> weights(static_cast<std::size_t>(m));
  std::vector<Complex> minors;
  ComplexMatrix sub;
  for (int k = 1; k <= n; ++k) {
    minors.assign(static_cast<std::size_t>(k), Complex(1.0, 0.0));
    if (k > 1) {
      sub.resize(k - 1, k - 1);
      for (int l = 0; l < k; ++l) {
        for (int r = 0; r < k - 1; ++r) {
          for (int c = 0, cc = 0; c < k; ++c) {
            if (c == l) continue;
            sub(r, cc++) = a(rows[static_cast<std::size_t>(r)], c);
          }
        }
        minors[static_cast<std::size_t>(l)] = permanent(sub);
      }
    }
    for (Eigen::Index r = 0; r < m; ++r) {
      Complex amp(0.0, 0.0);
      for (int l = 0; l < k; ++l) amp += a(r, l) * minors[static_cast<std::size_t>(l)];
      weights[static_cast<std::size_t>(r)] = std::norm(amp);
    }
    rows.push_back(static_cast<int>(draw_weighted(weights, rng)));
  }
  return ModeOccupation(std::move(rows));
}

/// Exact boson sampling without tabulating the output distribution.
/// Collision outcomes are kept; use filter_collision_free to post-select.
inline EventStream clifford_clifford_sample(const ComplexMatrix& u, const ModeOccupation& input, std::size_t count,
                                            std::uint64_t seed) {
  const ComplexMatrix cols = detail::photon_columns(u, input);
  if (detail::input_isometry_defect(u, input) > kUnitarityTolerance) {
    throw InvalidArgument("clifford_clifford_sample requires a unitary transfer matrix");
  }
  EventStream out;
  out.m = static_cast<int>(u.rows());
  out.n = input.photons();
  out.provenance = SamplerKind::boson_direct;
  out.seed = seed;
  out.events.resize(count);
  for_each_chunk(count, kSamplerChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    CounterRng rng(hash64(seed, chunk));
    for (std::size_t e = begin; e < end; ++e) out.events[e] = clifford_clifford_draw(cols, rng);
  });
  return out;
}

struct FilterResult {
  EventStream stream;
  std::size_t kept = 0;
  std::size_t total = 0;
  /// kept / total; 1 for an empty input.
  double retention() const noexcept { return total == 0 ? 1.0 : static_cast<double>(kept) / total; }
};

/// Keeps the events with at most one photon per mode, in order.
inline FilterResult filter_collision_free(const EventStream& events) {
  FilterResult r;
  r.stream.m = events.m;
  r.stream.n = events.n;
  r.stream.provenance = events.provenance;
  r.stream.seed = events.seed;
  r.total = events.size();
  for (const ModeOccupation& e : events.events) {
    if (e.collision_free()) r.stream.events.push_back(e);
  }
  r.kept = r.stream.size();
  return r;
}

}  // namespace bosonkit
