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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bosonkit/combinatorics.hpp"
#include "bosonkit/error.hpp"
#include "bosonkit/events.hpp"
#include "bosonkit/parallel.hpp"
#include "bosonkit/permanent.hpp"
#include "bosonkit/unitary.hpp"

namespace bosonkit {

enum class DistributionKind { boson, distinguishable, uniform, empirical };

inline const char* to_string(DistributionKind k) {
  switch (k) {
    case DistributionKind::boson: return "boson";
    case DistributionKind::distinguishable: return "distinguishable";
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::empirical: return "empirical";
  }
  return "?";
}

/// Probability vector over a support, indexed by occupation_index.
struct OutputDistribution {
  int m = 0;
  int n = 0;
  Support support = Support::collision_free;
  DistributionKind kind = DistributionKind::empirical;
  std::vector<double> probs;
  bool renormalized = false;
  /// Probability mass on the support before any renormalization. For the
  /// collision-free support this is the collision-free mass.
  double support_mass = 1.0;

  std::size_t size() const noexcept { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
  double probability(const ModeOccupation& occ) const { return probs[occupation_index(occ, m, n, support)]; }
  double total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }
};

inline constexpr double kUnitarityTolerance = 1e-8;

namespace detail {

inline constexpr std::size_t kOutcomeChunk = 512;

// Columns of U belonging to each input photon: m x n, column c = photon c.
inline ComplexMatrix photon_columns(const ComplexMatrix& u, const ModeOccupation& input) {
  if (input.photons() < 1) throw InvalidArgument("input must contain at least one photon");
  if (!input.fits(static_cast<int>(u.cols()))) {
    throw InvalidArgument("input mode out of range for a " + std::to_string(u.cols()) + "-mode transfer matrix");
  }
  ComplexMatrix cols(u.rows(), input.photons());
  for (int c = 0; c < input.photons(); ++c) cols.col(c) = u.col(input[static_cast<std::size_t>(c)]);
  return cols;
}

inline double isometry_defect(const ComplexMatrix& cols) {
  return (cols.adjoint() * cols - ComplexMatrix::Identity(cols.cols(), cols.cols())).cwiseAbs().maxCoeff();
}

// Isometry defect of U restricted to the distinct occupied input modes.
inline double input_isometry_defect(const ComplexMatrix& u, const ModeOccupation& input) {
  if (!input.fits(static_cast<int>(u.cols()))) throw InvalidArgument("input mode out of range");
  std::vector<int> modes = input.modes();
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
  ComplexMatrix cols(u.rows(), static_cast<Eigen::Index>(modes.size()));
  for (std::size_t c = 0; c < modes.size(); ++c) cols.col(static_cast<Eigen::Index>(c)) = u.col(modes[c]);
  return isometry_defect(cols);
}

template <class Weight>
OutputDistribution tabulate(const ComplexMatrix& cols, Support support, bool renormalize, DistributionKind kind,
                            double defect, Weight&& weight) {
  const int m = static_cast<int>(cols.rows());
  const int n = static_cast<int>(cols.cols());
  if (support == Support::full && renormalize && defect > kUnitarityTolerance) {
    throw NumericError("transfer matrix is not unitary on the input modes (defect " + std::to_string(defect) +
                       "); full-support normalization is undefined");
  }
  OutputDistribution d;
  d.m = m;
  d.n = n;
  d.support = support;
  d.kind = kind;
  d.probs.assign(support_size(m, n, support), 0.0);
  for_each_chunk(d.probs.size(), kOutcomeChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    ComplexMatrix sub(n, n);
    for (std::size_t idx = begin; idx < end; ++idx) {
      const ModeOccupation out = occupation_at(idx, m, n, support);
      for (int r = 0; r < n; ++r) sub.row(r) = cols.row(out[static_cast<std::size_t>(r)]);
      d.probs[idx] = weight(sub) / out.count_factorials();
    }
  });
  d.support_mass = d.total();
  if (renormalize) {
    if (!(d.support_mass > 0.0)) throw NumericError("distribution has no mass on the requested support");
    for (double& p : d.probs) p /= d.support_mass;
    d.renormalized = true;
  }
  return d;
}

}  // namespace detail

/// Output distribution of indistinguishable photons:
/// P(T) = |perm(A_{S,T})|^2 / (prod s_j! prod t_i!).
/// \p u is indexed [output, input]. With \p renormalize the probabilities are
/// divided by the support mass (kept in support_mass).
inline OutputDistribution boson_distribution(const ComplexMatrix& u, const ModeOccupation& input,
                                             Support support = Support::collision_free, bool renormalize = true) {
  const double input_factor = input.count_factorials();
  const ComplexMatrix cols = detail::photon_columns(u, input);
  return detail::tabulate(cols, support, renormalize, DistributionKind::boson,
                          detail::input_isometry_defect(u, input), [&](const ComplexMatrix& a) { return std::norm(permanent(a)) / input_factor; });
}

/// Same as boson_distribution for an n x m block whose row r holds the
/// amplitudes of input photon r to every output mode (the layout produced by
/// characterization).
inline OutputDistribution boson_distribution_from_block(const ComplexMatrix& block,
                                                        Support support = Support::collision_free,
                                                        bool renormalize = true) {
  return detail::tabulate(block.transpose(), support, renormalize, DistributionKind::boson,
                          detail::isometry_defect(block.transpose()), [](const ComplexMatrix& a) { return std::norm(permanent(a)); });
}

/// Output distribution of fully distinguishable photons:
/// P(T) = perm(|A_{S,T}|^2) / prod t_i!.
inline OutputDistribution distinguishable_distribution(const ComplexMatrix& u, const ModeOccupation& input,
                                                       Support support = Support::collision_free,
                                                       bool renormalize = true) {
  const ComplexMatrix cols = detail::photon_columns(u, input);
  return detail::tabulate(cols, support, renormalize,
                          DistributionKind::distinguishable, detail::input_isometry_defect(u, input), [](const ComplexMatrix& a) {
                            const RealMatrix intensities = a.cwiseAbs2();
                            return permanent(intensities);
                          });
}

/// Equal weight on every outcome of the support.
inline OutputDistribution uniform_distribution(int m, int n, Support support = Support::collision_free) {
  OutputDistribution d;
  d.m = m;
  d.n = n;
  d.support = support;
  d.kind = DistributionKind::uniform;
  const std::uint64_t size = support_size(m, n, support);
  d.probs.assign(size, 1.0 / static_cast<double>(size));
  d.renormalized = true;
  d.support_mass = 1.0;
  return d;
}

namespace detail {
inline void require_same_support(const OutputDistribution& p, const OutputDistribution& q) {
  if (p.m != q.m || p.n != q.n || p.support != q.support || p.size() != q.size()) {
    throw InvalidArgument("distributions are defined on different supports");
  }
}
}  // namespace detail

/// Classical fidelity sum_i sqrt(p_i q_i).
inline double fidelity(const OutputDistribution& p, const OutputDistribution& q) {
  detail::require_same_support(p, q);
  double f = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) f += std::sqrt(p[i] * q[i]);
  return f;
}

/// Total variation distance (1/2) sum_i |p_i - q_i|.
inline double total_variation_distance(const OutputDistribution& p, const OutputDistribution& q) {
  detail::require_same_support(p, q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return 0.5 * d;
}

/// Relative frequencies of the events over \p support.
inline OutputDistribution empirical_distribution(const EventStream& events, Support support = Support::collision_free) {
  if (events.empty()) throw InvalidArgument("cannot build an empirical distribution from an empty event stream");
  OutputDistribution d;
  d.m = events.m;
  d.n = events.n;
  d.support = support;
  d.kind = DistributionKind::empirical;
  std::vector<std::uint64_t> counts(support_size(events.m, events.n, support), 0);
  for (const ModeOccupation& e : events.events) ++counts[occupation_index(e, events.m, events.n, support)];
  const double total = static_cast<double>(events.size());
  d.probs.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) d.probs[i] = static_cast<double>(counts[i]) / total;
  d.renormalized = true;
  return d;
}

}  // namespace bosonkit
