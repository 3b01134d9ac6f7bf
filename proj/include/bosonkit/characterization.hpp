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
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "bosonkit/error.hpp"
#include "bosonkit/permanent.hpp"
#include "bosonkit/random.hpp"

namespace bosonkit {

/// Two-photon interference datum: photons enter ports (input_k, input_l) and
/// a coincidence is counted at outputs (output_i, output_j). 0-indexed.
struct VisibilityRecord {
  int input_k = 0;
  int input_l = 0;
  int output_i = 0;
  int output_j = 0;
  double value = 0.0;
};

/// Moduli of the probed rows plus HOM visibilities among the probed ports.
/// amplitudes(r, j) = |U(j, probes[r])|.
struct CharacterizationDataset {
  int m = 0;
  std::vector<int> probes;
  RealMatrix amplitudes;
  std::vector<VisibilityRecord> visibilities;
  double noise_sigma = 0.0;
  std::size_t undefined_visibilities = 0;
};

/// HOM visibility V = (C_dist - C_indist) / C_dist of the two-photon
/// amplitudes x = U_ik U_jl and y = U_il U_jk, with C_indist = |x + y|^2 and
/// C_dist = |x|^2 + |y|^2. Empty when C_dist vanishes.
inline std::optional<double> hom_visibility(Complex x, Complex y) {
  const double dist = std::norm(x) + std::norm(y);
  if (!(dist > 1e-300)) return std::nullopt;
  return (dist - std::norm(x + y)) / dist;
}

/// Visibility of photons in ports (k, l) detected at outputs (i, j).
inline std::optional<double> simulate_hom_visibility(const ComplexMatrix& u, int k, int l, int i, int j) {
  if (k == l || i == j) throw InvalidArgument("HOM visibility needs two distinct inputs and two distinct outputs");
  const int m = static_cast<int>(u.rows());
  for (int v : {k, l}) {
    if (v < 0 || v >= u.cols()) throw InvalidArgument("input port out of range");
  }
  for (int v : {i, j}) {
    if (v < 0 || v >= m) throw InvalidArgument("output mode out of range");
  }
  return hom_visibility(u(i, k) * u(j, l), u(i, l) * u(j, k));
}

/// |U(j, p)| for every probe p and output j. With intensity noise, Gaussian
/// noise of width \p intensity_sigma is added to |U|^2 (clipped at zero)
/// before the square root.
inline RealMatrix simulate_amplitudes(const ComplexMatrix& u, std::span<const int> probes, double intensity_sigma = 0.0,
                                      std::uint64_t seed = 0) {
  const Eigen::Index m = u.rows();
  RealMatrix amp(static_cast<Eigen::Index>(probes.size()), m);
  CounterRng rng(hash64(seed, 0));
  for (std::size_t r = 0; r < probes.size(); ++r) {
    const int p = probes[r];
    if (p < 0 || p >= u.cols()) throw InvalidArgument("probe port " + std::to_string(p + 1) + " out of range");
    for (Eigen::Index j = 0; j < m; ++j) {
      double intensity = std::norm(u(j, p));
      if (intensity_sigma > 0.0) intensity = std::max(0.0, intensity + intensity_sigma * rng.normal());
      amp(static_cast<Eigen::Index>(r), j) = std::sqrt(intensity);
    }
  }
  return amp;
}

/// Which (input pair, output pair) combinations are scanned.
enum class PairSelection {
  all,        ///< every probe pair with every output pair
  reference,  ///< pairs anchored on the first probe and first output, plus
              ///< short output chains to fix the phase signs
};

struct DatasetOptions {
  PairSelection pairs = PairSelection::all;
  double visibility_sigma = 0.0;
  double intensity_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Simulates the two-step characterization: moduli from single-photon
/// intensities, then HOM visibilities with optional Gaussian noise clipped to
/// [-1, 1]. Combinations with vanishing C_dist are dropped and counted.
inline CharacterizationDataset simulate_dataset(const ComplexMatrix& u, std::span<const int> probes,
                                                const DatasetOptions& opt = {}) {
  if (probes.empty()) throw InvalidArgument("at least one probe port is required");
  if (opt.visibility_sigma < 0.0 || opt.intensity_sigma < 0.0) throw InvalidArgument("noise sigma must be non-negative");
  const int m = static_cast<int>(u.rows());
  const int n = static_cast<int>(probes.size());
  CharacterizationDataset d;
  d.m = m;
  d.probes.assign(probes.begin(), probes.end());
  d.amplitudes = simulate_amplitudes(u, probes, opt.intensity_sigma, opt.seed);
  d.noise_sigma = opt.visibility_sigma;

  std::vector<std::array<int, 4>> combos;  // probe rows a < b, outputs i < j
  const auto add = [&](int a, int b, int i, int j) {
    if (a != b && i != j && i < m && j < m) combos.push_back({a, b, i, j});
  };
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (opt.pairs == PairSelection::all) {
        for (int i = 0; i < m; ++i) {
          for (int j = i + 1; j < m; ++j) add(a, b, i, j);
        }
      } else {
        for (int j = 1; j < m; ++j) add(a, b, 0, j);
        if (a == 0) {
          for (int j = 1; j < m; ++j) {
            add(a, b, j, j + 1);
            add(a, b, j, j + 2);
          }
        }
      }
    }
  }

  CounterRng rng(hash64(opt.seed, 1));
  for (const auto& [a, b, i, j] : combos) {
    const int k = d.probes[static_cast<std::size_t>(a)];
    const int l = d.probes[static_cast<std::size_t>(b)];
    const std::optional<double> v = simulate_hom_visibility(u, k, l, i, j);
    // Draw even for undefined data so noise does not depend on which are dropped.
    const double noise = opt.visibility_sigma > 0.0 ? opt.visibility_sigma * rng.normal() : 0.0;
    if (!v) {
      ++d.undefined_visibilities;
      continue;
    }
    d.visibilities.push_back({k, l, i, j, std::clamp(*v + noise, -1.0, 1.0)});
  }
  return d;
}

struct ReconstructOptions {
  /// Largest tolerated |predicted - measured| visibility after the fit.
  double residual_tolerance = 0.1;
  /// Moduli at or below this carry no phase information.
  double modulus_floor = 1e-9;
  int max_iterations = 200;
};

struct VisibilityResidual {
  VisibilityRecord record;
  double predicted = 0.0;
  double residual = 0.0;  ///< predicted - measured
};

struct Reconstruction {
  /// n x m; row r is probe r, column j output j. Row 0 and column 0 are real.
  ComplexMatrix matrix;
  std::vector<VisibilityResidual> residuals;
  double worst_residual = 0.0;
  double rms_residual = 0.0;
  int iterations = 0;
};

namespace detail {

struct PhaseTerm {
  int unknown;
  int coef;
};

// A visibility expressed in the unknown phases: cos(phi) = cosine, with
// phi = sum coef * theta over terms.
struct PhaseEquation {
  std::size_t record;
  double x;  // |U_ik U_jl|
  double y;  // |U_il U_jk|
  std::vector<PhaseTerm> terms;
  double cosine;
};

inline void validate_dataset(const CharacterizationDataset& d) {
  const Eigen::Index n = static_cast<Eigen::Index>(d.probes.size());
  if (n == 0) throw InvalidArgument("dataset lists no probe ports");
  if (d.m < 1 || d.amplitudes.rows() != n || d.amplitudes.cols() != d.m) {
    throw InvalidArgument("amplitude table must be " + std::to_string(n) + "x" + std::to_string(d.m));
  }
  if (!d.amplitudes.allFinite() || (d.amplitudes.array() < 0.0).any()) {
    throw InvalidArgument("amplitudes must be finite and non-negative");
  }
  for (const VisibilityRecord& v : d.visibilities) {
    if (!(v.value >= -1.0 && v.value <= 1.0)) throw InvalidArgument("visibility outside [-1, 1]");
    if (v.input_k == v.input_l || v.output_i == v.output_j) {
      throw InvalidArgument("visibility record needs distinct inputs and distinct outputs");
    }
    if (v.output_i < 0 || v.output_i >= d.m || v.output_j < 0 || v.output_j >= d.m) {
      throw InvalidArgument("visibility record output mode out of range");
    }
  }
}

inline double predicted_visibility(const PhaseEquation& eq, std::span<const double> theta) {
  double phi = 0.0;
  for (const PhaseTerm& t : eq.terms) phi += t.coef * theta[static_cast<std::size_t>(t.unknown)];
  return -2.0 * eq.x * eq.y * std::cos(phi) / (eq.x * eq.x + eq.y * eq.y);
}

// Levenberg-Marquardt on the visibility residuals. Each equation touches at
// most four phases, so the normal equations are accumulated directly.
inline int refine_phases(const std::vector<PhaseEquation>& eqs, const std::vector<double>& measured,
                         std::vector<double>& theta, int max_iterations) {
  const Eigen::Index p = static_cast<Eigen::Index>(theta.size());
  if (p == 0 || eqs.empty()) return 0;
  const auto cost_of = [&](const std::vector<double>& th) {
    double c = 0.0;
    for (std::size_t e = 0; e < eqs.size(); ++e) {
      const double r = predicted_visibility(eqs[e], th) - measured[e];
      c += r * r;
    }
    return c;
  };
  double lambda = 1e-3;
  double cost = cost_of(theta);
  int it = 0;
  for (; it < max_iterations; ++it) {
    Eigen::MatrixXd jtj = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd jtr = Eigen::VectorXd::Zero(p);
    for (std::size_t e = 0; e < eqs.size(); ++e) {
      const PhaseEquation& eq = eqs[e];
      double phi = 0.0;
      for (const PhaseTerm& t : eq.terms) phi += t.coef * theta[static_cast<std::size_t>(t.unknown)];
      const double scale = 2.0 * eq.x * eq.y / (eq.x * eq.x + eq.y * eq.y);
      const double r = -scale * std::cos(phi) - measured[e];
      const double dphi = scale * std::sin(phi);
      for (const PhaseTerm& s : eq.terms) {
        jtr(s.unknown) += dphi * s.coef * r;
        for (const PhaseTerm& t : eq.terms) jtj(s.unknown, t.unknown) += dphi * dphi * s.coef * t.coef;
      }
    }
    if (jtr.cwiseAbs().maxCoeff() < 1e-15) break;
    bool improved = false;
    while (!improved && lambda < 1e12) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += lambda * (jtj.diagonal().array() + 1e-12);
      const Eigen::VectorXd step = lhs.ldlt().solve(-jtr);
      std::vector<double> trial = theta;
      for (Eigen::Index k = 0; k < p; ++k) trial[static_cast<std::size_t>(k)] += step(k);
      const double trial_cost = cost_of(trial);
      if (trial_cost <= cost) {
        const bool converged = step.cwiseAbs().maxCoeff() < 1e-13 || cost - trial_cost <= 1e-30;
        theta = std::move(trial);
        cost = trial_cost;
        lambda = std::max(lambda * 0.1, 1e-12);
        improved = true;
        if (converged) return it + 1;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) break;
  }
  return it;
}

}  // namespace detail

/// Rebuilds the probed n x m block from moduli and HOM visibilities.
///
/// The phases of row 0 and column 0 are fixed to zero. Every other phase gets
/// its magnitude from a visibility that involves it alone (cos phi = cos
/// theta); the signs come from visibilities coupling two unknown phases,
/// propagated best-first over the most decisive pairs. A Levenberg-Marquardt
/// pass over all visibilities then refines the phases. The overall
/// conjugation (theta -> -theta) is invisible to HOM data; the first
/// resolvable phase is taken positive.
inline Reconstruction reconstruct_matrix(const CharacterizationDataset& d, const ReconstructOptions& opt = {}) {
  detail::validate_dataset(d);
  const int n = static_cast<int>(d.probes.size());
  const int m = d.m;
  const RealMatrix& amp = d.amplitudes;

  std::vector<int> row_of_port;
  for (int r = 0; r < n; ++r) {
    const int p = d.probes[static_cast<std::size_t>(r)];
    if (p < 0) throw InvalidArgument("probe port must be non-negative");
    if (static_cast<int>(row_of_port.size()) <= p) row_of_port.resize(static_cast<std::size_t>(p) + 1, -1);
    row_of_port[static_cast<std::size_t>(p)] = r;
  }
  const auto row_of = [&](int port) {
    if (port < 0 || port >= static_cast<int>(row_of_port.size()) || row_of_port[static_cast<std::size_t>(port)] < 0) {
      throw InvalidArgument("visibility record uses port " + std::to_string(port + 1) + ", which is not a probe");
    }
    return row_of_port[static_cast<std::size_t>(port)];
  };

  for (int j = 0; j < m; ++j) {
    if (amp(0, j) <= opt.modulus_floor) {
      throw UnderdeterminedError("output mode " + std::to_string(j + 1) + " has no amplitude from reference port " +
                                 std::to_string(d.probes[0] + 1) + "; its phase reference is undefined");
    }
  }
  for (int r = 1; r < n; ++r) {
    if (amp(r, 0) <= opt.modulus_floor) {
      throw UnderdeterminedError("port " + std::to_string(d.probes[static_cast<std::size_t>(r)] + 1) +
                                 " has no amplitude into output mode 1; its phase reference is undefined");
    }
  }

  // Unknown phases: rows >= 1, columns >= 1, non-zero modulus.
  std::vector<int> unknown_of(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), -1);
  std::vector<std::pair<int, int>> cell_of;
  for (int r = 1; r < n; ++r) {
    for (int j = 1; j < m; ++j) {
      if (amp(r, j) > opt.modulus_floor) {
        unknown_of[static_cast<std::size_t>(r * m + j)] = static_cast<int>(cell_of.size());
        cell_of.emplace_back(r, j);
      }
    }
  }
  const std::size_t unknowns = cell_of.size();

  std::vector<detail::PhaseEquation> eqs;
  std::vector<double> measured;
  for (std::size_t k = 0; k < d.visibilities.size(); ++k) {
    const VisibilityRecord& v = d.visibilities[k];
    const int a = row_of(v.input_k), b = row_of(v.input_l), i = v.output_i, j = v.output_j;
    detail::PhaseEquation eq;
    eq.record = k;
    eq.x = amp(a, i) * amp(b, j);
    eq.y = amp(b, i) * amp(a, j);
    if (!(eq.x * eq.y > 0.0)) continue;
    for (const auto& [r, c, s] : {std::tuple{a, i, 1}, std::tuple{b, j, 1}, std::tuple{b, i, -1}, std::tuple{a, j, -1}}) {
      const int id = unknown_of[static_cast<std::size_t>(r * m + c)];
      if (id >= 0) eq.terms.push_back({id, s});
    }
    eq.cosine = std::clamp(-v.value * (eq.x * eq.x + eq.y * eq.y) / (2.0 * eq.x * eq.y), -1.0, 1.0);
    eqs.push_back(std::move(eq));
    measured.push_back(v.value);
  }

  // Magnitudes from single-unknown equations.
  std::vector<double> magnitude(unknowns, 0.0);
  std::vector<int> hits(unknowns, 0);
  for (const auto& eq : eqs) {
    if (eq.terms.size() != 1) continue;
    magnitude[static_cast<std::size_t>(eq.terms[0].unknown)] += std::acos(eq.cosine);
    ++hits[static_cast<std::size_t>(eq.terms[0].unknown)];
  }
  for (std::size_t u = 0; u < unknowns; ++u) {
    if (hits[u] == 0) {
      const auto [r, j] = cell_of[u];
      throw UnderdeterminedError("no visibility fixes the phase of output mode " + std::to_string(j + 1) +
                                 " for port " + std::to_string(d.probes[static_cast<std::size_t>(r)] + 1));
    }
    magnitude[u] /= hits[u];
  }

  // Sign propagation over two-unknown equations, strongest links first.
  struct Link {
    int other;
    int relative;  // +1 same sign, -1 opposite
    double weight;
  };
  std::vector<std::vector<Link>> links(unknowns);
  for (const auto& eq : eqs) {
    if (eq.terms.size() != 2) continue;
    const int u = eq.terms[0].unknown, v = eq.terms[1].unknown;
    const double tu = eq.terms[0].coef * magnitude[static_cast<std::size_t>(u)];
    const double tv = eq.terms[1].coef * magnitude[static_cast<std::size_t>(v)];
    const double weight = std::sin(magnitude[static_cast<std::size_t>(u)]) * std::sin(magnitude[static_cast<std::size_t>(v)]);
    if (!(weight > 1e-9)) continue;
    const int rel = std::abs(std::cos(tu + tv) - eq.cosine) <= std::abs(std::cos(tu - tv) - eq.cosine) ? 1 : -1;
    links[static_cast<std::size_t>(u)].push_back({v, rel, weight});
    links[static_cast<std::size_t>(v)].push_back({u, rel, weight});
  }
  std::vector<int> sign(unknowns, 0);
  int components = 0;
  std::size_t first_unlinked = unknowns;
  for (std::size_t seed = 0; seed < unknowns; ++seed) {
    if (sign[seed] != 0) continue;
    if (std::sin(magnitude[seed]) <= 1e-6) {
      sign[seed] = 1;  // theta is 0 or pi; the sign is immaterial
      continue;
    }
    if (++components > 1 && first_unlinked == unknowns) first_unlinked = seed;
    sign[seed] = 1;
    using Item = std::tuple<double, int, int>;  // weight, node, sign
    std::priority_queue<Item> frontier;
    for (const Link& l : links[seed]) frontier.emplace(l.weight, l.other, l.relative);
    while (!frontier.empty()) {
      const auto [w, node, s] = frontier.top();
      frontier.pop();
      if (sign[static_cast<std::size_t>(node)] != 0) continue;
      sign[static_cast<std::size_t>(node)] = s;
      for (const Link& l : links[static_cast<std::size_t>(node)]) {
        if (sign[static_cast<std::size_t>(l.other)] == 0) frontier.emplace(l.weight, l.other, s * l.relative);
      }
    }
  }
  if (components > 1) {
    const auto [r, j] = cell_of[first_unlinked];
    throw UnderdeterminedError("phase signs split into " + std::to_string(components) +
                               " groups not linked by any interference; first unlinked element is output mode " +
                               std::to_string(j + 1) + " for port " +
                               std::to_string(d.probes[static_cast<std::size_t>(r)] + 1));
  }

  std::vector<double> theta(unknowns);
  for (std::size_t u = 0; u < unknowns; ++u) theta[u] = sign[u] * magnitude[u];

  Reconstruction out;
  out.iterations = detail::refine_phases(eqs, measured, theta, opt.max_iterations);

  out.matrix = amp.cast<Complex>();
  for (std::size_t u = 0; u < unknowns; ++u) {
    const auto [r, j] = cell_of[u];
    out.matrix(r, j) = std::polar(amp(r, j), theta[u]);
  }

  double sum2 = 0.0;
  for (const VisibilityRecord& v : d.visibilities) {
    const int a = row_of(v.input_k), b = row_of(v.input_l);
    const std::optional<double> pred = hom_visibility(out.matrix(a, v.output_i) * out.matrix(b, v.output_j),
                                                      out.matrix(b, v.output_i) * out.matrix(a, v.output_j));
    const double p = pred.value_or(v.value);
    out.residuals.push_back({v, p, p - v.value});
    out.worst_residual = std::max(out.worst_residual, std::abs(p - v.value));
    sum2 += (p - v.value) * (p - v.value);
  }
  if (!out.residuals.empty()) out.rms_residual = std::sqrt(sum2 / static_cast<double>(out.residuals.size()));
  if (out.worst_residual > opt.residual_tolerance) {
    throw NumericError("reconstructed phases are inconsistent with the visibilities (worst residual " +
                       std::to_string(out.worst_residual) + ")");
  }
  return out;
}

namespace detail {

// min over diagonal phases of || D_in a D_out - b ||_F. Initial phases follow
// a maximum-weight spanning tree of the bipartite row/column graph, then
// row and column phases are re-aligned alternately until the norm settles.
inline double phase_orbit_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  std::vector<double> alpha(static_cast<std::size_t>(rows), 0.0), beta(static_cast<std::size_t>(cols), 0.0);
  std::vector<char> row_done(static_cast<std::size_t>(rows), 0), col_done(static_cast<std::size_t>(cols), 0);
  const auto overlap = [&](Eigen::Index r, Eigen::Index c) { return std::abs(a(r, c)) * std::abs(b(r, c)); };
  const auto rel_phase = [&](Eigen::Index r, Eigen::Index c) { return std::arg(b(r, c) * std::conj(a(r, c))); };
  using Item = std::tuple<double, Eigen::Index, Eigen::Index, bool>;  // weight, row, col, row-known
  for (Eigen::Index start = 0; start < rows; ++start) {
    if (row_done[static_cast<std::size_t>(start)]) continue;
    row_done[static_cast<std::size_t>(start)] = 1;
    std::priority_queue<Item> q;
    for (Eigen::Index c = 0; c < cols; ++c) q.emplace(overlap(start, c), start, c, true);
    while (!q.empty()) {
      const auto [w, r, c, from_row] = q.top();
      q.pop();
      if (w <= 0.0) break;
      if (from_row) {
        if (col_done[static_cast<std::size_t>(c)]) continue;
        col_done[static_cast<std::size_t>(c)] = 1;
        beta[static_cast<std::size_t>(c)] = rel_phase(r, c) - alpha[static_cast<std::size_t>(r)];
        for (Eigen::Index rr = 0; rr < rows; ++rr) {
          if (!row_done[static_cast<std::size_t>(rr)]) q.emplace(overlap(rr, c), rr, c, false);
        }
      } else {
        if (row_done[static_cast<std::size_t>(r)]) continue;
        row_done[static_cast<std::size_t>(r)] = 1;
        alpha[static_cast<std::size_t>(r)] = rel_phase(r, c) - beta[static_cast<std::size_t>(c)];
        for (Eigen::Index cc = 0; cc < cols; ++cc) {
          if (!col_done[static_cast<std::size_t>(cc)]) q.emplace(overlap(r, cc), r, cc, true);
        }
      }
    }
  }
  const auto residual = [&] {
    double s = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        s += std::norm(std::polar(1.0, alpha[static_cast<std::size_t>(r)] + beta[static_cast<std::size_t>(c)]) * a(r, c) -
                       b(r, c));
      }
    }
    return s;
  };
  double best = residual();
  for (int pass = 0; pass < 500; ++pass) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      Complex acc(0.0, 0.0);
      for (Eigen::Index c = 0; c < cols; ++c) acc += b(r, c) * std::conj(std::polar(1.0, beta[static_cast<std::size_t>(c)]) * a(r, c));
      if (std::abs(acc) > 0.0) alpha[static_cast<std::size_t>(r)] = std::arg(acc);
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      Complex acc(0.0, 0.0);
      for (Eigen::Index r = 0; r < rows; ++r) acc += b(r, c) * std::conj(std::polar(1.0, alpha[static_cast<std::size_t>(r)]) * a(r, c));
      if (std::abs(acc) > 0.0) beta[static_cast<std::size_t>(c)] = std::arg(acc);
    }
    const double next = residual();
    const bool settled = best - next <= 1e-15 * (1.0 + best);
    best = std::min(best, next);
    if (settled) break;
  }
  return std::sqrt(std::max(0.0, best));
}

}  // namespace detail

/// Distance between two n x m blocks modulo the unobservable input/output
/// phases: min over diagonal unitaries D_in, D_out of ||D_in A D_out - B||_F.
/// Complex conjugation of A is included in the minimization, since it leaves
/// every Fock-state transition probability and HOM visibility unchanged.
inline double gauge_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("gauge_distance needs equal shapes, got " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  if (a.size() == 0) return 0.0;
  return std::min(detail::phase_orbit_distance(a, b), detail::phase_orbit_distance(a.conjugate(), b));
}

/// The probed block of a full transfer matrix in reconstruction layout:
/// row r, column j holds U(j, probes[r]).
inline ComplexMatrix probe_block(const ComplexMatrix& u, std::span<const int> probes) {
  ComplexMatrix block(static_cast<Eigen::Index>(probes.size()), u.rows());
  for (std::size_t r = 0; r < probes.size(); ++r) {
    if (probes[r] < 0 || probes[r] >= u.cols()) throw InvalidArgument("probe port out of range");
    block.row(static_cast<Eigen::Index>(r)) = u.col(probes[r]).transpose();
  }
  return block;
}

}  // namespace bosonkit
