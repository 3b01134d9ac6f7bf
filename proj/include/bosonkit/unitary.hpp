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
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bosonkit/error.hpp"
#include "bosonkit/permanent.hpp"
#include "bosonkit/random.hpp"

namespace bosonkit {

enum class MatrixSource { haar, grid_device, file };

inline const char* to_string(MatrixSource s) {
  switch (s) {
    case MatrixSource::haar: return "haar";
    case MatrixSource::grid_device: return "grid-device";
    case MatrixSource::file: return "file";
  }
  return "?";
}

/// Largest entry of |U^dagger U - I|.
inline double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const ComplexMatrix g = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

/// Scattering matrix of an m-mode interferometer, indexed [output, input].
struct TransferMatrix {
  ComplexMatrix matrix;
  double unitarity_defect = 0.0;
  MatrixSource source = MatrixSource::file;

  int modes() const noexcept { return static_cast<int>(matrix.rows()); }

  static TransferMatrix from_matrix(ComplexMatrix u, MatrixSource source) {
    TransferMatrix t;
    t.unitarity_defect = bosonkit::unitarity_defect(u);
    t.matrix = std::move(u);
    t.source = source;
    return t;
  }
};

/// Haar-random m x m unitary: complex Ginibre matrix, Householder QR, then the
/// diagonal of R rotated onto the positive reals. Entries of the Ginibre
/// matrix are drawn row-major from CounterRng(seed), real part first.
inline TransferMatrix haar_unitary(int m, std::uint64_t seed) {
  if (m < 1) throw InvalidArgument("haar_unitary requires m >= 1");
  CounterRng rng(seed);
  ComplexMatrix z(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = Complex(re, im) * std::numbers::sqrt2 * 0.5;
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < m; ++j) {
    const double mag = std::abs(r(j, j));
    const Complex phase = mag > 0.0 ? r(j, j) / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return TransferMatrix::from_matrix(std::move(q), MatrixSource::haar);
}

/// Closed interval [lo, hi] a parameter is drawn from uniformly.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double draw(CounterRng& rng) const { return lo == hi ? lo : rng.uniform(lo, hi); }
};

/// Randomized coupled-waveguide device: a rows x cols grid of waveguides
/// with nearest-neighbour couplings, propagated through \c segments sections
/// whose couplings and on-site detunings are redrawn per section.
struct GridDeviceSpec {
  int rows = 7;
  int cols = 5;
  int segments = 20;
  Interval coupling{0.5, 2.0};
  Interval phase{0.0, 2.0 * std::numbers::pi};
  std::uint64_t seed = 0;

  int modes() const noexcept { return rows * cols; }

  void validate() const {
    if (rows < 1 || cols < 1) throw InvalidArgument("grid dimensions must be positive");
    if (segments < 1) throw InvalidArgument("device needs at least one segment");
    if (!(coupling.lo <= coupling.hi) || !(phase.lo <= phase.hi)) {
      throw InvalidArgument("parameter interval has lo > hi");
    }
    if (!std::isfinite(coupling.lo) || !std::isfinite(coupling.hi) || !std::isfinite(phase.lo) ||
        !std::isfinite(phase.hi)) {
      throw InvalidArgument("parameter intervals must be finite");
    }
  }
};

/// Site index of cell (r, c) is r * cols + c.
struct GridEdge {
  int a;
  int b;
};

/// 4-neighbour edges: all horizontal edges row by row, then all vertical
/// edges. rows*(cols-1) + cols*(rows-1) in total.
inline std::vector<GridEdge> grid_edges(int rows, int cols) {
  std::vector<GridEdge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) edges.push_back({r * cols + c, r * cols + c + 1});
  }
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c < cols; ++c) edges.push_back({r * cols + c, (r + 1) * cols + c});
  }
  return edges;
}

/// Hermitian coupling matrix of one segment. Draw order from
/// CounterRng(hash64(seed, segment)): one coupling per edge in grid_edges
/// order, then one detuning per site.
inline ComplexMatrix grid_hamiltonian(const GridDeviceSpec& spec, int segment) {
  spec.validate();
  if (segment < 0 || segment >= spec.segments) {
    throw InvalidArgument("segment index " + std::to_string(segment) + " out of range");
  }
  const int m = spec.modes();
  CounterRng rng(hash64(spec.seed, static_cast<std::uint64_t>(segment)));
  ComplexMatrix h = ComplexMatrix::Zero(m, m);
  for (const GridEdge& e : grid_edges(spec.rows, spec.cols)) {
    const double c = spec.coupling.draw(rng);
    h(e.a, e.b) = c;
    h(e.b, e.a) = c;
  }
  for (int i = 0; i < m; ++i) h(i, i) = spec.phase.draw(rng);
  return h;
}

/// exp(-i H) for Hermitian H through its eigendecomposition.
inline ComplexMatrix hermitian_propagator(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  if (eig.info() != Eigen::Success) throw NumericError("eigendecomposition of segment Hamiltonian failed");
  const Eigen::VectorXcd phases =
      eig.eigenvalues().unaryExpr([](double lambda) { return std::exp(Complex(0.0, -lambda)); });
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// Device transfer matrix: segment 0 acts first, U = E_{L-1} ... E_1 E_0.
inline TransferMatrix device_unitary(const GridDeviceSpec& spec) {
  spec.validate();
  const int m = spec.modes();
  ComplexMatrix u = ComplexMatrix::Identity(m, m);
  for (int k = 0; k < spec.segments; ++k) u = hermitian_propagator(grid_hamiltonian(spec, k)) * u;
  TransferMatrix t = TransferMatrix::from_matrix(std::move(u), MatrixSource::grid_device);
  if (!(t.unitarity_defect <= 1e-8)) {
    throw NumericError("device propagator lost unitarity (defect " + std::to_string(t.unitarity_defect) + ")");
  }
  return t;
}

/// Element statistics of an ensemble of m x m transfer matrices.
struct HaarStats {
  int m = 0;
  std::size_t samples = 0;
  double mean_sq = 0.0;      ///< mean of |U_ij|^2
  double variance_sq = 0.0;  ///< variance of |U_ij|^2
  double ks_statistic = 0.0; ///< sup |F_emp - F| for m |U_ij|^2 against Exp(1)
};

/// Kolmogorov-Smirnov distance between the sorted sample and a CDF.
template <class Cdf>
double ks_statistic(std::span<const double> sorted, Cdf&& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov distance of sorted samples.
inline double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

/// Sorted m |U_ij|^2 over every entry of every ensemble member.
inline std::vector<double> scaled_element_intensities(std::span<const TransferMatrix> ensemble) {
  if (ensemble.empty()) throw InvalidArgument("ensemble is empty");
  const int m = ensemble.front().modes();
  std::vector<double> x;
  x.reserve(ensemble.size() * static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (const TransferMatrix& t : ensemble) {
    if (t.matrix.rows() != m || t.matrix.cols() != m) throw InvalidArgument("ensemble mixes matrix dimensions");
    for (Eigen::Index i = 0; i < t.matrix.size(); ++i) x.push_back(m * std::norm(t.matrix.data()[i]));
  }
  std::sort(x.begin(), x.end());
  return x;
}

/// Compares the ensemble's element law with the large-m Haar law, under which
/// m |U_ij|^2 is exponentially distributed with unit mean.
inline HaarStats haar_convergence_stats(std::span<const TransferMatrix> ensemble) {
  const std::vector<double> x = scaled_element_intensities(ensemble);
  HaarStats s;
  s.m = ensemble.front().modes();
  s.samples = x.size();
  double sum = 0.0, sum2 = 0.0;
  for (double v : x) {
    const double e = v / s.m;
    sum += e;
    sum2 += e * e;
  }
  const double n = static_cast<double>(x.size());
  s.mean_sq = sum / n;
  s.variance_sq = std::max(0.0, sum2 / n - s.mean_sq * s.mean_sq);
  s.ks_statistic = ks_statistic(x, [](double v) { return v <= 0.0 ? 0.0 : 1.0 - std::exp(-v); });
  return s;
}

}  // namespace bosonkit
