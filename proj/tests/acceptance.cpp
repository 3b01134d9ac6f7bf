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
// Acceptance checks. One line per criterion; exit status is nonzero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bosonkit/bosonkit.hpp"

using namespace bosonkit;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail, double seconds) {
  std::printf("[%s] %d %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, title, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

template <class Fn>
void criterion(int id, const char* title, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, title, ok, detail, s);
}

ComplexMatrix grid_device(int segments, std::uint64_t seed) {
  GridDeviceSpec spec;
  spec.segments = segments;
  spec.seed = seed;
  return device_unitary(spec).matrix;
}

ComplexMatrix beamsplitter() {
  const double s = std::sqrt(0.5);
  ComplexMatrix u(2, 2);
  u << s, Complex(0, s), Complex(0, s), s;
  return u;
}

}  // namespace

int main() {
  criterion(1, "counting identities", [](std::string& d) {
    const auto a = count_collision_free(35, 3), b = count_full_space(35, 3), c = hypercube_node_count(35, 3);
    d = fmt("collision-free %llu, full %llu, hypercube %llu", (unsigned long long)a, (unsigned long long)b,
            (unsigned long long)c);
    return a == 6545 && b == 7770 && c == 42875;
  });

  criterion(2, "permanent oracle equivalence", [](std::string& d) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
      const int n = 2 + k % 6;
      ComplexMatrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
      const Complex want = permanent_naive(a);
      worst = std::max(worst, std::abs(permanent(a) - want) / std::abs(want));
    }
    d = fmt("500 matrices, n in 2..7, worst relative error %.3g", worst);
    return worst <= 1e-10;
  });

  criterion(3, "probability conservation", [](std::string& d) {
    double worst = 0.0;
    int count = 0;
    for (int k = 0; k < 50; ++k) {
      const int m = 4 + k % 5;
      const int n = 2 + (k / 5) % 2;
      std::vector<int> modes;
      for (int p = 0; p < n; ++p) modes.push_back(p);
      const auto dist = boson_distribution(haar_unitary(m, 3000 + k).matrix, ModeOccupation(modes), Support::full, false);
      worst = std::max(worst, std::abs(dist.total() - 1.0));
      ++count;
    }
    d = fmt("%d Haar unitaries, m in 4..8, n in {2,3}, worst |sum - 1| %.3g", count, worst);
    return worst <= 1e-8;
  });

  criterion(4, "HOM suppression", [](std::string& d) {
    const ComplexMatrix u = beamsplitter();
    const double p11 = boson_distribution(u, {0, 1}, Support::full).probability({0, 1});
    const auto s = clifford_clifford_sample(u, {0, 1}, 10000, 4);
    const auto coincidences = std::count(s.events.begin(), s.events.end(), ModeOccupation{0, 1});
    d = fmt("P(1,1) = %.3g, coincidences in 10^4 draws = %ld", p11, static_cast<long>(coincidences));
    return p11 < 1e-12 && coincidences == 0;
  });

  criterion(5, "sampler correctness", [](std::string& d) {
    const ComplexMatrix u = haar_unitary(7, 5).matrix;
    const ModeOccupation input{0, 2, 3};
    const auto exact = boson_distribution(u, input, Support::full);
    const double direct =
        total_variation_distance(empirical_distribution(clifford_clifford_sample(u, input, 200000, 51), Support::full), exact);
    const double inversion =
        total_variation_distance(empirical_distribution(sample_from_distribution(exact, 200000, 52), Support::full), exact);
    d = fmt("m=7 n=3 N=2e5: TVD direct %.4f, inversion %.4f", direct, inversion);
    return direct < 0.02 && inversion < 0.02;
  });

  criterion(6, "validation discrimination", [](std::string& d) {
    const ModeOccupation input{0, 2, 3};
    int rne_boson = 0, rne_uniform = 0, lrt_boson = 0, lrt_dist = 0;
    const auto uniform = uniform_distribution(35, 3);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const ComplexMatrix u = haar_unitary(35, 6000 + seed).matrix;
      const auto p = boson_distribution(u, input);
      const auto q = distinguishable_distribution(u, input);
      EventStream bosons = filter_collision_free(clifford_clifford_sample(u, input, 1500, 6100 + seed)).stream;
      bosons.events.resize(1000);
      const auto uni = sample_from_distribution(uniform, 1000, 6200 + seed);
      const auto dis = sample_from_distribution(q, 1000, 6300 + seed);
      rne_boson += rne_counter(bosons, u, input).final_value() > 0;
      rne_uniform += rne_counter(uni, u, input).final_value() < 0;
      lrt_boson += likelihood_ratio_counter(bosons, p, q).final_value() > 0;
      lrt_dist += likelihood_ratio_counter(dis, p, q).final_value() < 0;
    }
    d = fmt("RNE boson>0 %d/10, uniform<0 %d/10; LRT boson>0 %d/10, distinguishable<0 %d/10", rne_boson, rne_uniform,
            lrt_boson, lrt_dist);
    return rne_boson >= 9 && rne_uniform >= 9 && lrt_boson >= 9 && lrt_dist >= 9;
  });

  criterion(7, "characterization round trip", [](std::string& d) {
    const ComplexMatrix u = grid_device(20, 7);
    const std::vector<int> probes{0, 2, 3};
    const ComplexMatrix truth = probe_block(u, probes);
    const auto clean = reconstruct_matrix(simulate_dataset(u, probes));
    const double noiseless = gauge_distance(clean.matrix, truth);
    std::vector<double> noisy;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      DatasetOptions opt;
      opt.visibility_sigma = 0.01;
      opt.seed = 7000 + trial;
      noisy.push_back(gauge_distance(reconstruct_matrix(simulate_dataset(u, probes, opt)).matrix, truth));
    }
    std::sort(noisy.begin(), noisy.end());
    const double median = 0.5 * (noisy[9] + noisy[10]);
    d = fmt("3x%d block, noiseless %.3g, sigma=0.01 median %.4f over 20 trials", static_cast<int>(clean.matrix.cols()),
            noiseless, median);
    return clean.matrix.rows() == 3 && clean.matrix.cols() == 35 && noiseless <= 1e-6 && median <= 0.05;
  });

  criterion(8, "synthetic full-scale metrics", [](std::string& d) {
    const ComplexMatrix u = grid_device(20, 42);
    const ModeOccupation input{0, 2, 3};
    const auto exact = boson_distribution(u, input);
    const auto kept = filter_collision_free(clifford_clifford_sample(u, input, 570312, 8));
    const auto emp = empirical_distribution(kept.stream);
    const double f = fidelity(emp, exact), tvd = total_variation_distance(emp, exact);
    d = fmt("570312 raw events, %zu collision-free (mass %.4f): F = %.5f (>= 0.995), D = %.5f (<= 0.03)", kept.kept,
            exact.support_mass, f, tvd);
    return f >= 0.995 && tvd <= 0.03;
  });

  criterion(9, "Haar convergence trend", [](std::string& d) {
    const int segments[3] = {1, 5, 20};
    double mean_ks[3] = {0, 0, 0};
    const int reps = 10, ensemble = 10;
    for (int s = 0; s < 3; ++s) {
      for (int r = 0; r < reps; ++r) {
        std::vector<TransferMatrix> members;
        for (int k = 0; k < ensemble; ++k) {
          GridDeviceSpec spec;
          spec.segments = segments[s];
          spec.seed = 9000 + static_cast<std::uint64_t>(r * ensemble + k);
          members.push_back(device_unitary(spec));
        }
        mean_ks[s] += haar_convergence_stats(members).ks_statistic / reps;
      }
    }
    d = fmt("mean KS over %d ensembles of %d: L=1 %.4f, L=5 %.4f, L=20 %.4f", reps, ensemble, mean_ks[0], mean_ks[1],
            mean_ks[2]);
    return mean_ks[0] >= mean_ks[1] && mean_ks[1] >= mean_ks[2];
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
