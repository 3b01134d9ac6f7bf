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
// bosonkit command-line front end.
//
// Exit codes: 0 success, 2 usage error, 3 data/format/I-O error,
// 4 numeric or validation failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bosonkit/bosonkit.hpp"

namespace {

using namespace bosonkit;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ports_label(const std::vector<int>& ports) {
  std::string s;
  for (std::size_t i = 0; i < ports.size(); ++i) s += (i ? "," : "") + std::to_string(ports[i] + 1);
  return s;
}

std::vector<int> parse_ports(const std::string& text, const char* flag) {
  try {
    return io::parse_port_list(text);
  } catch (const Error& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

// Loads a transfer matrix and rejects files that are not unitary.
TransferMatrix load_unitary(const std::string& path) {
  TransferMatrix t = io::load_transfer_matrix(path);
  if (!(t.unitarity_defect <= kUnitarityTolerance)) {
    throw FormatError(path + ": matrix is not unitary (defect " + io::format_double(t.unitarity_defect) + ")");
  }
  return t;
}

ModeOccupation input_for(const std::vector<int>& ports, int m, const char* flag) {
  for (int p : ports) {
    if (p >= m) throw UsageError(std::string(flag) + ": port " + std::to_string(p + 1) + " exceeds " + std::to_string(m) + " modes");
  }
  ModeOccupation input(ports);
  if (!input.collision_free()) throw UsageError(std::string(flag) + ": ports must be distinct");
  return input;
}

json optional_number(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

// ---------------------------------------------------------------- gen-unitary

struct GenUnitaryArgs {
  std::string mode;
  int m = 0;
  GridDeviceSpec grid;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen_unitary(const GenUnitaryArgs& a, bool m_given) {
  TransferMatrix t;
  if (a.mode == "haar") {
    if (!m_given) throw UsageError("--mode haar requires --m");
    if (a.m < 1) throw UsageError("--m must be positive");
    t = haar_unitary(a.m, a.seed);
  } else {
    GridDeviceSpec spec = a.grid;
    spec.seed = a.seed;
    if (m_given && a.m != spec.modes()) {
      throw UsageError("--m " + std::to_string(a.m) + " does not match grid " + std::to_string(spec.rows) + "x" +
                       std::to_string(spec.cols));
    }
    try {
      spec.validate();
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    t = device_unitary(spec);
  }
  io::save_matrix(a.out, t.matrix);
  std::cout << "modes " << t.modes() << "\n";
  std::cout << "unitarity_defect " << io::format_double(t.unitarity_defect) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------------ run

struct RunArgs {
  std::string unitary;
  std::string input;
  int n = 0;
  std::size_t samples = 0;
  std::string sampler = "boson";
  std::string boson_method = "direct";
  std::uint64_t seed = 0;
  bool collision_free_only = false;
  std::string prefix = "run";
};

int cmd_run(const RunArgs& a, bool n_given) {
  const std::vector<int> ports = parse_ports(a.input, "--input");
  if (n_given && a.n != static_cast<int>(ports.size())) {
    throw UsageError("--n " + std::to_string(a.n) + " does not match the " + std::to_string(ports.size()) + " input ports");
  }
  const TransferMatrix t = load_unitary(a.unitary);
  const int m = t.modes();
  const ModeOccupation input = input_for(ports, m, "--input");
  const int n = input.photons();
  const Support support = a.collision_free_only ? Support::collision_free : Support::full;

  OutputDistribution exact;
  double cf_mass = 0.0;
  if (a.sampler == "boson") {
    exact = boson_distribution(t.matrix, input, support, true);
    cf_mass = a.collision_free_only ? exact.support_mass : boson_distribution(t.matrix, input, Support::collision_free, false).support_mass;
  } else if (a.sampler == "distinguishable") {
    exact = distinguishable_distribution(t.matrix, input, support, true);
    cf_mass = a.collision_free_only ? exact.support_mass
                                    : distinguishable_distribution(t.matrix, input, Support::collision_free, false).support_mass;
  } else {
    exact = uniform_distribution(m, n, support);
    cf_mass = static_cast<double>(count_collision_free(m, n)) / static_cast<double>(count_full_space(m, n));
  }

  // Raw events are always drawn over the full outcome space and then
  // post-selected, mirroring an experiment that discards collision events.
  EventStream raw;
  if (a.sampler == "boson" && a.boson_method == "direct") {
    raw = clifford_clifford_sample(t.matrix, input, a.samples, a.seed);
  } else {
    const OutputDistribution full = support == Support::full ? exact
                                    : a.sampler == "boson"   ? boson_distribution(t.matrix, input, Support::full, true)
                                    : a.sampler == "distinguishable"
                                        ? distinguishable_distribution(t.matrix, input, Support::full, true)
                                        : uniform_distribution(m, n, Support::full);
    raw = sample_from_distribution(full, a.samples, a.seed);
  }
  FilterResult kept{raw, raw.size(), raw.size()};
  if (a.collision_free_only) kept = filter_collision_free(raw);

  std::optional<double> f, d;
  if (!kept.stream.empty()) {
    const OutputDistribution emp = empirical_distribution(kept.stream, support);
    f = fidelity(emp, exact);
    d = total_variation_distance(emp, exact);
  }

  io::write_text_file(a.prefix + "_distribution.csv", io::distribution_to_csv(exact));
  io::save_events(a.prefix + "_events.csv", kept.stream);
  json summary;
  summary["m"] = m;
  summary["n"] = n;
  summary["input"] = ports_label(ports);
  summary["sampler"] = to_string(raw.provenance);
  summary["support"] = to_string(support);
  summary["seed"] = a.seed;
  summary["samples"] = a.samples;
  summary["retained_events"] = kept.kept;
  summary["retention_fraction"] = kept.retention();
  summary["collision_free_mass"] = cf_mass;
  summary["fidelity"] = optional_number(f);
  summary["total_variation_distance"] = optional_number(d);
  summary["unitarity_defect"] = t.unitarity_defect;
  io::write_text_file(a.prefix + "_summary.json", summary.dump(2) + "\n");

  std::cout << "collision_free_mass " << io::format_double(cf_mass) << "\n";
  std::cout << "retained_events " << kept.kept << " of " << kept.total << "\n";
  if (f) {
    std::cout << "fidelity " << io::format_double(*f) << "\n";
    std::cout << "total_variation_distance " << io::format_double(*d) << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------- validate

struct ValidateArgs {
  std::string events;
  std::string unitary;
  std::string input;
  std::string test = "both";
  double a1 = 0.9;
  double a2 = 1.5;
  std::string prefix = "validate";
};

int cmd_validate(const ValidateArgs& a) {
  try {
    check_likelihood_parameters(a.a1, a.a2);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const std::vector<int> ports = parse_ports(a.input, "--input");
  const TransferMatrix t = load_unitary(a.unitary);
  const EventStream events = io::load_events(a.events);
  if (events.m != t.modes()) {
    throw FormatError("events cover " + std::to_string(events.m) + " modes but the unitary has " + std::to_string(t.modes()));
  }
  const ModeOccupation input = input_for(ports, t.modes(), "--input");
  if (events.n != input.photons()) {
    throw FormatError("events carry " + std::to_string(events.n) + " photons but --input lists " +
                      std::to_string(input.photons()));
  }

  json summary;
  summary["events"] = events.size();
  if (a.test == "rne" || a.test == "both") {
    const CounterTrace rne = rne_counter(events, t.matrix, input);
    io::save_trace(a.prefix + "_rne.csv", rne);
    summary["rne_final_counter"] = rne.final_value();
    std::cout << "rne_final_counter " << rne.final_value() << "\n";
  }
  if (a.test == "lrt" || a.test == "both") {
    bool all_cf = true;
    for (const ModeOccupation& e : events.events) all_cf = all_cf && e.collision_free();
    const Support support = all_cf ? Support::collision_free : Support::full;
    const OutputDistribution p = boson_distribution(t.matrix, input, support, true);
    const OutputDistribution q = distinguishable_distribution(t.matrix, input, support, true);
    const CounterTrace lrt = likelihood_ratio_counter(events, p, q, a.a1, a.a2);
    io::save_trace(a.prefix + "_lrt.csv", lrt);
    summary["lrt_final_counter"] = lrt.final_value();
    summary["lrt_support"] = to_string(support);
    summary["a1"] = a.a1;
    summary["a2"] = a.a2;
    std::cout << "lrt_final_counter " << lrt.final_value() << "\n";
    if (lrt.infinite_ratio_events) {
      std::cerr << "warning: " << lrt.infinite_ratio_events
                << " events have zero distinguishable probability; scored as +2\n";
    }
  }
  io::write_text_file(a.prefix + "_summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

// --------------------------------------------------------------- characterize

struct CharacterizeArgs {
  std::string unitary;
  std::string dataset;
  std::string probes;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::string strategy = "all";
  std::string out;
  std::string dataset_out;
  double tolerance = 0.1;
};

int cmd_characterize(const CharacterizeArgs& a) {
  if (a.unitary.empty() && a.dataset.empty()) throw UsageError("characterize needs --unitary or --dataset");
  std::optional<TransferMatrix> truth;
  if (!a.unitary.empty()) truth = load_unitary(a.unitary);

  CharacterizationDataset data;
  if (!a.dataset.empty()) {
    data = io::load_dataset(a.dataset);
    if (!a.probes.empty()) data.probes = parse_ports(a.probes, "--probes");
    if (data.probes.empty()) throw UsageError("dataset has no 'probes' field; pass --probes");
  } else {
    if (a.probes.empty()) throw UsageError("simulation mode requires --probes");
    if (a.noise_sigma < 0.0) throw UsageError("--noise-sigma must be non-negative");
    const std::vector<int> probes = parse_ports(a.probes, "--probes");
    input_for(probes, truth->modes(), "--probes");
    DatasetOptions opt;
    opt.pairs = a.strategy == "reference" ? PairSelection::reference : PairSelection::all;
    opt.visibility_sigma = a.noise_sigma;
    opt.seed = a.seed;
    data = simulate_dataset(truth->matrix, probes, opt);
    if (!a.dataset_out.empty()) io::save_dataset(a.dataset_out, data);
  }
  if (truth && data.m != truth->modes()) throw FormatError("dataset and unitary disagree on the mode count");

  ReconstructOptions ropt;
  ropt.residual_tolerance = a.tolerance;
  const Reconstruction rec = reconstruct_matrix(data, ropt);
  io::save_matrix(a.out, rec.matrix);
  io::write_text_file(a.out + ".residuals.csv", io::residuals_to_csv(rec));
  std::cout << "reconstructed " << rec.matrix.rows() << "x" << rec.matrix.cols() << "\n";
  std::cout << "visibilities " << data.visibilities.size() << "\n";
  std::cout << "worst_residual " << io::format_double(rec.worst_residual) << "\n";
  if (truth) {
    const double dist = gauge_distance(rec.matrix, probe_block(truth->matrix, data.probes));
    std::cout << "gauge_distance " << io::format_double(dist) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bosonkit: boson sampling simulation and validation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker thread cap (0 = all cores)");

  GenUnitaryArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-unitary", "Write a Haar or grid-device transfer matrix");
  gen_cmd->add_option("--mode", gen.mode, "haar or grid")->required()->check(CLI::IsMember({"haar", "grid"}));
  auto* gen_m = gen_cmd->add_option("--m", gen.m, "Number of modes");
  gen_cmd->add_option("--grid-rows", gen.grid.rows, "Grid rows")->capture_default_str();
  gen_cmd->add_option("--grid-cols", gen.grid.cols, "Grid columns")->capture_default_str();
  gen_cmd->add_option("--segments", gen.grid.segments, "Randomized segments")->capture_default_str();
  gen_cmd->add_option("--coupling-min", gen.grid.coupling.lo, "Coupling lower bound (rad per segment)")->capture_default_str();
  gen_cmd->add_option("--coupling-max", gen.grid.coupling.hi, "Coupling upper bound (rad per segment)")->capture_default_str();
  gen_cmd->add_option("--phase-min", gen.grid.phase.lo, "Detuning lower bound (rad)")->capture_default_str();
  gen_cmd->add_option("--phase-max", gen.grid.phase.hi, "Detuning upper bound (rad)")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output matrix JSON")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Exact distribution, samples and summary metrics");
  run_cmd->add_option("--unitary", run.unitary, "Transfer matrix JSON")->required();
  run_cmd->add_option("--input", run.input, "Input ports, 1-indexed, e.g. 1,3,4")->required();
  auto* run_n = run_cmd->add_option("--n", run.n, "Photon number (must match --input)");
  run_cmd->add_option("--samples", run.samples, "Number of raw events")->capture_default_str();
  run_cmd->add_option("--sampler", run.sampler, "boson, distinguishable or uniform")
      ->check(CLI::IsMember({"boson", "distinguishable", "uniform"}))
      ->capture_default_str();
  run_cmd->add_option("--boson-method", run.boson_method, "direct (Clifford-Clifford) or exact (inversion)")
      ->check(CLI::IsMember({"direct", "exact"}))
      ->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Seed")->capture_default_str();
  run_cmd->add_flag("--collision-free-only", run.collision_free_only, "Post-select collision-free events");
  run_cmd->add_option("--out-prefix", run.prefix, "Prefix of the output files")->capture_default_str();

  ValidateArgs val;
  auto* val_cmd = app.add_subcommand("validate", "Row-norm and likelihood-ratio counters on stored events");
  val_cmd->add_option("--events", val.events, "Event CSV (sidecar <file>.json required)")->required();
  val_cmd->add_option("--unitary", val.unitary, "Transfer matrix JSON")->required();
  val_cmd->add_option("--input", val.input, "Input ports, 1-indexed")->required();
  val_cmd->add_option("--test", val.test, "rne, lrt or both")->check(CLI::IsMember({"rne", "lrt", "both"}))->capture_default_str();
  val_cmd->add_option("--a1", val.a1, "Likelihood-ratio inner threshold, < 1")->capture_default_str();
  val_cmd->add_option("--a2", val.a2, "Likelihood-ratio outer threshold, > 1")->capture_default_str();
  val_cmd->add_option("--out-prefix", val.prefix, "Prefix of the trace files")->capture_default_str();

  CharacterizeArgs chr;
  auto* chr_cmd = app.add_subcommand("characterize", "Simulate HOM characterization and reconstruct the probed block");
  chr_cmd->add_option("--unitary", chr.unitary, "Ground-truth transfer matrix (simulate mode)");
  chr_cmd->add_option("--dataset", chr.dataset, "Characterization dataset JSON (reconstruct mode)");
  chr_cmd->add_option("--probes", chr.probes, "Probe ports, 1-indexed");
  chr_cmd->add_option("--noise-sigma", chr.noise_sigma, "Gaussian noise on visibilities")->capture_default_str();
  chr_cmd->add_option("--seed", chr.seed, "Seed")->capture_default_str();
  chr_cmd->add_option("--strategy", chr.strategy, "Pair selection: all or reference")
      ->check(CLI::IsMember({"all", "reference"}))
      ->capture_default_str();
  chr_cmd->add_option("--tolerance", chr.tolerance, "Largest tolerated visibility residual")->capture_default_str();
  chr_cmd->add_option("--dataset-out", chr.dataset_out, "Also write the simulated dataset");
  chr_cmd->add_option("--out", chr.out, "Reconstructed matrix JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  set_thread_limit(threads);

  try {
    if (*gen_cmd) return cmd_gen_unitary(gen, gen_m->count() > 0);
    if (*run_cmd) return cmd_run(run, run_n->count() > 0);
    if (*val_cmd) return cmd_validate(val);
    if (*chr_cmd) return cmd_characterize(chr);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
