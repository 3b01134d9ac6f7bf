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
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bosonkit/io.hpp"

namespace fs = std::filesystem;
using namespace bosonkit;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bosonkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Result run(const std::string& args) const {
    const std::string err_file = path("stderr.txt");
    const std::string cmd = "cd '" + dir_.string() + "' && '" BOSONKIT_CLI_PATH "' " + args + " 2>'" + err_file + "'";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = io::read_text_file(err_file);
    return r;
  }

  nlohmann::json json_file(const std::string& name) const { return nlohmann::json::parse(io::read_text_file(path(name))); }

  static double value_after(const std::string& out, const std::string& key) {
    const auto at = out.find(key + " ");
    if (at == std::string::npos) return std::nan("");
    return std::stod(out.substr(at + key.size() + 1));
  }

  void make_grid(const std::string& name, std::uint64_t seed = 42) const {
    ASSERT_EQ(run("gen-unitary --mode grid --grid-rows 7 --grid-cols 5 --segments 20 --seed " + std::to_string(seed) +
                  " --out " + name)
                  .code,
              0);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenUnitaryGrid) {
  const Result r = run("gen-unitary --mode grid --grid-rows 7 --grid-cols 5 --segments 20 --seed 42 --out u.json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("modes 35"), std::string::npos);
  EXPECT_LE(value_after(r.out, "unitarity_defect"), 1e-10);
  const TransferMatrix t = io::load_transfer_matrix(path("u.json"));
  EXPECT_EQ(t.modes(), 35);
  EXPECT_LE(t.unitarity_defect, 1e-10);
}

TEST_F(Cli, GenUnitaryHaarSingleMode) {
  ASSERT_EQ(run("gen-unitary --mode haar --m 1 --seed 3 --out one.json").code, 0);
  const ComplexMatrix u = io::load_matrix(path("one.json"));
  ASSERT_EQ(u.rows(), 1);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-15);
}

TEST_F(Cli, GenUnitaryUsageErrors) {
  EXPECT_EQ(run("gen-unitary --mode haar --m 4").code, 2);
  EXPECT_EQ(run("gen-unitary --mode grid --m 30 --out u.json").code, 2);
  EXPECT_EQ(run("gen-unitary --mode haar --out u.json").code, 2);
  EXPECT_EQ(run("gen-unitary --mode sphere --m 3 --out u.json").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, RunWithoutSamplesWritesDistributionOnly) {
  make_grid("u.json");
  const Result r = run("run --unitary u.json --input 1,3,4 --samples 0 --collision-free-only");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::read_text_file(path("run_events.csv")), "");
  const std::string csv = io::read_text_file(path("run_distribution.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6546);
  const auto summary = json_file("run_summary.json");
  EXPECT_TRUE(summary["fidelity"].is_null());
  EXPECT_GT(summary["collision_free_mass"].get<double>(), 0.5);
}

TEST_F(Cli, RunUniformIsWithinBinomialBound) {
  make_grid("u.json");
  const Result r = run("run --unitary u.json --input 1,3,4 --sampler uniform --samples 200000 --seed 5 "
                       "--collision-free-only --out-prefix uni");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = json_file("uni_summary.json");
  const double kept = summary["retained_events"].get<double>();
  EXPECT_LT(summary["total_variation_distance"].get<double>(), 3.0 * std::sqrt(6545.0 / kept) / 2.0);
  EXPECT_EQ(summary["sampler"], "uniform");
}

TEST_F(Cli, RunIsByteReproducible) {
  make_grid("u.json");
  const std::string args = "run --unitary u.json --input 1,3,4 --samples 5000 --seed 9 --collision-free-only";
  ASSERT_EQ(run(args + " --out-prefix a").code, 0);
  ASSERT_EQ(run(args + " --out-prefix b --threads 1").code, 0);
  ASSERT_EQ(run("--threads 3 " + args + " --out-prefix c").code, 0);
  for (const std::string suffix : {"_distribution.csv", "_events.csv", "_events.csv.json", "_summary.json"}) {
    EXPECT_EQ(io::read_text_file(path("a" + suffix)), io::read_text_file(path("b" + suffix))) << suffix;
    EXPECT_EQ(io::read_text_file(path("a" + suffix)), io::read_text_file(path("c" + suffix))) << suffix;
  }
  make_grid("u2.json");
  EXPECT_EQ(io::read_text_file(path("u.json")), io::read_text_file(path("u2.json")));
}

TEST_F(Cli, RunErrors) {
  make_grid("u.json");
  EXPECT_EQ(run("run --unitary u.json --input 1,3,36").code, 2);
  EXPECT_EQ(run("run --unitary u.json --input 1,3,4 --n 2").code, 2);
  EXPECT_EQ(run("run --unitary missing.json --input 1,3,4").code, 3);
  io::write_text_file(path("bad.json"), "{\"m\": 2, \"re\": [[1, 1], [1, 1]], \"im\": [[0, 0], [0, 0]]}");
  EXPECT_EQ(run("run --unitary bad.json --input 1,2").code, 3);
  io::write_text_file(path("broken.json"), "{\"m\": 2,\n \"re\": [[1, 0], [0, 1]\n");
  EXPECT_EQ(run("run --unitary broken.json --input 1,2").code, 3);
}

TEST_F(Cli, ValidateBosonEventsPassBothTests) {
  ASSERT_EQ(run("gen-unitary --mode haar --m 35 --seed 7 --out u.json").code, 0);
  ASSERT_EQ(run("run --unitary u.json --input 1,3,4 --samples 1200 --seed 8 --collision-free-only --out-prefix b").code,
            0);
  const Result r = run("validate --events b_events.csv --unitary u.json --input 1,3,4 --test both");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GT(value_after(r.out, "rne_final_counter"), 0);
  EXPECT_GT(value_after(r.out, "lrt_final_counter"), 0);
  const std::string trace = io::read_text_file(path("validate_rne.csv"));
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "event_number,counter_value");
  EXPECT_TRUE(fs::exists(path("validate_lrt.csv")));
  EXPECT_GT(json_file("validate_summary.json")["rne_final_counter"].get<int>(), 0);
}

TEST_F(Cli, ValidateUniformEventsFailRne) {
  ASSERT_EQ(run("gen-unitary --mode haar --m 35 --seed 7 --out u.json").code, 0);
  ASSERT_EQ(run("run --unitary u.json --input 1,3,4 --sampler uniform --samples 1200 --seed 8 --collision-free-only "
                "--out-prefix uni")
                .code,
            0);
  const Result r = run("validate --events uni_events.csv --unitary u.json --input 1,3,4 --test rne");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(value_after(r.out, "rne_final_counter"), 0);
}

TEST_F(Cli, ValidateErrors) {
  ASSERT_EQ(run("gen-unitary --mode haar --m 35 --seed 7 --out u.json").code, 0);
  ASSERT_EQ(run("gen-unitary --mode haar --m 10 --seed 7 --out small.json").code, 0);
  ASSERT_EQ(run("run --unitary u.json --input 1,3,4 --samples 100 --out-prefix b").code, 0);
  EXPECT_EQ(run("validate --events b_events.csv --unitary u.json --input 1,3,4 --a1 1.1").code, 2);
  EXPECT_EQ(run("validate --events b_events.csv --unitary small.json --input 1,3,4").code, 3);
  EXPECT_EQ(run("validate --events nope.csv --unitary u.json --input 1,3,4").code, 3);
}

TEST_F(Cli, CharacterizeRoundTrip) {
  make_grid("u.json");
  const Result r = run("characterize --unitary u.json --probes 1,3,4 --noise-sigma 0 --seed 1 --out rec.json "
                       "--dataset-out data.json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(value_after(r.out, "gauge_distance"), 1e-6);
  const ComplexMatrix rec = io::load_matrix(path("rec.json"));
  EXPECT_EQ(rec.rows(), 3);
  EXPECT_EQ(rec.cols(), 35);
  EXPECT_TRUE(fs::exists(path("rec.json.residuals.csv")));
  const Result again = run("characterize --dataset data.json --out rec2.json");
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(io::read_text_file(path("rec.json")), io::read_text_file(path("rec2.json")));
}

TEST_F(Cli, CharacterizeErrors) {
  io::write_text_file(path("broken.json"), "{\n  \"amplitudes\": [[1, 0],\n  oops\n}");
  const Result bad = run("characterize --dataset broken.json --out rec.json");
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.err.find("broken.json:3:"), std::string::npos) << bad.err;

  make_grid("u.json");
  ASSERT_EQ(run("characterize --unitary u.json --probes 1,3,4 --out rec.json --dataset-out data.json").code, 0);
  CharacterizationDataset data = io::load_dataset(path("data.json"));
  std::erase_if(data.visibilities, [](const VisibilityRecord& v) { return v.output_i == 9 || v.output_j == 9; });
  io::save_dataset(path("holey.json"), data);
  const Result under = run("characterize --dataset holey.json --out rec.json");
  EXPECT_EQ(under.code, 4);
  EXPECT_NE(under.err.find("output mode 10"), std::string::npos) << under.err;
  EXPECT_EQ(run("characterize --out rec.json").code, 2);
  EXPECT_EQ(run("characterize --unitary u.json --probes 1,36 --out rec.json").code, 2);
}
