// Copyright 2026 The spectral-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "spectral/matrix_io.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spectral_cli_" + std::string(
                                  ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream a(dir_ / "a.csv");
    a << "10,0\n0,4\n0,0\n0,0\n0,0\n0,0\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(SPECTRAL_LAB_BIN) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  }

  std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string path(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, Bounds) {
  ASSERT_EQ(run("bounds --sigma 10,2 --m 100 --k 1 --T 1 --output " + path("b.json")), 0);
  const auto j = nlohmann::json::parse(read(dir_ / "b.json"));
  bool found = false;
  for (const auto& b : j["bounds"]) {
    if (b["label"] == "main") {
      EXPECT_NEAR(b["sans_constant"].get<double>(), 0.125, 1e-15);
      EXPECT_TRUE(b.contains("explicit_constant"));
      EXPECT_TRUE(b.contains("kind"));
      EXPECT_TRUE(b.contains("flags"));
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_FALSE(j["assumption"]["satisfied"].get<bool>());
}

TEST_F(Cli, MechanismWritesJsonAndCsv) {
  ASSERT_EQ(run("mechanism --input " + path("a.csv") +
                " --k 1 --T 1e-4 --seed 7 --mode subspace --output " + path("r.json")),
            0);
  const auto j = nlohmann::json::parse(read(dir_ / "r.json"));
  for (const char* key : {"mode", "k", "T", "seed", "sigma_hat", "error_frobenius",
                          "released_csv_path"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["seed"].get<std::uint64_t>(), 7u);
  const auto released = spectral::read_matrix_csv(j["released_csv_path"].get<std::string>());
  EXPECT_EQ(released.rows(), 2);
  EXPECT_NEAR(released.trace(), 1.0, 1e-12);

  // Same seed, same bytes.
  ASSERT_EQ(run("mechanism --input " + path("a.csv") +
                " --k 1 --T 1e-4 --seed 7 --mode subspace --output " + path("r2.json")),
            0);
  EXPECT_EQ(read(dir_ / "r.csv"), read(dir_ / "r2.csv"));
}

TEST_F(Cli, SimulateTrajectoryCsv) {
  ASSERT_EQ(run("simulate --input " + path("a.csv") +
                " --T 0.01 --dt 1e-3 --paths 3 --checkpoints 2 --seed 1 --output " +
                path("t.csv") + " --frames " + path("f.csv")),
            0);
  std::istringstream in(read(dir_ / "t.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "path_id,t,sigma_1,sigma_2");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3 * 3);
  EXPECT_TRUE(fs::exists(dir_ / "f.csv"));

  ASSERT_EQ(run("simulate --direct --input " + path("a.csv") +
                " --T 0.01 --paths 2 --checkpoints 2 --output " + path("d.csv")),
            0);
}

TEST_F(Cli, ExperimentWithConfigAndOverrides) {
  std::ofstream cfg(dir_ / "run.cfg");
  cfg << "mode = subspace\nm = 20\nd = 3\nprofile = explicit\nsigma = 5, 2, 1\nk = 1\n"
         "T = 1e-3\ntrials = 500\n";
  cfg.close();
  ASSERT_EQ(run("--config " + path("run.cfg") + " --output-dir " + path("out1") +
                " --threads 1 --seed 3 experiment --trials 40"),
            0);
  ASSERT_EQ(run("--config " + path("run.cfg") + " --output-dir " + path("out2") +
                " --threads 3 --seed 3 experiment --trials 40"),
            0);
  EXPECT_EQ(read(dir_ / "out1" / "summary.csv"), read(dir_ / "out2" / "summary.csv"));
  EXPECT_EQ(read(dir_ / "out1" / "summary.json"), read(dir_ / "out2" / "summary.json"));
  const auto j = nlohmann::json::parse(read(dir_ / "out1" / "summary.json"));
  EXPECT_EQ(j[0]["trials"].get<int>(), 40);
  EXPECT_EQ(j[0]["seed"].get<int>(), 3);
  EXPECT_TRUE(fs::exists(dir_ / "out1" / "plot_data.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out1" / "timing.json"));
}

TEST_F(Cli, Scaling) {
  ASSERT_EQ(run("--output-dir " + path("sc") +
                " scaling --dim m --d 3 --m 10 --profile explicit --sigma 4,2,1 --k 1 "
                "--T 1e-3 --trials 100 --sweep 10,20,40,80"),
            0);
  const auto j = nlohmann::json::parse(read(dir_ / "sc" / "scaling.json"));
  EXPECT_EQ(j["swept"], "m");
  EXPECT_NEAR(j["dkw_whp"]["slope"].get<double>(), 0.5, 1e-12);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("mechanism --input " + path("missing.csv") + " --k 1 --T 1"), 2);
  EXPECT_EQ(run("bounds --sigma 1,2 --k 1 --T 1"), 2);
  EXPECT_EQ(run("nonsense"), 2);
  EXPECT_EQ(run("mechanism --input " + path("a.csv") + " --k 1 --T 1 --mode sideways"), 2);
  EXPECT_EQ(run("--help"), 0);
  // A large step with no halvings left collides.
  std::ofstream close(dir_ / "close.csv");
  close << "1,0\n0,0.99\n0,0\n";
  close.close();
  EXPECT_EQ(run("simulate --input " + path("close.csv") + " --T 0.5 --dt 0.05 --paths 20 "
                "--collision-floor 0.009 --max-halvings 0 --output " + path("c.csv")),
            3);
}

}  // namespace
