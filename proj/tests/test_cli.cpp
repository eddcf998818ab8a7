// Copyright 2026 The qsteer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the qsteer executable end to end.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

namespace {

const std::filesystem::path kData = QSTEER_TEST_DATA_DIR;
const std::filesystem::path kConfigs = kData.parent_path().parent_path() / "configs";

struct RunResult {
  int code;
  std::string err;
};

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qsteer_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

RunResult run(const std::string& args) {
  const auto err = scratch("stderr.txt");
  const std::string cmd = std::string(QSTEER_CLI_PATH) + " " + args + " >/dev/null 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
  std::filesystem::remove(err);
  return r;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, Figure1aWritesCsv) {
  const auto out = scratch("fig1a.csv");
  ASSERT_EQ(run("figure1a --out " + out.string()).code, 0);
  const auto text = slurp(out);
  EXPECT_EQ(lines(text), 40u);
  EXPECT_EQ(text.rfind("experiment,d,N,theta,gamma_sq,exact,closed_form,mc_estimate,mc_stderr,seed\n", 0), 0u);
  std::filesystem::remove(out);
}

TEST(Cli, Figure1bWithSamplingIsReproducible) {
  const auto a = scratch("fig1b_a.csv");
  const auto b = scratch("fig1b_b.csv");
  ASSERT_EQ(run("figure1b --trajectories 2000 --seed 9 --out " + a.string()).code, 0);
  ASSERT_EQ(run("figure1b --trajectories 2000 --seed 9 --workers 3 --out " + b.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(slurp(a).find(",9\n"), std::string::npos);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Cli, MissingSeedIsAnnounced) {
  const auto r = run("figure1a --trajectories 10");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("seed 0"), std::string::npos);
  EXPECT_EQ(run("figure1a --trajectories 10 --seed 1").err, "");
}

TEST(Cli, RunAndSweepConfigs) {
  const auto out = scratch("sweep.csv");
  ASSERT_EQ(run("sweep " + (kConfigs / "theta_sweep.ini").string() + " --out " + out.string()).code, 0);
  EXPECT_EQ(lines(slurp(out)), 182u);
  ASSERT_EQ(run("run " + (kConfigs / "copies.ini").string() + " --out " + out.string()).code, 0);
  EXPECT_EQ(lines(slurp(out)), 22u);
  ASSERT_EQ(run("run " + (kConfigs / "anchor_qubit.ini").string() + " --exact-only --out " + out.string()).code, 0);
  const auto text = slurp(out);
  EXPECT_NE(text.find("anchor,2,4,,,0.9375,0.9375,,,\n"), std::string::npos);
  std::filesystem::remove(out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("run " + (kData / "bad_target.ini").string()).code, 2);
  const auto bad_key = run("run " + (kData / "bad_key.ini").string());
  EXPECT_EQ(bad_key.code, 2);
  EXPECT_NE(bad_key.err.find("trajectoris"), std::string::npos);
  EXPECT_EQ(run("run " + (kData / "missing.ini").string()).code, 4);
  EXPECT_EQ(run("run " + (kData / "infeasible.ini").string()).code, 3);
  EXPECT_EQ(run("figure1a --out /nonexistent-dir/x.csv").code, 4);
  EXPECT_EQ(run("bogus").code, 2);
  EXPECT_EQ(run("figure1a --seed notanumber").code, 2);
}
