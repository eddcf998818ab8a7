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

// qsteer: steer a state onto target states by alternating measurements in
// two bases, and tabulate the success probabilities.
//
//   qsteer run <config> [--out file.csv] [--seed S] [--trajectories N] [--exact-only]
//   qsteer sweep <config> ...
//   qsteer figure1a ...
//   qsteer figure1b ...

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "qsteer/errors.hpp"
#include "qsteer/experiment.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 2, kInfeasible = 3, kIoError = 4 };

struct CommonFlags {
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trajectories;
  bool exact_only = false;
  unsigned workers = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--out", flags.out, "CSV output path (default: stdout)");
  cmd->add_option("--seed", flags.seed, "master seed for Monte Carlo and Haar sampling");
  cmd->add_option("--trajectories", flags.trajectories, "Monte Carlo trajectories per row");
  cmd->add_flag("--exact-only", flags.exact_only, "skip every sampled column");
  cmd->add_option("--workers", flags.workers, "worker threads (default: hardware concurrency)");
}

void apply_overrides(qsteer::ExperimentConfig& config, const CommonFlags& flags) {
  if (flags.seed) {
    config.seed = *flags.seed;
    config.seed_given = true;
  }
  if (flags.trajectories) config.trajectories = *flags.trajectories;
  if (flags.exact_only) config.exact_only = true;
  config.workers = flags.workers > 0 ? flags.workers : std::max(1u, std::thread::hardware_concurrency());
}

bool samples_anything(const qsteer::ExperimentConfig& config) {
  return !config.exact_only && config.trajectories > 0;
}

int execute(qsteer::ExperimentConfig config, const CommonFlags& flags) {
  apply_overrides(config, flags);
  if (!config.seed_given && samples_anything(config)) {
    std::cerr << "qsteer: no seed given, using seed 0\n";
  }
  const auto rows = qsteer::run_experiment(config);
  if (flags.out.empty()) {
    qsteer::write_csv(rows, std::cout);
    std::cout.flush();
    if (!std::cout) throw qsteer::IoError("failed writing to stdout");
  } else {
    qsteer::emit_csv(rows, flags.out);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-driven state steering: success probabilities and sweeps"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path;

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required();
  add_common(run, flags);

  auto* sweep = app.add_subcommand("sweep", "expand and run the [sweep] axes of a config file");
  sweep->add_option("config", config_path, "config file")->required();
  add_common(sweep, flags);

  auto* fig_a = app.add_subcommand("figure1a", "two-level MUB success curves for initial overlaps 2/3, 1/3, 0");
  add_common(fig_a, flags);

  auto* fig_b = app.add_subcommand("figure1b", "two-level success curves for theta = pi/4, pi/8, pi/12");
  add_common(fig_b, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (run->parsed()) {
      return execute(qsteer::load_config(config_path), flags);
    }
    if (sweep->parsed()) {
      auto config = qsteer::load_config(config_path);
      if (config.kind != qsteer::ExperimentKind::sweep) {
        if (config.axes.empty()) throw qsteer::ConfigError("sweep", "config has no [sweep] section");
        config.base = config.kind;
        config.kind = qsteer::ExperimentKind::sweep;
      }
      return execute(config, flags);
    }
    if (fig_a->parsed()) return execute(qsteer::figure1a_config(), flags);
    if (fig_b->parsed()) return execute(qsteer::figure1b_config(), flags);
  } catch (const qsteer::ConfigError& e) {
    std::cerr << "qsteer: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const qsteer::InfeasibleError& e) {
    std::cerr << "qsteer: infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const qsteer::IoError& e) {
    std::cerr << "qsteer: I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qsteer: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "qsteer: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
