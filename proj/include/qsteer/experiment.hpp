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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsteer/qcore.hpp"

namespace qsteer {

enum class ExperimentKind { single, sweep, haar_average, figure1a, figure1b, bipartite, copies };

enum class BasisChoice { fourier, param2d };

const char* to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(const std::string& text);

/// Initial state. Pure states and the qubit-like pair are given in
/// coordinates of the target basis.
struct StateSpec {
  enum class Kind { pure, maximally_mixed, qubit_like, matrix };
  Kind kind = Kind::maximally_mixed;
  // pure
  std::optional<std::size_t> index;
  std::vector<Complex> amplitudes;
  // qubit_like
  double p = 1.0;
  Complex gamma{0.0, 0.0};
  std::size_t psi = 0;
  std::size_t psi_perp = 1;
  // matrix, loaded at parse time
  std::optional<CMatrix> matrix;
};

struct RoundRange {
  std::size_t first = 0;
  std::size_t last = 0;
};

/// One sweep dimension. Recognized names: theta, n, d, p, gamma_sq.
struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::single;
  /// Experiment run at each point of a sweep.
  ExperimentKind base = ExperimentKind::single;
  /// Row label; defaults to the (base) kind name.
  std::string name;

  std::size_t d = 2;
  RoundRange rounds;

  BasisChoice basis = BasisChoice::fourier;
  double theta = 0.0;
  double phi = 0.0;
  std::vector<std::size_t> targets{0};

  StateSpec state;

  // bipartite target alpha|psi psi_perp> + beta|psi_perp psi>, psi = e_0,
  // psi_perp = e_1; p and gamma come from `state`.
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};

  // copies
  std::size_t copies = 1;

  /// Monte Carlo trajectories (Haar samples for haar_average); 0 = none.
  std::size_t trajectories = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool exact_only = false;
  /// Also evaluate the brute-force tree and require agreement with the
  /// Markov evaluation.
  bool verify_brute_force = false;

  std::vector<SweepAxis> axes;
  unsigned workers = 1;
};

/// One CSV line. Unset optionals are written as empty fields.
struct ResultRow {
  std::string experiment;
  std::size_t d = 0;
  std::size_t n = 0;
  std::optional<double> theta;
  std::optional<double> gamma_sq;
  std::optional<double> exact;
  std::optional<double> closed_form;
  std::optional<double> mc_estimate;
  std::optional<double> mc_stderr;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr const char* kCsvHeader =
    "experiment,d,N,theta,gamma_sq,exact,closed_form,mc_estimate,mc_stderr,seed";

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& config);

/// Deterministic in the seed. Sweep configs are forwarded to sweep().
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// Cartesian expansion of config.axes; rows ordered lexicographically by
/// axis order (first axis slowest). Throws ConfigError on an empty axis.
std::vector<ResultRow> sweep(const ExperimentConfig& config);

ExperimentConfig figure1a_config();
ExperimentConfig figure1b_config();

/// 12 significant digits, fixed column order, LF line ends.
void write_csv(std::span<const ResultRow> rows, std::ostream& out);
/// Throws IoError mentioning the path.
void emit_csv(std::span<const ResultRow> rows, const std::filesystem::path& path);

/// Reads an INI-style config; relative paths inside resolve against
/// `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Whitespace-separated "re im" pairs, d per line, d lines.
CMatrix load_matrix_file(const std::filesystem::path& path);

}  // namespace qsteer
