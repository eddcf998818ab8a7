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
#include <optional>
#include <vector>

#include "qsteer/bases.hpp"
#include "qsteer/qcore.hpp"

namespace qsteer {

/// One target-basis measurement followed by `rounds` repetitions of
/// (intermediate-basis measurement, target-basis measurement). The run
/// succeeds at the first target-basis outcome in `targets`.
class Protocol {
public:
  /// Throws std::invalid_argument on an empty target set or an index
  /// >= d, DimensionError if the bases differ in dimension. Duplicate
  /// target indices are merged.
  Protocol(OrthonormalBasis target_basis, OrthonormalBasis intermediate_basis,
           std::vector<std::size_t> targets, std::size_t rounds);

  const OrthonormalBasis& target_basis() const noexcept { return target_basis_; }
  const OrthonormalBasis& intermediate_basis() const noexcept { return intermediate_basis_; }
  const std::vector<std::size_t>& targets() const noexcept { return targets_; }
  /// Target-basis indices not in the target set, ascending.
  const std::vector<std::size_t>& failures() const noexcept { return failures_; }
  std::size_t rounds() const noexcept { return rounds_; }
  std::size_t dim() const noexcept { return target_basis_.dim(); }
  bool is_target(std::size_t index) const noexcept { return is_target_[index]; }

  Protocol with_rounds(std::size_t rounds) const;

private:
  OrthonormalBasis target_basis_;
  OrthonormalBasis intermediate_basis_;
  std::vector<std::size_t> targets_;
  std::vector<std::size_t> failures_;
  std::vector<bool> is_target_;
  std::size_t rounds_;
};

enum class BasisTag { target, intermediate };

struct Outcome {
  BasisTag basis;
  std::size_t index;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct TrajectoryResult {
  bool success = false;
  /// 0 for the opening measurement, k for the target measurement of round k.
  std::optional<std::size_t> round;
  std::vector<Outcome> outcomes;
};

enum class TraceMode { full, none };

/// Absorbing chain over the failure indices of the target basis.
struct MarkovModel {
  std::vector<std::size_t> failure_indices;
  /// success_mass[j]: one-round probability of landing on any target from
  /// failure index failure_indices[j].
  Eigen::VectorXd success_mass;
  /// failure_kernel(j, j'): one-round failure-to-failure transition.
  Eigen::MatrixXd failure_kernel;
};

struct Measurement {
  std::size_t index;
  PureState state;
};

/// Born-rule projective measurement. Outcome probabilities are renormalized
/// when their sum is within 1e-10 of 1; a larger deviation throws
/// std::invalid_argument.
Measurement measure_in_basis(const DensityMatrix& rho, const OrthonormalBasis& b, Rng& rng);
Measurement measure_in_basis(const PureState& psi, const OrthonormalBasis& b, Rng& rng);

/// Samples an outcome index from a probability vector by inverse CDF.
/// The last non-zero bucket absorbs rounding residue.
std::size_t sample_outcome(const Eigen::VectorXd& probs, Rng& rng);

TrajectoryResult run_trajectory(const DensityMatrix& rho, const Protocol& protocol, Rng& rng,
                                TraceMode trace = TraceMode::full);

MarkovModel build_markov(const Protocol& protocol);

/// Success probability after protocol.rounds() rounds, from the absorbing
/// Markov chain.
double exact_success(const DensityMatrix& rho, const Protocol& protocol);

/// exact_success for every round count 0..protocol.rounds(), in one pass.
std::vector<double> exact_success_curve(const DensityMatrix& rho, const Protocol& protocol);

/// Leaf budget for brute_force_success.
inline constexpr double kMaxBruteForceLeaves = 1e7;

/// Enumerates the whole outcome tree with Born-rule weights. Throws
/// InfeasibleError when d^(2N+1) exceeds kMaxBruteForceLeaves.
double brute_force_success(const DensityMatrix& rho, const Protocol& protocol);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Fraction of successful trajectories with binomial standard error.
/// Trajectory t draws from a substream seeded by (seed, t), so the result
/// does not depend on `workers`.
Estimate monte_carlo_success(const DensityMatrix& rho, const Protocol& protocol,
                             std::size_t n_traj, std::uint64_t seed, unsigned workers = 1);

/// Substream for task `index` under master seed `seed`.
Rng substream(std::uint64_t seed, std::uint64_t index);

}  // namespace qsteer
