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

#include "qsteer/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

namespace qsteer {
namespace {

constexpr double kProbSumTol = 1e-10;

// Outcome tables shared by every trajectory of one protocol.
// theta_given_phi(i, k) = |<i|phi_k>|^2, column k sums to 1.
// phi_given_theta(k, i) = |<phi_k|i>|^2, column i sums to 1.
struct TrajectoryTables {
  explicit TrajectoryTables(const Protocol& protocol)
      : theta_given_phi(transition_probabilities(protocol.target_basis(),
                                                 protocol.intermediate_basis())),
        phi_given_theta(theta_given_phi.transpose()) {}

  Eigen::MatrixXd theta_given_phi;
  Eigen::MatrixXd phi_given_theta;
};

Eigen::VectorXd populations(const DensityMatrix& rho, const OrthonormalBasis& b) {
  const CMatrix& u = b.matrix();
  return (u.adjoint() * rho.matrix() * u).diagonal().real();
}

TrajectoryResult run_with_tables(const Eigen::VectorXd& initial, const Protocol& protocol,
                                 const TrajectoryTables& tables, Rng& rng, TraceMode trace) {
  TrajectoryResult result;
  const bool record = trace == TraceMode::full;
  if (record) result.outcomes.reserve(2 * protocol.rounds() + 1);

  std::size_t k = sample_outcome(initial, rng);
  if (record) result.outcomes.push_back({BasisTag::target, k});
  if (protocol.is_target(k)) {
    result.success = true;
    result.round = 0;
    return result;
  }
  for (std::size_t round = 1; round <= protocol.rounds(); ++round) {
    const std::size_t i = sample_outcome(tables.theta_given_phi.col(static_cast<Eigen::Index>(k)), rng);
    k = sample_outcome(tables.phi_given_theta.col(static_cast<Eigen::Index>(i)), rng);
    if (record) {
      result.outcomes.push_back({BasisTag::intermediate, i});
      result.outcomes.push_back({BasisTag::target, k});
    }
    if (protocol.is_target(k)) {
      result.success = true;
      result.round = round;
      return result;
    }
  }
  return result;
}

double clamp_probability(double value, const char* what) {
  if (value < -kProbSumTol || value > 1.0 + kProbSumTol || !std::isfinite(value)) {
    std::ostringstream os;
    os << what << ": probability " << value << " outside [0, 1]";
    throw std::logic_error(os.str());
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace

Protocol::Protocol(OrthonormalBasis target_basis, OrthonormalBasis intermediate_basis,
                   std::vector<std::size_t> targets, std::size_t rounds)
    : target_basis_(std::move(target_basis)),
      intermediate_basis_(std::move(intermediate_basis)),
      targets_(std::move(targets)),
      rounds_(rounds) {
  if (target_basis_.dim() != intermediate_basis_.dim()) {
    throw DimensionError("Protocol: target and intermediate bases differ in dimension");
  }
  if (targets_.empty()) throw std::invalid_argument("Protocol: empty target set");
  std::sort(targets_.begin(), targets_.end());
  targets_.erase(std::unique(targets_.begin(), targets_.end()), targets_.end());
  const std::size_t d = target_basis_.dim();
  if (targets_.back() >= d) {
    std::ostringstream os;
    os << "Protocol: target index " << targets_.back() << " out of range for d = " << d;
    throw std::invalid_argument(os.str());
  }
  is_target_.assign(d, false);
  for (auto t : targets_) is_target_[t] = true;
  for (std::size_t j = 0; j < d; ++j) {
    if (!is_target_[j]) failures_.push_back(j);
  }
}

Protocol Protocol::with_rounds(std::size_t rounds) const {
  Protocol copy = *this;
  copy.rounds_ = rounds;
  return copy;
}

std::size_t sample_outcome(const Eigen::VectorXd& probs, Rng& rng) {
  if (probs.size() == 0) throw std::invalid_argument("sample_outcome: empty distribution");
  const double total = probs.sum();
  if (!(std::abs(total - 1.0) <= kProbSumTol)) {
    std::ostringstream os;
    os << "measurement: outcome probabilities sum to " << total;
    throw std::invalid_argument(os.str());
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng) * total;
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) <= 0.0) continue;
    last_nonzero = static_cast<std::size_t>(i);
    cumulative += probs(i);
    if (u < cumulative) return last_nonzero;
  }
  return last_nonzero;
}

Measurement measure_in_basis(const DensityMatrix& rho, const OrthonormalBasis& b, Rng& rng) {
  if (rho.dim() != b.dim()) throw DimensionError("measure_in_basis: dimension mismatch");
  const std::size_t i = sample_outcome(populations(rho, b), rng);
  return {i, b.state(i)};
}

Measurement measure_in_basis(const PureState& psi, const OrthonormalBasis& b, Rng& rng) {
  if (psi.dim() != b.dim()) throw DimensionError("measure_in_basis: dimension mismatch");
  const Eigen::VectorXd probs = (b.matrix().adjoint() * psi.amplitudes()).cwiseAbs2();
  const std::size_t i = sample_outcome(probs, rng);
  return {i, b.state(i)};
}

TrajectoryResult run_trajectory(const DensityMatrix& rho, const Protocol& protocol, Rng& rng,
                                TraceMode trace) {
  if (rho.dim() != protocol.dim()) throw DimensionError("run_trajectory: dimension mismatch");
  const TrajectoryTables tables(protocol);
  return run_with_tables(populations(rho, protocol.target_basis()), protocol, tables, rng, trace);
}

MarkovModel build_markov(const Protocol& protocol) {
  const OverlapMatrix p = overlap_matrix(protocol.target_basis(), protocol.intermediate_basis());
  MarkovModel model;
  model.failure_indices = protocol.failures();
  const auto nf = static_cast<Eigen::Index>(model.failure_indices.size());
  model.success_mass = Eigen::VectorXd::Zero(nf);
  model.failure_kernel = Eigen::MatrixXd::Zero(nf, nf);
  for (Eigen::Index a = 0; a < nf; ++a) {
    const std::size_t j = model.failure_indices[static_cast<std::size_t>(a)];
    for (auto t : protocol.targets()) model.success_mass(a) += p(j, t);
    for (Eigen::Index b = 0; b < nf; ++b) {
      model.failure_kernel(a, b) = p(j, model.failure_indices[static_cast<std::size_t>(b)]);
    }
  }
  return model;
}

std::vector<double> exact_success_curve(const DensityMatrix& rho, const Protocol& protocol) {
  if (rho.dim() != protocol.dim()) throw DimensionError("exact_success: dimension mismatch");
  const Eigen::VectorXd pops = populations(rho, protocol.target_basis());
  double success = 0.0;
  for (auto t : protocol.targets()) success += pops(static_cast<Eigen::Index>(t));

  const MarkovModel model = build_markov(protocol);
  const auto nf = static_cast<Eigen::Index>(model.failure_indices.size());
  // Failure-index occupation after the latest target measurement.
  Eigen::VectorXd occupation(nf);
  for (Eigen::Index a = 0; a < nf; ++a) {
    occupation(a) = pops(static_cast<Eigen::Index>(model.failure_indices[static_cast<std::size_t>(a)]));
  }

  std::vector<double> curve;
  curve.reserve(protocol.rounds() + 1);
  curve.push_back(clamp_probability(success, "exact_success"));
  for (std::size_t n = 1; n <= protocol.rounds(); ++n) {
    success += occupation.dot(model.success_mass);
    occupation = (model.failure_kernel.transpose() * occupation).eval();
    curve.push_back(clamp_probability(success, "exact_success"));
  }
  return curve;
}

double exact_success(const DensityMatrix& rho, const Protocol& protocol) {
  return exact_success_curve(rho, protocol).back();
}

double brute_force_success(const DensityMatrix& rho, const Protocol& protocol) {
  if (rho.dim() != protocol.dim()) throw DimensionError("brute_force_success: dimension mismatch");
  const std::size_t d = protocol.dim();
  const double leaves = std::pow(static_cast<double>(d), 2.0 * static_cast<double>(protocol.rounds()) + 1.0);
  if (leaves > kMaxBruteForceLeaves) {
    std::ostringstream os;
    os << "brute_force_success: outcome tree has " << leaves << " leaves (limit "
       << kMaxBruteForceLeaves << ")";
    throw InfeasibleError(os.str());
  }

  std::vector<PureState> phi;
  std::vector<PureState> theta;
  for (std::size_t k = 0; k < d; ++k) {
    phi.push_back(protocol.target_basis().state(k));
    theta.push_back(protocol.intermediate_basis().state(k));
  }

  // Success mass reachable from the collapsed state phi[k] with `left`
  // rounds remaining.
  auto walk = [&](auto&& self, std::size_t k, std::size_t left) -> double {
    if (left == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double to_theta = std::norm(theta[i].inner(phi[k]));
      if (to_theta == 0.0) continue;
      for (std::size_t kk = 0; kk < d; ++kk) {
        const double to_phi = std::norm(phi[kk].inner(theta[i]));
        const double branch = protocol.is_target(kk) ? 1.0 : self(self, kk, left - 1);
        total += to_theta * to_phi * branch;
      }
    }
    return total;
  };

  double success = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double born = target_overlap(rho, phi[k]);
    success += born * (protocol.is_target(k) ? 1.0 : walk(walk, k, protocol.rounds()));
  }
  return clamp_probability(success, "brute_force_success");
}

Rng substream(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return Rng(z);
}

Estimate monte_carlo_success(const DensityMatrix& rho, const Protocol& protocol,
                             std::size_t n_traj, std::uint64_t seed, unsigned workers) {
  if (n_traj == 0) throw std::invalid_argument("monte_carlo_success: n_traj must be at least 1");
  if (rho.dim() != protocol.dim()) throw DimensionError("monte_carlo_success: dimension mismatch");
  const TrajectoryTables tables(protocol);
  const Eigen::VectorXd initial = populations(rho, protocol.target_basis());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_traj)));

  std::vector<std::size_t> hits(workers, 0);
  auto work = [&](unsigned w) {
    std::size_t local = 0;
    for (std::size_t t = w; t < n_traj; t += workers) {
      Rng rng = substream(seed, t);
      if (run_with_tables(initial, protocol, tables, rng, TraceMode::none).success) ++local;
    }
    hits[w] = local;
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  const std::size_t total = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  Estimate est;
  est.trials = n_traj;
  est.value = static_cast<double>(total) / static_cast<double>(n_traj);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(n_traj));
  return est;
}

}  // namespace qsteer
