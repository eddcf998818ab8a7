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
#include <span>

#include "qsteer/qcore.hpp"

// Closed-form success probabilities for complementary-basis steering. All
// functions are pure real arithmetic; `n` is the number of
// (intermediate, target) measurement rounds after the opening target
// measurement.
namespace qsteer::formulas {

/// Two-level protocol with the intermediate basis rotated by theta:
/// 1 - q_perp (1 - sin^2(2 theta) / 2)^n.
double ps_2d(double theta, double q_perp, std::size_t n);

/// ps_2d at theta = pi/4: 1 - q_perp / 2^n.
double ps_2d_max(double q_perp, std::size_t n);

/// Mutually unbiased pair, one target: 1 - (1 - overlap)(1 - 1/d)^n.
double ps_mub(std::size_t d, double overlap, std::size_t n);

/// Large-d form of ps_mub: 1 - (1 - overlap) exp(-n/d).
double ps_mub_asymptotic(std::size_t d, double overlap, std::size_t n);

/// Average over Haar-random pure initial states of the success probability
/// onto m targets in a d^dim_scale dimensional space:
/// 1 - (1 - m/d^dim_scale)^(n+1).
double avg_ps(std::size_t d, std::size_t n, std::size_t m = 1, std::size_t dim_scale = 1);

/// Large-n form of avg_ps: 1 - exp(-m (n+1) / d^dim_scale).
double avg_ps_large_n(std::size_t d, std::size_t n, std::size_t m = 1, std::size_t dim_scale = 1);

/// m targets carrying total initial population target_mass:
/// 1 - (1 - target_mass)(1 - m/d)^n.
double ps_multi_target(std::size_t d, std::size_t m, double target_mass, std::size_t n);

/// m product targets |psi_k>^{(x) l} from l copies of rho, with
/// overlaps[k] = <psi_k|rho|psi_k>.
double ps_copies(std::size_t d, std::size_t l, std::size_t m, std::span<const double> overlaps,
                 std::size_t n);

/// Two-party target alpha|psi psi_perp> + beta|psi_perp psi> on d (x) d.
struct BipartiteTargetSpec {
  Complex alpha;
  Complex beta;
  std::size_t d;
  PureState psi;
  PureState psi_perp;
};

/// Throws std::invalid_argument on |alpha|^2 + |beta|^2 != 1 (1e-12), a
/// non-orthogonal pair, or a pair dimension other than d.
void validate(const BipartiteTargetSpec& spec);

/// The target state itself, in the d^2 dimensional product space.
PureState bipartite_target(const BipartiteTargetSpec& spec);

/// Opening-shot overlap p(1-p)(1 + 2 Re(alpha beta*) |gamma|^2) of rho (x) rho
/// with the bipartite target.
double bipartite_overlap(const BipartiteTargetSpec& spec, double p, Complex gamma);

/// 1 - [1 - p(1-p)(1 + 2 Re(alpha beta*) |gamma|^2)] (1 - 1/d^2)^n, for
/// rho (x) rho with rho the qubit-like state (p, gamma) on (psi, psi_perp).
double ps_bipartite(const BipartiteTargetSpec& spec, double p, Complex gamma, std::size_t n);

/// ps_bipartite maximized over p (attained at p = 1/2).
double ps_bipartite_bound(const BipartiteTargetSpec& spec, Complex gamma, std::size_t n);

}  // namespace qsteer::formulas
