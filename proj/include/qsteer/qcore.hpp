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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "qsteer/errors.hpp"

namespace qsteer {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Every stochastic routine takes the stream explicitly; nothing in the
// library owns hidden random state.
using Rng = std::mt19937_64;

// Tolerances shared by the state invariants.
inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenFloor = -1e-10;

/// Unit-norm state vector of dimension d >= 2. The global phase is kept
/// as given.
class PureState {
public:
  /// Throws std::invalid_argument if d < 2 or the norm deviates from 1 by
  /// more than kNormTol.
  explicit PureState(CVector amplitudes);

  /// Rescales `amplitudes` to unit norm first; throws on a zero vector.
  static PureState normalized(CVector amplitudes);

  /// Standard basis vector e_index of dimension d.
  static PureState basis_vector(std::size_t d, std::size_t index);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  /// <this|other>
  Complex inner(const PureState& other) const;

  /// |this><this|
  CMatrix projector() const;

private:
  CVector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite d x d matrix.
class DensityMatrix {
public:
  /// Validates Hermiticity (max elementwise deviation kHermitianTol), unit
  /// trace (kTraceTol) and an eigenvalue floor of kEigenFloor.
  explicit DensityMatrix(CMatrix entries);

  static DensityMatrix from_pure(const PureState& psi);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const CMatrix& matrix() const noexcept { return entries_; }
  Complex operator()(std::size_t r, std::size_t c) const {
    return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  double purity() const;

private:
  CMatrix entries_;
};

/// Two-level state p|psi><psi| + (1-p)|psi_perp><psi_perp| with coherence
/// gamma*sqrt(p(1-p)) between the pair, embedded in the dimension of the
/// pair vectors. |gamma| = 1 is pure, gamma = 0 is fully dephased.
struct QubitLikeSpec {
  double p = 1.0;
  Complex gamma{0.0, 0.0};
  PureState psi;
  PureState psi_perp;
};

/// <phi|rho|phi>, real in [0, 1].
double target_overlap(const DensityMatrix& rho, const PureState& phi);

DensityMatrix maximally_mixed(std::size_t d);

/// tr[(rho - sigma)^dagger (rho - sigma)]
double hs_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Kronecker products; index of a (x) b is i_a * d_b + i_b.
PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// n-fold tensor power, n >= 1.
PureState tensor_power(const PureState& a, std::size_t n);
DensityMatrix tensor_power(const DensityMatrix& a, std::size_t n);

/// Haar-distributed pure state: d i.i.d. standard complex Gaussians,
/// normalized.
PureState haar_random_pure(std::size_t d, Rng& rng);

/// Random mixed state: convex combination of `rank` Haar pure states with
/// uniformly drawn weights. rank 0 means rank d.
DensityMatrix random_density(std::size_t d, Rng& rng, std::size_t rank = 0);

DensityMatrix qubit_like_density(const QubitLikeSpec& spec);

/// Max elementwise |A - A^dagger|.
double hermiticity_defect(const CMatrix& m);

}  // namespace qsteer
