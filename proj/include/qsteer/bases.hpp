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
#include <vector>

#include "qsteer/qcore.hpp"

namespace qsteer {

inline constexpr double kUnitarityTol = 1e-12;

/// Ordered orthonormal basis stored as the columns of a unitary matrix.
/// Measurement outcomes are identified by column index.
class OrthonormalBasis {
public:
  /// Throws std::invalid_argument unless `columns` is square, d >= 2, and
  /// max |U^dagger U - I| <= kUnitarityTol.
  explicit OrthonormalBasis(CMatrix columns);

  /// Columns taken from `states`, in order.
  static OrthonormalBasis from_states(std::span<const PureState> states);

  static OrthonormalBasis computational(std::size_t d);

  /// Orthonormal completion with `first` as column 0.
  static OrthonormalBasis completing(const PureState& first);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(columns_.cols()); }
  const CMatrix& matrix() const noexcept { return columns_; }
  PureState state(std::size_t i) const;

  /// Max elementwise |U^dagger U - I|.
  double unitarity_defect() const;

private:
  CMatrix columns_;
};

/// Doubly stochastic matrix of one-round transition probabilities
/// p[k][j] = sum_i |<i|phi_k>|^2 |<phi_j|i>|^2.
class OverlapMatrix {
public:
  explicit OverlapMatrix(Eigen::MatrixXd entries);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t k, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }

private:
  Eigen::MatrixXd entries_;
};

/// {cos t |a> + e^{i f} sin t |b>, -e^{-i f} sin t |a> + cos t |b>} where
/// (|a>, |b>) are the columns of the two-dimensional `reference`.
OrthonormalBasis basis_2d(double theta, double phi, const OrthonormalBasis& reference);

/// Column j = d^{-1/2} sum_k exp(2 pi i j k / d) |ref_k>.
OrthonormalBasis fourier_basis(const OrthonormalBasis& reference);

/// max_{i,k} | |<b1_i|b2_k>|^2 - 1/d |; zero iff the pair is mutually unbiased.
double unbiasedness_defect(const OrthonormalBasis& b1, const OrthonormalBasis& b2);

/// Squared-modulus overlaps A(i, k) = |<b_theta_i|b_phi_k>|^2. Column k is
/// the probability vector of phi_k over the theta basis.
Eigen::MatrixXd transition_probabilities(const OrthonormalBasis& b_phi,
                                         const OrthonormalBasis& b_theta);

OverlapMatrix overlap_matrix(const OrthonormalBasis& b_phi, const OrthonormalBasis& b_theta);

/// Non-selective measurement: sum_i <i|rho|i> |i><i|.
DensityMatrix dephase_in_basis(const DensityMatrix& rho, const OrthonormalBasis& b);
DensityMatrix dephase_in_basis(const PureState& psi, const OrthonormalBasis& b);

struct ScanResult {
  std::size_t best = 0;
  std::vector<double> distances;
};

/// For each candidate basis computes the squared Hilbert-Schmidt distance
/// between the dephased `failure` state and |target><target|. The lowest
/// index wins ties within 1e-12.
ScanResult hs_optimality_scan(const PureState& target, const PureState& failure,
                              std::span<const OrthonormalBasis> candidates);
/// Same scan for a mixed failure state, e.g. the uniform mixture over all
/// failure directions.
ScanResult hs_optimality_scan(const PureState& target, const DensityMatrix& failure,
                              std::span<const OrthonormalBasis> candidates);

/// Haar-random unitary basis (QR of a complex Ginibre matrix with the
/// R-diagonal phases removed).
OrthonormalBasis haar_random_basis(std::size_t d, Rng& rng);

}  // namespace qsteer
