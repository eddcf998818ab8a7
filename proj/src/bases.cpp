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

#include "qsteer/bases.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qsteer {
namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionError(os.str());
  }
}

double unitarity_defect_of(const CMatrix& u) {
  const auto n = u.cols();
  return (u.adjoint() * u - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace

OrthonormalBasis::OrthonormalBasis(CMatrix columns) : columns_(std::move(columns)) {
  if (columns_.rows() != columns_.cols()) {
    throw std::invalid_argument("OrthonormalBasis: column matrix is not square");
  }
  if (columns_.cols() < 2) {
    throw std::invalid_argument("OrthonormalBasis: dimension must be at least 2");
  }
  const double defect = unitarity_defect_of(columns_);
  if (!(defect <= kUnitarityTol)) {
    std::ostringstream os;
    os << "OrthonormalBasis: columns are not orthonormal (defect " << defect << ")";
    throw std::invalid_argument(os.str());
  }
}

OrthonormalBasis OrthonormalBasis::from_states(std::span<const PureState> states) {
  if (states.empty()) throw std::invalid_argument("OrthonormalBasis: no states");
  const auto d = static_cast<Eigen::Index>(states.front().dim());
  if (static_cast<Eigen::Index>(states.size()) != d) {
    throw DimensionError("OrthonormalBasis: need exactly d states");
  }
  CMatrix u(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto& s = states[static_cast<std::size_t>(k)];
    require_same_dim(s.dim(), static_cast<std::size_t>(d), "OrthonormalBasis");
    u.col(k) = s.amplitudes();
  }
  return OrthonormalBasis(std::move(u));
}

OrthonormalBasis OrthonormalBasis::computational(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return OrthonormalBasis(CMatrix::Identity(n, n));
}

OrthonormalBasis OrthonormalBasis::completing(const PureState& first) {
  const auto d = static_cast<Eigen::Index>(first.dim());
  CMatrix seed(d, d + 1);
  seed.col(0) = first.amplitudes();
  seed.rightCols(d) = CMatrix::Identity(d, d);
  Eigen::HouseholderQR<CMatrix> qr(seed);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  // q.col(0) is `first` up to a phase; the remaining columns are
  // orthogonal to it either way.
  q.col(0) = first.amplitudes();
  return OrthonormalBasis(std::move(q));
}

PureState OrthonormalBasis::state(std::size_t i) const {
  if (i >= dim()) throw std::out_of_range("OrthonormalBasis: index out of range");
  return PureState(columns_.col(static_cast<Eigen::Index>(i)));
}

double OrthonormalBasis::unitarity_defect() const { return unitarity_defect_of(columns_); }

OverlapMatrix::OverlapMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("OverlapMatrix: not square");
  }
  if (entries_.minCoeff() < -1e-12 || entries_.maxCoeff() > 1.0 + 1e-12) {
    throw std::invalid_argument("OverlapMatrix: entry outside [0, 1]");
  }
  const double row_dev = (entries_.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double col_dev = (entries_.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (row_dev > 1e-10 || col_dev > 1e-10) {
    throw std::invalid_argument("OverlapMatrix: not doubly stochastic");
  }
}

OrthonormalBasis basis_2d(double theta, double phi, const OrthonormalBasis& reference) {
  if (reference.dim() != 2) {
    throw DimensionError("basis_2d: reference basis must be two-dimensional");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex e = std::polar(1.0, phi);
  Eigen::Matrix2cd rot;
  rot << c, -std::conj(e) * s,
         e * s, c;
  return OrthonormalBasis(reference.matrix() * rot);
}

OrthonormalBasis fourier_basis(const OrthonormalBasis& reference) {
  const auto d = static_cast<Eigen::Index>(reference.dim());
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  CMatrix f(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      // reduce jk mod d before the angle to keep the phase exact-ish for large d
      const auto jk = (j * k) % d;
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(jk) / static_cast<double>(d);
      f(k, j) = std::polar(norm, angle);
    }
  }
  return OrthonormalBasis(reference.matrix() * f);
}

Eigen::MatrixXd transition_probabilities(const OrthonormalBasis& b_phi,
                                         const OrthonormalBasis& b_theta) {
  require_same_dim(b_phi.dim(), b_theta.dim(), "transition_probabilities");
  return (b_theta.matrix().adjoint() * b_phi.matrix()).cwiseAbs2();
}

double unbiasedness_defect(const OrthonormalBasis& b1, const OrthonormalBasis& b2) {
  require_same_dim(b1.dim(), b2.dim(), "unbiasedness_defect");
  const double inv_d = 1.0 / static_cast<double>(b1.dim());
  return (transition_probabilities(b2, b1).array() - inv_d).abs().maxCoeff();
}

OverlapMatrix overlap_matrix(const OrthonormalBasis& b_phi, const OrthonormalBasis& b_theta) {
  // A(i, k) = |<i|phi_k>|^2, so p = A^T A.
  const Eigen::MatrixXd a = transition_probabilities(b_phi, b_theta);
  Eigen::MatrixXd p = a.transpose() * a;
  return OverlapMatrix(std::move(p));
}

DensityMatrix dephase_in_basis(const DensityMatrix& rho, const OrthonormalBasis& b) {
  require_same_dim(rho.dim(), b.dim(), "dephase_in_basis");
  const CMatrix& u = b.matrix();
  // populations <i|rho|i>
  const Eigen::VectorXd pops = (u.adjoint() * rho.matrix() * u).diagonal().real();
  CMatrix out = u * pops.cast<Complex>().asDiagonal() * u.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out));
}

DensityMatrix dephase_in_basis(const PureState& psi, const OrthonormalBasis& b) {
  return dephase_in_basis(DensityMatrix::from_pure(psi), b);
}

ScanResult hs_optimality_scan(const PureState& target, const DensityMatrix& failure,
                              std::span<const OrthonormalBasis> candidates) {
  if (candidates.empty()) {
    throw std::invalid_argument("hs_optimality_scan: empty candidate list");
  }
  require_same_dim(target.dim(), failure.dim(), "hs_optimality_scan");
  const DensityMatrix target_rho = DensityMatrix::from_pure(target);
  ScanResult result;
  result.distances.reserve(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double dist = hs_distance_sq(dephase_in_basis(failure, candidates[c]), target_rho);
    result.distances.push_back(dist);
    if (dist < result.distances[result.best] - 1e-12) result.best = c;
  }
  return result;
}

ScanResult hs_optimality_scan(const PureState& target, const PureState& failure,
                              std::span<const OrthonormalBasis> candidates) {
  return hs_optimality_scan(target, DensityMatrix::from_pure(failure), candidates);
}

OrthonormalBasis haar_random_basis(std::size_t d, Rng& rng) {
  if (d < 2) throw std::invalid_argument("haar_random_basis: d must be at least 2");
  const auto n = static_cast<Eigen::Index>(d);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix z(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex rkk = r(k, k);
    const double mag = std::abs(rkk);
    if (mag > 0.0) q.col(k) *= rkk / mag;
  }
  return OrthonormalBasis(std::move(q));
}

}  // namespace qsteer
