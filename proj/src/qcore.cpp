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

#include "qsteer/qcore.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace qsteer {
namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionError(os.str());
  }
}

}  // namespace

double hermiticity_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

PureState::PureState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 2) {
    throw std::invalid_argument("PureState: dimension must be at least 2");
  }
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "PureState: norm " << norm << " is not 1";
    throw std::invalid_argument(os.str());
  }
}

PureState PureState::normalized(CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("PureState: cannot normalize a zero vector");
  }
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis_vector(std::size_t d, std::size_t index) {
  if (index >= d) {
    throw std::out_of_range("PureState: basis index out of range");
  }
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

Complex PureState::inner(const PureState& other) const {
  require_same_dim(dim(), other.dim(), "inner");
  return amplitudes_.dot(other.amplitudes_);
}

CMatrix PureState::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("DensityMatrix: matrix is not square");
  }
  if (entries_.rows() < 2) {
    throw std::invalid_argument("DensityMatrix: dimension must be at least 2");
  }
  if (!entries_.allFinite()) {
    throw std::invalid_argument("DensityMatrix: non-finite entry");
  }
  const double herm = hermiticity_defect(entries_);
  if (herm > kHermitianTol) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (defect " << herm << ")";
    throw std::invalid_argument(os.str());
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " is not 1";
    throw std::invalid_argument(os.str());
  }
  // Symmetrize before the eigen-solve so the solver sees an exactly
  // Hermitian matrix.
  const CMatrix herm_part = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm_part, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < kEigenFloor) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << min_eig;
    throw std::invalid_argument(os.str());
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.projector());
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return entries_.cwiseAbs2().sum();
}

double target_overlap(const DensityMatrix& rho, const PureState& phi) {
  require_same_dim(rho.dim(), phi.dim(), "target_overlap");
  const Complex value = phi.amplitudes().dot(rho.matrix() * phi.amplitudes());
  if (std::abs(value.imag()) > 1e-12) {
    std::ostringstream os;
    os << "target_overlap: expectation has imaginary part " << value.imag();
    throw std::logic_error(os.str());
  }
  return value.real();
}

DensityMatrix maximally_mixed(std::size_t d) {
  if (d < 2) throw std::invalid_argument("maximally_mixed: d must be at least 2");
  const auto n = static_cast<Eigen::Index>(d);
  return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(d));
}

double hs_distance_sq(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "hs_distance_sq");
  return (rho.matrix() - sigma.matrix()).cwiseAbs2().sum();
}

PureState tensor(const PureState& a, const PureState& b) {
  const Eigen::Index db = b.amplitudes().size();
  CVector out(a.amplitudes().size() * db);
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  }
  return PureState::normalized(std::move(out));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const Eigen::Index da = a.matrix().rows();
  const Eigen::Index db = b.matrix().rows();
  CMatrix out(da * db, da * db);
  for (Eigen::Index r = 0; r < da; ++r) {
    for (Eigen::Index c = 0; c < da; ++c) {
      out.block(r * db, c * db, db, db) = a.matrix()(r, c) * b.matrix();
    }
  }
  return DensityMatrix(std::move(out));
}

PureState tensor_power(const PureState& a, std::size_t n) {
  if (n == 0) throw std::invalid_argument("tensor_power: exponent must be at least 1");
  PureState out = a;
  for (std::size_t k = 1; k < n; ++k) out = tensor(out, a);
  return out;
}

DensityMatrix tensor_power(const DensityMatrix& a, std::size_t n) {
  if (n == 0) throw std::invalid_argument("tensor_power: exponent must be at least 1");
  DensityMatrix out = a;
  for (std::size_t k = 1; k < n; ++k) out = tensor(out, a);
  return out;
}

PureState haar_random_pure(std::size_t d, Rng& rng) {
  if (d < 2) throw std::invalid_argument("haar_random_pure: d must be at least 2");
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  return PureState::normalized(std::move(v));
}

DensityMatrix random_density(std::size_t d, Rng& rng, std::size_t rank) {
  if (rank == 0) rank = d;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix acc = CMatrix::Zero(n, n);
  double total = 0.0;
  for (std::size_t k = 0; k < rank; ++k) {
    const double w = unif(rng) + 1e-3;
    acc += w * haar_random_pure(d, rng).projector();
    total += w;
  }
  acc /= total;
  acc = 0.5 * (acc + acc.adjoint()).eval();
  return DensityMatrix(std::move(acc));
}

DensityMatrix qubit_like_density(const QubitLikeSpec& spec) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw std::invalid_argument("qubit_like_density: p must lie in [0, 1]");
  }
  if (std::abs(spec.gamma) > 1.0 + 1e-15) {
    throw std::invalid_argument("qubit_like_density: |gamma| must not exceed 1");
  }
  require_same_dim(spec.psi.dim(), spec.psi_perp.dim(), "qubit_like_density");
  if (std::abs(spec.psi.inner(spec.psi_perp)) > kNormTol) {
    throw std::invalid_argument("qubit_like_density: psi and psi_perp are not orthogonal");
  }
  const CVector& a = spec.psi.amplitudes();
  const CVector& b = spec.psi_perp.amplitudes();
  const Complex coherence = spec.gamma * std::sqrt(spec.p * (1.0 - spec.p));
  CMatrix m = spec.p * (a * a.adjoint()) + (1.0 - spec.p) * (b * b.adjoint()) +
              coherence * (a * b.adjoint()) + std::conj(coherence) * (b * a.adjoint());
  return DensityMatrix(std::move(m));
}

}  // namespace qsteer
