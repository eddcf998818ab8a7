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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "qsteer/bases.hpp"
#include "qsteer/qcore.hpp"

using namespace qsteer;

namespace {

void expect_matrix_near(const CMatrix& a, const CMatrix& b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), tol);
}

// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace

TEST(PureState, RejectsBadInput) {
  EXPECT_THROW(PureState(CVector::Ones(1)), std::invalid_argument);
  EXPECT_THROW(PureState(CVector::Ones(2)), std::invalid_argument);
  EXPECT_THROW(PureState::normalized(CVector::Zero(3)), std::invalid_argument);
  EXPECT_NO_THROW(PureState::normalized(CVector::Ones(3)));
}

TEST(DensityMatrix, RejectsInvalidMatrices) {
  CMatrix not_hermitian = CMatrix::Identity(2, 2) / 2.0;
  not_hermitian(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{not_hermitian}, std::invalid_argument);

  EXPECT_THROW(DensityMatrix{CMatrix::Identity(2, 2)}, std::invalid_argument);  // trace 2

  CMatrix negative(2, 2);
  negative << 1.5, 0.0, 0.0, -0.5;
  EXPECT_THROW(DensityMatrix{negative}, std::invalid_argument);

  EXPECT_THROW(DensityMatrix{CMatrix::Identity(2, 3)}, std::invalid_argument);
}

TEST(TargetOverlap, TrivialCases) {
  const auto phi = PureState::basis_vector(3, 0);
  const auto perp = PureState::basis_vector(3, 2);
  EXPECT_NEAR(target_overlap(DensityMatrix::from_pure(phi), phi), 1.0, 1e-12);
  EXPECT_NEAR(target_overlap(maximally_mixed(3), phi), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(target_overlap(DensityMatrix::from_pure(perp), phi), 0.0, 1e-12);

  Rng rng(11);
  const auto psi = haar_random_pure(5, rng);
  EXPECT_NEAR(target_overlap(maximally_mixed(5), psi), 0.2, 1e-12);
}

TEST(TargetOverlap, DimensionMismatchThrows) {
  EXPECT_THROW(target_overlap(maximally_mixed(2), PureState::basis_vector(3, 0)), DimensionError);
}

TEST(TargetOverlap, StaysInUnitInterval) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 6);
    const auto rho = random_density(d, rng, 1 + static_cast<std::size_t>(trial % 3));
    const double v = target_overlap(rho, haar_random_pure(d, rng));
    EXPECT_GE(v, -1e-12);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
}

TEST(MaximallyMixed, DiagonalAndTrace) {
  expect_matrix_near(maximally_mixed(2).matrix(), CMatrix::Identity(2, 2) * 0.5, 1e-15);
  expect_matrix_near(maximally_mixed(3).matrix(), CMatrix::Identity(3, 3) / 3.0, 1e-15);
  EXPECT_NEAR(maximally_mixed(5).matrix().trace().real(), 1.0, 1e-12);
  EXPECT_THROW(maximally_mixed(1), std::invalid_argument);
}

TEST(HsDistance, TrivialValues) {
  const auto a = DensityMatrix::from_pure(PureState::basis_vector(3, 0));
  const auto b = DensityMatrix::from_pure(PureState::basis_vector(3, 1));
  EXPECT_NEAR(hs_distance_sq(a, a), 0.0, 1e-15);
  EXPECT_NEAR(hs_distance_sq(a, b), 2.0, 1e-12);
  EXPECT_THROW(hs_distance_sq(a, maximally_mixed(2)), DimensionError);
}

TEST(HsDistance, DephasedFailureState) {
  // With a_i = |<i|f>|^2 and b_i = |<t|i>|^2 the distance between the
  // dephased failure state and |t><t| is 1 + sum a_i^2 - 2 sum a_i b_i. It
  // reduces to 2(1 - sum a_i b_i) only when the dephased state is pure.
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 5);
    const auto target_basis = OrthonormalBasis::computational(d);
    const auto phi1 = target_basis.state(0);
    const auto phi_perp = target_basis.state(1);
    const auto b = haar_random_basis(d, rng);
    const auto dephased = dephase_in_basis(phi_perp, b);
    double cross = 0.0;
    double purity = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double a = std::norm(b.state(i).inner(phi_perp));
      cross += a * std::norm(phi1.inner(b.state(i)));
      purity += a * a;
    }
    EXPECT_NEAR(hs_distance_sq(dephased, DensityMatrix::from_pure(phi1)), 1.0 + purity - 2.0 * cross, 1e-12);
  }
}

TEST(HsDistance, PureDephasedStateMatchesShortForm) {
  // Dephasing |phi_perp> in the target basis itself leaves it pure.
  const auto b = OrthonormalBasis::computational(4);
  const auto dephased = dephase_in_basis(b.state(1), b);
  EXPECT_NEAR(hs_distance_sq(dephased, DensityMatrix::from_pure(b.state(0))), 2.0 * (1.0 - 0.0), 1e-12);
}

TEST(Tensor, BasisVectorIndexConvention) {
  const auto v = tensor(PureState::basis_vector(2, 0), PureState::basis_vector(2, 1));
  ASSERT_EQ(v.dim(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(v[i]), i == 1 ? 1.0 : 0.0, 1e-15);

  const auto w = tensor(PureState::basis_vector(3, 2), PureState::basis_vector(2, 1));
  EXPECT_NEAR(std::abs(w[2 * 2 + 1]), 1.0, 1e-15);
}

TEST(Tensor, MaximallyMixedProduct) {
  expect_matrix_near(tensor(maximally_mixed(2), maximally_mixed(2)).matrix(),
                     maximally_mixed(4).matrix(), 1e-15);
}

TEST(Tensor, ProductOverlapIsSquare) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    const auto rho = random_density(d, rng);
    const auto phi = haar_random_pure(d, rng);
    // direct matrix computation on the product space
    const CVector pp = tensor(phi, phi).amplitudes();
    const CMatrix rr = tensor(rho, rho).matrix();
    const double direct = pp.dot(rr * pp).real();
    const double single = target_overlap(rho, phi);
    EXPECT_NEAR(direct, single * single, 1e-12);
  }
}

TEST(Tensor, Associative) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_density(2, rng);
    const auto b = random_density(3, rng);
    const auto c = random_density(2, rng);
    expect_matrix_near(tensor(tensor(a, b), c).matrix(), tensor(a, tensor(b, c)).matrix(), 1e-12);
    const auto x = haar_random_pure(2, rng);
    const auto y = haar_random_pure(3, rng);
    const auto z = haar_random_pure(2, rng);
    EXPECT_LE((tensor(tensor(x, y), z).amplitudes() - tensor(x, tensor(y, z)).amplitudes())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

TEST(TensorPower, MatchesRepeatedProduct) {
  Rng rng(4);
  const auto rho = random_density(2, rng);
  expect_matrix_near(tensor_power(rho, 3).matrix(), tensor(tensor(rho, rho), rho).matrix(), 1e-15);
  EXPECT_THROW(tensor_power(rho, 0), std::invalid_argument);
}

TEST(HaarRandomPure, UnitNormAndDeterministic) {
  Rng a(99);
  Rng b(99);
  for (std::size_t d = 2; d <= 9; ++d) {
    const auto x = haar_random_pure(d, a);
    const auto y = haar_random_pure(d, b);
    EXPECT_NEAR(x.amplitudes().norm(), 1.0, 1e-12);
    EXPECT_EQ(x.amplitudes(), y.amplitudes());
  }
  EXPECT_THROW(haar_random_pure(1, a), std::invalid_argument);
}

TEST(HaarRandomPure, FirstAndSecondMoments) {
  // E|<phi_1|psi>|^2 = 1/d and E <psi|n><k|psi> = 0 for n != k.
  constexpr int kSamples = 10000;
  for (std::size_t d : {2u, 3u, 5u}) {
    Rng rng(1000 + d);
    double sum = 0.0;
    double sum_sq = 0.0;
    Complex cross_sum{0.0, 0.0};
    double cross_sq = 0.0;
    for (int s = 0; s < kSamples; ++s) {
      const auto psi = haar_random_pure(d, rng);
      const double p = std::norm(psi[0]);
      sum += p;
      sum_sq += p * p;
      const Complex c = std::conj(psi[0]) * psi[1];  // <psi|0><1|psi>
      cross_sum += c;
      cross_sq += std::norm(c);
    }
    const double mean = sum / kSamples;
    const double se = std::sqrt((sum_sq / kSamples - mean * mean) / kSamples);
    EXPECT_LE(std::abs(mean - 1.0 / static_cast<double>(d)), 4.0 * se) << "d=" << d;

    const Complex cross_mean = cross_sum / static_cast<double>(kSamples);
    // per-component standard error, using E|c|^2 split evenly between parts
    const double cross_se = std::sqrt(cross_sq / kSamples / 2.0 / kSamples);
    EXPECT_LE(std::abs(cross_mean.real()), 4.0 * cross_se) << "d=" << d;
    EXPECT_LE(std::abs(cross_mean.imag()), 4.0 * cross_se) << "d=" << d;
  }
}

TEST(HaarRandomPure, UnitarilyInvariantByKolmogorovSmirnov) {
  constexpr std::size_t kSamples = 10000;
  constexpr std::size_t d = 3;
  Rng basis_rng(17);
  const auto u = haar_random_basis(d, basis_rng).matrix();
  const auto phi = PureState::basis_vector(d, 0);
  Rng rng(18);
  std::vector<double> plain;
  std::vector<double> rotated;
  for (std::size_t s = 0; s < kSamples; ++s) {
    plain.push_back(std::norm(phi.inner(haar_random_pure(d, rng))));
    const PureState psi = haar_random_pure(d, rng);
    rotated.push_back(std::norm(phi.amplitudes().dot(u * psi.amplitudes())));
  }
  // critical value at significance 0.001: sqrt(-ln(0.0005)/2) * sqrt(2/n)
  const double critical = std::sqrt(-std::log(0.0005) / 2.0) * std::sqrt(2.0 / kSamples);
  EXPECT_LT(ks_statistic(plain, rotated), critical);
}

TEST(QubitLikeDensity, LimitCases) {
  const auto psi = PureState::basis_vector(3, 0);
  const auto perp = PureState::basis_vector(3, 1);

  const auto pure = qubit_like_density({.p = 1.0, .gamma = {0.3, 0.4}, .psi = psi, .psi_perp = perp});
  expect_matrix_near(pure.matrix(), psi.projector(), 1e-15);

  const auto plus = qubit_like_density({.p = 0.5, .gamma = {1.0, 0.0}, .psi = psi, .psi_perp = perp});
  const auto plus_state = PureState::normalized(psi.amplitudes() + perp.amplitudes());
  expect_matrix_near(plus.matrix(), plus_state.projector(), 1e-15);

  const auto dephased = qubit_like_density({.p = 0.5, .gamma = {0.0, 0.0}, .psi = psi, .psi_perp = perp});
  expect_matrix_near(dephased.matrix(), 0.5 * (psi.projector() + perp.projector()), 1e-15);
}

TEST(QubitLikeDensity, CoherenceAndPurity) {
  Rng rng(31);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 4);
    const auto basis = haar_random_basis(d, rng);
    const auto psi = basis.state(0);
    const auto perp = basis.state(1);
    const double p = unif(rng);
    const Complex unit_gamma = std::polar(1.0, 2.0 * std::numbers::pi * unif(rng));

    const auto rho = qubit_like_density({.p = p, .gamma = unit_gamma, .psi = psi, .psi_perp = perp});
    EXPECT_NEAR(rho.purity(), 1.0, 1e-10);
    EXPECT_NEAR(target_overlap(rho, psi), p, 1e-12);
    EXPECT_NEAR(target_overlap(rho, perp), 1.0 - p, 1e-12);
    const Complex coherence = psi.amplitudes().dot(rho.matrix() * perp.amplitudes());
    EXPECT_NEAR(std::abs(coherence - unit_gamma * std::sqrt(p * (1.0 - p))), 0.0, 1e-12);

    const auto mixed = qubit_like_density({.p = p, .gamma = {0.0, 0.0}, .psi = psi, .psi_perp = perp});
    EXPECT_NEAR(mixed.purity(), p * p + (1.0 - p) * (1.0 - p), 1e-12);
  }
}

TEST(QubitLikeDensity, RejectsOutOfRange) {
  const auto psi = PureState::basis_vector(2, 0);
  const auto perp = PureState::basis_vector(2, 1);
  EXPECT_THROW(qubit_like_density({.p = 1.2, .psi = psi, .psi_perp = perp}), std::invalid_argument);
  EXPECT_THROW(qubit_like_density({.p = 0.5, .gamma = {0.9, 0.9}, .psi = psi, .psi_perp = perp}),
               std::invalid_argument);
  EXPECT_THROW(qubit_like_density({.p = 0.5, .psi = psi, .psi_perp = psi}), std::invalid_argument);
}

TEST(RandomDensity, SatisfiesInvariants) {
  Rng rng(2);
  for (std::size_t d = 2; d <= 8; ++d) {
    const auto rho = random_density(d, rng);
    EXPECT_LE(hermiticity_defect(rho.matrix()), 1e-12);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_LT(rho.purity(), 1.0);
  }
}
