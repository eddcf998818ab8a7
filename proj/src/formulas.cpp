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

#include "qsteer/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qsteer::formulas {
namespace {

void require_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << name << " = " << x << " outside [0, 1]";
    throw std::invalid_argument(os.str());
  }
}

void require_dim(std::size_t d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
}

double ipow(double base, std::size_t exp) {
  double out = 1.0;
  while (exp > 0) {
    if (exp & 1U) out *= base;
    base *= base;
    exp >>= 1U;
  }
  return out;
}

double space_dim(std::size_t d, std::size_t dim_scale) {
  return ipow(static_cast<double>(d), dim_scale);
}

void require_target_count(std::size_t m, double dim) {
  if (m < 1 || static_cast<double>(m) > dim) {
    std::ostringstream os;
    os << "target count m = " << m << " outside [1, " << dim << "]";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

double ps_2d(double theta, double q_perp, std::size_t n) {
  require_unit_interval(q_perp, "q_perp");
  const double s = std::sin(2.0 * theta);
  return 1.0 - q_perp * ipow(1.0 - 0.5 * s * s, n);
}

double ps_2d_max(double q_perp, std::size_t n) {
  require_unit_interval(q_perp, "q_perp");
  return 1.0 - q_perp * ipow(0.5, n);
}

double ps_mub(std::size_t d, double overlap, std::size_t n) {
  require_dim(d);
  require_unit_interval(overlap, "overlap");
  return 1.0 - (1.0 - overlap) * ipow(1.0 - 1.0 / static_cast<double>(d), n);
}

double ps_mub_asymptotic(std::size_t d, double overlap, std::size_t n) {
  require_dim(d);
  require_unit_interval(overlap, "overlap");
  return 1.0 - (1.0 - overlap) * std::exp(-static_cast<double>(n) / static_cast<double>(d));
}

double avg_ps(std::size_t d, std::size_t n, std::size_t m, std::size_t dim_scale) {
  require_dim(d);
  if (dim_scale < 1) throw std::invalid_argument("dim_scale must be at least 1");
  const double dim = space_dim(d, dim_scale);
  require_target_count(m, dim);
  return 1.0 - ipow(1.0 - static_cast<double>(m) / dim, n + 1);
}

double avg_ps_large_n(std::size_t d, std::size_t n, std::size_t m, std::size_t dim_scale) {
  require_dim(d);
  if (dim_scale < 1) throw std::invalid_argument("dim_scale must be at least 1");
  const double dim = space_dim(d, dim_scale);
  require_target_count(m, dim);
  return 1.0 - std::exp(-static_cast<double>(m) * static_cast<double>(n + 1) / dim);
}

double ps_multi_target(std::size_t d, std::size_t m, double target_mass, std::size_t n) {
  require_dim(d);
  require_target_count(m, static_cast<double>(d));
  require_unit_interval(target_mass, "target_mass");
  return 1.0 - (1.0 - target_mass) *
                   ipow(1.0 - static_cast<double>(m) / static_cast<double>(d), n);
}

double ps_copies(std::size_t d, std::size_t l, std::size_t m, std::span<const double> overlaps,
                 std::size_t n) {
  require_dim(d);
  if (l < 1) throw std::invalid_argument("copy count l must be at least 1");
  const double dim = space_dim(d, l);
  require_target_count(m, dim);
  if (overlaps.size() != m) {
    throw std::invalid_argument("ps_copies: need one overlap per target");
  }
  double mass = 0.0;
  for (double o : overlaps) {
    require_unit_interval(o, "overlap");
    mass += ipow(o, l);
  }
  if (mass > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "ps_copies: target mass " << mass << " exceeds 1";
    throw std::invalid_argument(os.str());
  }
  mass = std::min(mass, 1.0);
  return 1.0 - (1.0 - mass) * ipow(1.0 - static_cast<double>(m) / dim, n);
}

void validate(const BipartiteTargetSpec& spec) {
  require_dim(spec.d);
  const double norm = std::norm(spec.alpha) + std::norm(spec.beta);
  if (std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "bipartite target: |alpha|^2 + |beta|^2 = " << norm << ", not 1";
    throw std::invalid_argument(os.str());
  }
  if (spec.psi.dim() != spec.d || spec.psi_perp.dim() != spec.d) {
    throw std::invalid_argument("bipartite target: psi pair dimension differs from d");
  }
  if (std::abs(spec.psi.inner(spec.psi_perp)) > 1e-12) {
    throw std::invalid_argument("bipartite target: psi and psi_perp are not orthogonal");
  }
}

PureState bipartite_target(const BipartiteTargetSpec& spec) {
  validate(spec);
  const CVector a = tensor(spec.psi, spec.psi_perp).amplitudes();
  const CVector b = tensor(spec.psi_perp, spec.psi).amplitudes();
  return PureState::normalized(spec.alpha * a + spec.beta * b);
}

double bipartite_overlap(const BipartiteTargetSpec& spec, double p, Complex gamma) {
  validate(spec);
  require_unit_interval(p, "p");
  if (std::abs(gamma) > 1.0 + 1e-15) throw std::invalid_argument("|gamma| exceeds 1");
  const double cross = (spec.alpha * std::conj(spec.beta)).real();
  return p * (1.0 - p) * (1.0 + 2.0 * cross * std::norm(gamma));
}

double ps_bipartite(const BipartiteTargetSpec& spec, double p, Complex gamma, std::size_t n) {
  const double first = bipartite_overlap(spec, p, gamma);
  const double dd = static_cast<double>(spec.d) * static_cast<double>(spec.d);
  return 1.0 - (1.0 - first) * ipow(1.0 - 1.0 / dd, n);
}

double ps_bipartite_bound(const BipartiteTargetSpec& spec, Complex gamma, std::size_t n) {
  return ps_bipartite(spec, 0.5, gamma, n);
}

}  // namespace qsteer::formulas
