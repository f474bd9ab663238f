// Copyright 2026 The qsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random quantum objects shared by the test suites.

#pragma once

#include <cmath>
#include <cstdint>

#include "qsv/linalg.hpp"
#include "qsv/rng.hpp"

namespace qsv::testing {

inline double gaussian(Rng& rng) {
  // Box-Muller on two 53-bit uniforms; u1 is kept away from 0.
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

inline Ket2 random_ket2(Rng& rng) {
  Ket2 k;
  for (auto& a : k.amp) a = cplx(gaussian(rng), gaussian(rng));
  return normalized(k);
}

inline Ket4 random_ket4(Rng& rng) {
  Ket4 k;
  for (auto& a : k.amp) a = cplx(gaussian(rng), gaussian(rng));
  return normalized(k);
}

inline Mat4 random_hermitian(Rng& rng) {
  Mat4 m;
  for (std::size_t r = 0; r < 4; ++r) {
    m(r, r) = gaussian(rng);
    for (std::size_t c = r + 1; c < 4; ++c) {
      m(r, c) = cplx(gaussian(rng), gaussian(rng));
      m(c, r) = std::conj(m(r, c));
    }
  }
  return m;
}

/// Mixture of 1-4 random pure states with random weights.
inline Mat4 random_density(Rng& rng) {
  const int rank = 1 + static_cast<int>(rng.next() % 4);
  std::array<double, 4> w{};
  double total = 0.0;
  for (int i = 0; i < rank; ++i) {
    w[i] = rng.uniform() + 1e-3;
    total += w[i];
  }
  Mat4 rho;
  for (int i = 0; i < rank; ++i) rho = rho + cplx(w[i] / total) * projector(random_ket4(rng));
  return rho;
}

/// Density matrix with the requested fidelity to psi: F|psi><psi| plus
/// (1-F) times a random state supported on the orthogonal complement.
inline Mat4 random_density_with_fidelity(Rng& rng, const Ket4& psi, double fidelity) {
  const Mat4 p = projector(psi);
  const Mat4 q = Mat4::identity() - p;
  Mat4 rest = q * random_density(rng) * q;
  const double t = trace(rest).real();
  rest = cplx(1.0 / t) * rest;
  return cplx(fidelity) * p + cplx(1.0 - fidelity) * rest;
}

inline double max_abs_diff(const Mat4& a, const Mat4& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 16; ++i) m = std::max(m, std::abs(a.m[i] - b.m[i]));
  return m;
}

/// Binomial tolerance: k standard deviations of the mean of n Bernoulli(p).
inline double binomial_sigma(double p, double n) { return std::sqrt(std::max(p * (1.0 - p), 1e-300) / n); }

}  // namespace qsv::testing
