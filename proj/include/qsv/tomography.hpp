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

// Nine-setting two-qubit state tomography used as a baseline against verification.

#pragma once

#include <array>
#include <cstdint>

#include "qsv/linalg.hpp"
#include "qsv/rng.hpp"

namespace qsv {

enum class Pauli { I, X, Y, Z };

/// Settings are (first, second) in {X, Y, Z}^2, indexed 3*first + second with
/// X=0, Y=1, Z=2. Outcomes are (first sign, second sign) indexed ++, +-, -+, --.
inline constexpr int kTomoSettings = 9;
inline constexpr int kTomoOutcomes = 4;

struct TomoDataset {
  std::array<std::array<std::int64_t, kTomoOutcomes>, kTomoSettings> counts{};
  std::int64_t copies_total = 0;

  std::int64_t setting_total(int setting) const;
};

/// Label such as "XZ" for a setting index.
const char* tomo_setting_label(int setting);

Mat2 pauli(Pauli p);

/// Born-rule outcome probabilities of one setting.
std::array<double, kTomoOutcomes> tomo_outcome_probabilities(const Mat4& sigma, int setting);

/// Allocates n_copies evenly over the nine settings (remainder to the earliest)
/// and samples outcomes multinomially. Requires n_copies >= 9.
TomoDataset simulate_tomography(const Mat4& sigma, std::int64_t n_copies, Rng& rng);

/// Two-qubit Pauli expectations T(mu, nu), mu, nu in {I, X, Y, Z}, T(I, I) = 1.
/// Single-party terms pool the marginals of the three settings that share the basis.
using PauliExpectations = std::array<std::array<double, 4>, 4>;
PauliExpectations tomo_expectations(const TomoDataset& data);

/// Exact expectations of sigma (useful as a noiseless dataset).
PauliExpectations exact_expectations(const Mat4& sigma);

/// rho = 1/4 sum T(mu, nu) sigma_mu (x) sigma_nu, without physicality projection.
Mat4 linear_inversion(const PauliExpectations& t);

/// Clips negative eigenvalues and renormalises the trace to 1.
Mat4 project_to_density_matrix(const Mat4& m);

/// Linear inversion followed by physicality projection. Throws
/// InvalidArgument if any setting has no counts.
Mat4 reconstruct(const TomoDataset& data);

/// <psi| rho |psi>.
double fidelity(const Mat4& rho, const Ket4& psi);

/// Fidelity read from the linear-inversion estimate before physicality
/// projection. Linear in the counts, hence unbiased; clipping would bias a
/// near-pure state downwards by the positive part of the noise spectrum.
double fidelity_estimate(const TomoDataset& data, const Ket4& psi);

enum class TomoCase { case1, case2 };

/// Gaussian tail of Normal(F, dF) relative to 1 - epsilon. case1: mass at or
/// below 1 - epsilon; case2: mass at or above it.
double tomo_confidence(double f, double df, double epsilon, TomoCase which = TomoCase::case1);

/// Standard deviation of fidelity_estimate over multinomial
/// resamples of each setting's counts. Requires n_resamples >= 50.
double bootstrap_dF(const TomoDataset& data, const Ket4& psi, int n_resamples, Rng& rng);

}  // namespace qsv
