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

#include "qsv/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qsv/error.hpp"

namespace qsv {

namespace {

constexpr std::array<Pauli, 3> kAxes{Pauli::X, Pauli::Y, Pauli::Z};
constexpr std::array<const char*, kTomoSettings> kLabels{"XX", "XY", "XZ", "YX", "YY",
                                                         "YZ", "ZX", "ZY", "ZZ"};

// Eigenvector of the given Pauli for the +1 (sign 0) or -1 (sign 1) eigenvalue.
Ket2 eigenket(Pauli p, int sign) {
  const double r = 1.0 / std::sqrt(2.0);
  const double s = sign == 0 ? 1.0 : -1.0;
  switch (p) {
    case Pauli::X: return Ket2{{cplx(r), cplx(s * r)}};
    case Pauli::Y: return Ket2{{cplx(r), cplx(0.0, s * r)}};
    case Pauli::Z: return sign == 0 ? Ket2{{cplx(1.0), cplx(0.0)}} : Ket2{{cplx(0.0), cplx(1.0)}};
    case Pauli::I: break;
  }
  throw InvalidArgument("identity has no measurement basis");
}

std::array<std::int64_t, kTomoOutcomes> sample_multinomial(std::int64_t n,
                                                           const std::array<double, kTomoOutcomes>& p,
                                                           Rng& rng) {
  std::array<std::int64_t, kTomoOutcomes> out{};
  double rest = 1.0;
  std::int64_t left = n;
  for (int k = 0; k < kTomoOutcomes - 1 && left > 0; ++k) {
    const double q = rest > 0.0 ? std::clamp(p[k] / rest, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::int64_t> bin(left, q);
    out[k] = bin(rng.engine());
    left -= out[k];
    rest -= p[k];
  }
  out[kTomoOutcomes - 1] += left;
  return out;
}

}  // namespace

std::int64_t TomoDataset::setting_total(int setting) const {
  std::int64_t t = 0;
  for (auto c : counts.at(setting)) t += c;
  return t;
}

const char* tomo_setting_label(int setting) { return kLabels.at(setting); }

Mat2 pauli(Pauli p) {
  Mat2 m;
  switch (p) {
    case Pauli::I: return Mat2::identity();
    case Pauli::X: m(0, 1) = 1.0; m(1, 0) = 1.0; return m;
    case Pauli::Y: m(0, 1) = cplx(0.0, -1.0); m(1, 0) = cplx(0.0, 1.0); return m;
    case Pauli::Z: m(0, 0) = 1.0; m(1, 1) = -1.0; return m;
  }
  return m;
}

std::array<double, kTomoOutcomes> tomo_outcome_probabilities(const Mat4& sigma, int setting) {
  if (setting < 0 || setting >= kTomoSettings) throw InvalidArgument("setting index out of range");
  const Pauli a = kAxes[setting / 3];
  const Pauli b = kAxes[setting % 3];
  std::array<double, kTomoOutcomes> p{};
  for (int sa = 0; sa < 2; ++sa)
    for (int sb = 0; sb < 2; ++sb) {
      const double v = expectation(sigma, tensor(eigenket(a, sa), eigenket(b, sb)));
      p[2 * sa + sb] = std::max(0.0, v);
    }
  return p;
}

TomoDataset simulate_tomography(const Mat4& sigma, std::int64_t n_copies, Rng& rng) {
  if (n_copies < kTomoSettings) throw InvalidArgument("tomography needs at least 9 copies");
  if (!is_density_matrix(sigma)) throw InvalidArgument("sigma is not a density matrix");
  TomoDataset data;
  data.copies_total = n_copies;
  const std::int64_t base = n_copies / kTomoSettings;
  const std::int64_t extra = n_copies % kTomoSettings;
  for (int s = 0; s < kTomoSettings; ++s) {
    const std::int64_t n = base + (s < extra ? 1 : 0);
    data.counts[s] = sample_multinomial(n, tomo_outcome_probabilities(sigma, s), rng);
  }
  return data;
}

PauliExpectations tomo_expectations(const TomoDataset& data) {
  PauliExpectations t{};
  t[0][0] = 1.0;
  std::array<double, 3> first_sum{};
  std::array<double, 3> second_sum{};
  std::array<std::int64_t, 3> first_n{};
  std::array<std::int64_t, 3> second_n{};
  for (int s = 0; s < kTomoSettings; ++s) {
    const std::int64_t n = data.setting_total(s);
    if (n <= 0) {
      throw InvalidArgument(std::string("tomography setting ") + kLabels[s] + " has no counts");
    }
    const auto& c = data.counts[s];
    const double pp = static_cast<double>(c[0]), pm = static_cast<double>(c[1]);
    const double mp = static_cast<double>(c[2]), mm = static_cast<double>(c[3]);
    const int i = s / 3;
    const int j = s % 3;
    t[i + 1][j + 1] = (pp - pm - mp + mm) / static_cast<double>(n);
    first_sum[i] += pp + pm - mp - mm;
    first_n[i] += n;
    second_sum[j] += pp - pm + mp - mm;
    second_n[j] += n;
  }
  for (int k = 0; k < 3; ++k) {
    t[k + 1][0] = first_sum[k] / static_cast<double>(first_n[k]);
    t[0][k + 1] = second_sum[k] / static_cast<double>(second_n[k]);
  }
  return t;
}

PauliExpectations exact_expectations(const Mat4& sigma) {
  PauliExpectations t{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      t[i][j] = trace_product(tensor(pauli(static_cast<Pauli>(i)), pauli(static_cast<Pauli>(j))), sigma);
  return t;
}

Mat4 linear_inversion(const PauliExpectations& t) {
  Mat4 rho;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      rho = rho + tensor(pauli(static_cast<Pauli>(i)), pauli(static_cast<Pauli>(j))) * cplx(t[i][j] / 4.0);
  return rho;
}

Mat4 project_to_density_matrix(const Mat4& m) {
  const Mat4 h = (m + adjoint(m)) * cplx(0.5);
  const HermEigen e = herm_eigen(h);
  double total = 0.0;
  for (double v : e.values) total += std::max(0.0, v);
  if (!(total > 0.0)) throw NumericalError("reconstruction has no positive spectrum");
  Mat4 out;
  for (int k = 0; k < 4; ++k) {
    const double w = std::max(0.0, e.values[k]) / total;
    if (w == 0.0) continue;
    out = out + projector(e.vectors[k]) * cplx(w);
  }
  return out;
}

Mat4 reconstruct(const TomoDataset& data) { return project_to_density_matrix(linear_inversion(tomo_expectations(data))); }

double fidelity(const Mat4& rho, const Ket4& psi) { return expectation(rho, psi); }

double fidelity_estimate(const TomoDataset& data, const Ket4& psi) {
  return fidelity(linear_inversion(tomo_expectations(data)), psi);
}

double tomo_confidence(double f, double df, double epsilon, TomoCase which) {
  if (!(df > 0.0)) throw InvalidArgument("dF must be positive");
  const double z = (f - (1.0 - epsilon)) / df;
  // Lower tail P(X <= 1 - eps) = Phi(-z); upper tail = Phi(z).
  const double lower = 0.5 * std::erfc(z / std::sqrt(2.0));
  const double upper = 0.5 * std::erfc(-z / std::sqrt(2.0));
  return which == TomoCase::case1 ? lower : upper;
}

double bootstrap_dF(const TomoDataset& data, const Ket4& psi, int n_resamples, Rng& rng) {
  if (n_resamples < 50) throw InvalidArgument("bootstrap needs at least 50 resamples");
  std::array<std::array<double, kTomoOutcomes>, kTomoSettings> freq{};
  for (int s = 0; s < kTomoSettings; ++s) {
    const std::int64_t n = data.setting_total(s);
    if (n <= 0) throw InvalidArgument(std::string("tomography setting ") + kLabels[s] + " has no counts");
    for (int k = 0; k < kTomoOutcomes; ++k) freq[s][k] = static_cast<double>(data.counts[s][k]) / static_cast<double>(n);
  }
  double sum = 0.0;
  double sum2 = 0.0;
  for (int r = 0; r < n_resamples; ++r) {
    TomoDataset re;
    re.copies_total = data.copies_total;
    for (int s = 0; s < kTomoSettings; ++s) re.counts[s] = sample_multinomial(data.setting_total(s), freq[s], rng);
    const double f = fidelity_estimate(re, psi);
    sum += f;
    sum2 += f * f;
  }
  const double n = static_cast<double>(n_resamples);
  const double var = std::max(0.0, (sum2 - sum * sum / n) / (n - 1.0));
  return std::sqrt(var);
}

}  // namespace qsv
