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

// Fixed-size complex linear algebra for one and two qubits.
//
// Basis order is fixed: (H, V) for a qubit and (HH, HV, VH, VV) for a pair,
// i.e. the first tensor factor is the most significant index.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "qsv/error.hpp"

namespace qsv {

using cplx = std::complex<double>;

inline constexpr double HERM_TOL = 1e-10;
inline constexpr double NORM_TOL = 1e-12;

template <std::size_t N>
struct Ket {
  std::array<cplx, N> amp{};

  cplx& operator[](std::size_t i) { return amp[i]; }
  const cplx& operator[](std::size_t i) const { return amp[i]; }
};

using Ket2 = Ket<2>;
using Ket4 = Ket<4>;

/// Dense row-major N x N complex matrix.
template <std::size_t N>
struct Mat {
  std::array<cplx, N * N> m{};

  cplx& operator()(std::size_t r, std::size_t c) { return m[r * N + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m[r * N + c]; }

  static Mat identity() {
    Mat out;
    for (std::size_t i = 0; i < N; ++i) out(i, i) = 1.0;
    return out;
  }
  static Mat diagonal(const std::array<double, N>& d) {
    Mat out;
    for (std::size_t i = 0; i < N; ++i) out(i, i) = d[i];
    return out;
  }
};

using Mat2 = Mat<2>;
using Mat4 = Mat<4>;

template <std::size_t N>
Mat<N> operator+(const Mat<N>& a, const Mat<N>& b) {
  Mat<N> out;
  for (std::size_t i = 0; i < N * N; ++i) out.m[i] = a.m[i] + b.m[i];
  return out;
}

template <std::size_t N>
Mat<N> operator-(const Mat<N>& a, const Mat<N>& b) {
  Mat<N> out;
  for (std::size_t i = 0; i < N * N; ++i) out.m[i] = a.m[i] - b.m[i];
  return out;
}

template <std::size_t N>
Mat<N> operator*(cplx s, const Mat<N>& a) {
  Mat<N> out;
  for (std::size_t i = 0; i < N * N; ++i) out.m[i] = s * a.m[i];
  return out;
}

template <std::size_t N>
Mat<N> operator*(const Mat<N>& a, cplx s) {
  return s * a;
}

template <std::size_t N>
Mat<N> operator*(const Mat<N>& a, const Mat<N>& b) {
  Mat<N> out;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t k = 0; k < N; ++k) {
      const cplx ark = a(r, k);
      for (std::size_t c = 0; c < N; ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

template <std::size_t N>
Ket<N> operator*(const Mat<N>& a, const Ket<N>& v) {
  Ket<N> out;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) out[r] += a(r, c) * v[c];
  return out;
}

template <std::size_t N>
Ket<N> operator*(cplx s, const Ket<N>& v) {
  Ket<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = s * v[i];
  return out;
}

template <std::size_t N>
Ket<N> operator+(const Ket<N>& a, const Ket<N>& b) {
  Ket<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + b[i];
  return out;
}

template <std::size_t N>
Ket<N> operator-(const Ket<N>& a, const Ket<N>& b) {
  Ket<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] - b[i];
  return out;
}

template <std::size_t N>
Mat<N> adjoint(const Mat<N>& a) {
  Mat<N> out;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) out(r, c) = std::conj(a(c, r));
  return out;
}

template <std::size_t N>
cplx trace(const Mat<N>& a) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < N; ++i) t += a(i, i);
  return t;
}

/// Frobenius norm.
template <std::size_t N>
double norm(const Mat<N>& a) {
  double s = 0.0;
  for (const auto& x : a.m) s += std::norm(x);
  return std::sqrt(s);
}

/// <a|b>, conjugate-linear in the first argument.
template <std::size_t N>
cplx inner(const Ket<N>& a, const Ket<N>& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

template <std::size_t N>
double norm(const Ket<N>& v) {
  return std::sqrt(std::real(inner(v, v)));
}

/// Scales to unit norm. Throws InvalidArgument for the zero vector.
template <std::size_t N>
Ket<N> normalized(const Ket<N>& v) {
  const double n = norm(v);
  if (n < NORM_TOL) throw InvalidArgument("cannot normalize a zero vector");
  return cplx(1.0 / n) * v;
}

/// <v|A|v>, real part only; A is assumed Hermitian.
template <std::size_t N>
double expectation(const Mat<N>& a, const Ket<N>& v) {
  return std::real(inner(v, a * v));
}

template <std::size_t N>
bool is_hermitian(const Mat<N>& a, double tol = HERM_TOL) {
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = r; c < N; ++c)
      if (std::abs(a(r, c) - std::conj(a(c, r))) > tol) return false;
  return true;
}

Ket4 tensor(const Ket2& a, const Ket2& b);
Mat4 tensor(const Mat2& a, const Mat2& b);

/// |k><k| for a normalized ket. Throws InvalidArgument for the zero vector.
Mat2 projector(const Ket2& k);
Mat4 projector(const Ket4& k);

struct HermEigen {
  std::array<double, 4> values{};  ///< descending
  std::array<Ket4, 4> vectors{};   ///< orthonormal, vectors[i] pairs with values[i]
};

/// Eigendecomposition of a 4x4 Hermitian matrix by cyclic complex Jacobi
/// rotations. Throws InvalidArgument if `m` is not Hermitian within HERM_TOL.
HermEigen herm_eigen(const Mat4& m);

/// Re tr(a b). Both operands are expected Hermitian, so the imaginary part
/// vanishes up to rounding.
double trace_product(const Mat4& a, const Mat4& b);

/// True if `m` is Hermitian, has unit trace and no eigenvalue below -tol.
bool is_density_matrix(const Mat4& m, double tol = HERM_TOL);

/// Partial trace over the first qubit.
Mat2 partial_trace_first(const Mat4& m);

}  // namespace qsv
