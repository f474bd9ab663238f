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

#include "qsv/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace qsv {

Ket4 tensor(const Ket2& a, const Ket2& b) {
  Ket4 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) out[2 * i + j] = a[i] * b[j];
  return out;
}

Mat4 tensor(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

namespace {

template <std::size_t N>
Mat<N> outer_self(const Ket<N>& k) {
  if (norm(k) < NORM_TOL) throw InvalidArgument("projector of a zero vector");
  Mat<N> out;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) out(r, c) = k[r] * std::conj(k[c]);
  return out;
}

double off_diagonal_norm(const Mat4& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

}  // namespace

Mat2 projector(const Ket2& k) { return outer_self(k); }
Mat4 projector(const Ket4& k) { return outer_self(k); }

HermEigen herm_eigen(const Mat4& m) {
  if (!is_hermitian(m, HERM_TOL)) throw InvalidArgument("herm_eigen: matrix is not Hermitian");

  // Symmetrize so rounding noise below HERM_TOL cannot break the rotations.
  Mat4 a;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
  Mat4 v = Mat4::identity();

  const double scale = std::max(norm(a), 1e-300);
  for (int sweep = 0; sweep < 64 && off_diagonal_norm(a) > 1e-15 * scale; ++sweep) {
    for (std::size_t p = 0; p < 3; ++p) {
      for (std::size_t q = p + 1; q < 4; ++q) {
        const cplx g = a(p, q);
        const double mag = std::abs(g);
        if (mag < 1e-300) continue;
        // Remove the phase of a(p,q), then apply a real Givens rotation to the
        // resulting real symmetric 2x2 block.
        const cplx phase = g / mag;
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        Mat4 rot = Mat4::identity();
        rot(p, p) = c;
        rot(p, q) = s;
        rot(q, p) = -s * std::conj(phase);
        rot(q, q) = c * std::conj(phase);
        a = adjoint(rot) * a * rot;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        v = v * rot;
      }
    }
  }

  std::array<std::size_t, 4> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::real(a(i, i)) > std::real(a(j, j));
  });

  HermEigen out;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t col = order[k];
    out.values[k] = std::real(a(col, col));
    for (std::size_t r = 0; r < 4; ++r) out.vectors[k][r] = v(r, col);
  }
  return out;
}

double trace_product(const Mat4& a, const Mat4& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) s += std::real(a(i, k) * b(k, i));
  return s;
}

bool is_density_matrix(const Mat4& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  if (std::abs(trace(m) - 1.0) > tol) return false;
  return herm_eigen(m).values[3] >= -tol;
}

Mat2 partial_trace_first(const Mat4& m) {
  Mat2 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) out(i, j) = m(i, j) + m(2 + i, 2 + j);
  return out;
}

}  // namespace qsv
