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

#include "qsv/state.hpp"

#include <cmath>
#include <string>

namespace qsv {

void TargetParams::validate() const {
  if (!std::isfinite(theta) || theta < 0.0 || theta > kPi / 2)
    throw InvalidArgument("theta must lie in [0, pi/2], got " + std::to_string(theta));
  if (!std::isfinite(phi) || phi < 0.0 || phi >= 2 * kPi)
    throw InvalidArgument("phi must lie in [0, 2pi), got " + std::to_string(phi));
}

namespace kets {
Ket2 H() { return {{1.0, 0.0}}; }
Ket2 V() { return {{0.0, 1.0}}; }
Ket2 plus() { return {{M_SQRT1_2, M_SQRT1_2}}; }
Ket2 minus() { return {{-M_SQRT1_2, M_SQRT1_2}}; }
Ket2 R() { return {{cplx(0.0, M_SQRT1_2), M_SQRT1_2}}; }
Ket2 L() { return {{cplx(0.0, -M_SQRT1_2), M_SQRT1_2}}; }
}  // namespace kets

Ket4 make_target_theoretical(const TargetParams& p) {
  p.validate();
  return {{std::sin(p.theta), 0.0, 0.0, std::cos(p.theta)}};
}

Ket4 make_target_experimental(const TargetParams& p) {
  return frame_unitary(p.phi) * make_target_theoretical(p);
}

Ket4 make_target(const TargetParams& p, Frame frame) {
  return frame == Frame::theoretical ? make_target_theoretical(p) : make_target_experimental(p);
}

Mat2 frame_kappa(double phi) {
  Mat2 k;
  k(0, 1) = std::polar(1.0, phi);
  k(1, 0) = 1.0;
  return k;
}

Mat4 frame_unitary(double phi) { return tensor(Mat2::identity(), frame_kappa(phi)); }

VerifierBasis verifier_basis(const TargetParams& p, Frame frame) {
  p.validate();
  const double s = std::sin(p.theta);
  const double c = std::cos(p.theta);
  VerifierBasis b{
      .psi = {{s, 0.0, 0.0, c}},
      .psi_perp = {{c, 0.0, 0.0, -s}},
      .hv = {{0.0, 1.0, 0.0, 0.0}},
      .vh = {{0.0, 0.0, 1.0, 0.0}},
  };
  if (frame == Frame::experimental) {
    const Mat4 u = frame_unitary(p.phi);
    b.psi = u * b.psi;
    b.psi_perp = u * b.psi_perp;
    b.hv = u * b.hv;
    b.vh = u * b.vh;
  }
  return b;
}

}  // namespace qsv
