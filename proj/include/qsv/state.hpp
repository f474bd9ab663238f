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

#pragma once

#include "qsv/linalg.hpp"

namespace qsv {

inline constexpr double kPi = 3.14159265358979323846;

enum class Frame { theoretical, experimental };

/// Target family parameters. theta in [0, pi/2], phi in [0, 2pi).
/// phi only enters the experimental frame.
struct TargetParams {
  double theta = 0.0;
  double phi = 0.0;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
};

/// sin(theta)|HH> + cos(theta)|VV>.
Ket4 make_target_theoretical(const TargetParams& p);

/// sin(theta)|HV> + e^{i phi} cos(theta)|VH>.
Ket4 make_target_experimental(const TargetParams& p);

Ket4 make_target(const TargetParams& p, Frame frame);

/// The single-qubit part acting on the second photon: [[0, e^{i phi}], [1, 0]].
Mat2 frame_kappa(double phi);

/// I (x) kappa(phi); maps the theoretical frame onto the experimental one.
Mat4 frame_unitary(double phi);

/// Orthonormal basis in which every strategy operator is diagonal.
struct VerifierBasis {
  Ket4 psi;
  Ket4 psi_perp;
  Ket4 hv;
  Ket4 vh;

  std::array<Ket4, 4> as_array() const { return {psi, psi_perp, hv, vh}; }
};

/// In the experimental frame each vector is the theoretical one mapped through
/// frame_unitary(phi).
VerifierBasis verifier_basis(const TargetParams& p, Frame frame);

/// Single-qubit kets used throughout. |+>, |->, |R>, |L> follow the
/// (|V> +- ...)/sqrt2 convention.
namespace kets {
Ket2 H();
Ket2 V();
Ket2 plus();
Ket2 minus();
Ket2 R();
Ket2 L();
}  // namespace kets

}  // namespace qsv
