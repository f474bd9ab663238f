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

// Optimal two-qubit verification strategies.
//
// A strategy is a probability-weighted list of pass/fail tests whose
// pass operators all fix the target. Four families are provided:
// nonadaptive (four local projective tests), one-way adaptive (Alice's
// outcome selects Bob's basis), Bell (for the maximally entangled target)
// and product (for theta at 0 or pi/2).

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qsv/linalg.hpp"
#include "qsv/state.hpp"

namespace qsv {

enum class Family { nonadaptive, adaptive, bell, product };
enum class BellVariant { phi_plus, phi_minus };

const char* to_string(Family f);
Family family_from_string(const std::string& s);

/// A test whose pass event is a fixed two-qubit projector.
struct BinaryTest {
  Mat4 pass_projector;
  std::string label;
  double selection_probability = 0.0;
};

/// A test realised with feed-forward: Alice measures in `alice_basis`; on
/// outcome a, Bob passes iff his photon lands on `bob_accept[a]`. The two
/// accepted kets are in general not orthogonal.
struct AdaptiveTest {
  std::array<Ket2, 2> alice_basis;
  std::array<Ket2, 2> bob_accept;
  std::string label;
  double selection_probability = 0.0;

  /// sum_a |a><a| (x) |b_a><b_a|.
  Mat4 effective_projector() const;
};

using Test = std::variant<BinaryTest, AdaptiveTest>;

double selection_probability(const Test& t);
const std::string& label(const Test& t);
Mat4 pass_operator(const Test& t);

/// Analytic spectral data of a strategy operator. For the nonadaptive, Bell
/// and product families lambda4 == lambda2.
struct StrategySpectrum {
  double lambda2 = 0.0;
  double lambda4 = 0.0;
  double weight = 0.0;  ///< alpha(theta), beta(theta), 1/3 or 1 depending on family
  double delta_eps_coefficient = 1.0;  ///< 1 - lambda2
  Family family = Family::nonadaptive;
};

class Strategy {
 public:
  Strategy(Family family, TargetParams params, Frame frame, std::vector<Test> tests,
           StrategySpectrum spectrum);

  Family family() const { return family_; }
  const TargetParams& params() const { return params_; }
  Frame frame() const { return frame_; }
  const std::vector<Test>& tests() const { return tests_; }
  const StrategySpectrum& spectrum() const { return spectrum_; }
  const Ket4& target() const { return target_; }
  const VerifierBasis& basis() const { return basis_; }

  /// sum_l p_l M_l, assembled from the tests.
  const Mat4& operator_matrix() const { return omega_; }

 private:
  Family family_;
  TargetParams params_;
  Frame frame_;
  std::vector<Test> tests_;
  StrategySpectrum spectrum_;
  Ket4 target_;
  VerifierBasis basis_;
  Mat4 omega_;
};

/// Boundary distance used for family dispatch.
inline constexpr double kRegimeTol = 1e-9;

double nonadaptive_alpha(double theta);
double nonadaptive_lambda2(double theta);
double adaptive_beta(double theta);
double adaptive_lambda2(double theta);
double adaptive_lambda4(double theta);

/// Throws RegimeError unless theta is strictly inside (0, pi/4) or (pi/4, pi/2).
Strategy nonadaptive_strategy(const TargetParams& p, Frame frame);

/// Throws RegimeError unless theta is in (0, pi/4].
Strategy adaptive_strategy(const TargetParams& p, Frame frame);

/// phi_plus: (P+_XX + P-_YY + P+_ZZ)/3 for (|HH>+|VV>)/sqrt2.
/// phi_minus: the conjugated tests M1..M3 for (|HV>-|VH>)/sqrt2.
Strategy bell_strategy(BellVariant variant);

/// Single test |HV><HV| with probability 1.
Strategy product_strategy();

/// Family dispatch for an arbitrary target. The Bell family requires
/// theta = pi/4 (any phi in the experimental frame); the product family
/// requires theta at 0 or pi/2 and uses the target projector itself.
Strategy make_strategy(Family family, const TargetParams& p, Frame frame);

/// Recommended family for a target: bell at pi/4, product at the edges,
/// nonadaptive otherwise.
Family default_family(double theta);

/// Closed-form pass probability of sigma. Nonadaptive-type spectra use
/// lambda2 + (1-lambda2) F; the adaptive spectrum additionally subtracts
/// (lambda2 - lambda4) p4 with p4 = <vh|sigma|vh>.
double pass_probability(const StrategySpectrum& spectrum, const Mat4& sigma,
                        const VerifierBasis& basis);

/// Smallest N with (1 - (1-lambda2) eps)^N <= delta.
std::int64_t required_copies(double epsilon, double delta, const StrategySpectrum& spectrum);

/// ln(1/delta) / ((1-lambda2) eps).
double required_copies_approx(double epsilon, double delta, const StrategySpectrum& spectrum);

/// Worst-case single-copy failure probability (1-lambda2) eps.
double failure_probability(const StrategySpectrum& spectrum, double epsilon);

}  // namespace qsv
