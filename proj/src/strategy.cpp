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

#include "qsv/strategy.hpp"

#include <cmath>
#include <numeric>

namespace qsv {

const char* to_string(Family f) {
  switch (f) {
    case Family::nonadaptive: return "nonadaptive";
    case Family::adaptive: return "adaptive";
    case Family::bell: return "bell";
    case Family::product: return "product";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  if (s == "nonadaptive") return Family::nonadaptive;
  if (s == "adaptive") return Family::adaptive;
  if (s == "bell") return Family::bell;
  if (s == "product") return Family::product;
  throw InvalidArgument("unknown strategy family '" + s + "'");
}

Mat4 AdaptiveTest::effective_projector() const {
  return tensor(projector(alice_basis[0]), projector(bob_accept[0])) +
         tensor(projector(alice_basis[1]), projector(bob_accept[1]));
}

double selection_probability(const Test& t) {
  return std::visit([](const auto& x) { return x.selection_probability; }, t);
}

const std::string& label(const Test& t) {
  return std::visit([](const auto& x) -> const std::string& { return x.label; }, t);
}

Mat4 pass_operator(const Test& t) {
  if (const auto* b = std::get_if<BinaryTest>(&t)) return b->pass_projector;
  return std::get<AdaptiveTest>(t).effective_projector();
}

Strategy::Strategy(Family family, TargetParams params, Frame frame, std::vector<Test> tests,
                   StrategySpectrum spectrum)
    : family_(family),
      params_(params),
      frame_(frame),
      tests_(std::move(tests)),
      spectrum_(spectrum),
      target_(make_target(params, frame)),
      basis_(verifier_basis(params, frame)) {
  double total = 0.0;
  for (const auto& t : tests_) {
    total += selection_probability(t);
    omega_ = omega_ + cplx(selection_probability(t)) * pass_operator(t);
  }
  if (std::abs(total - 1.0) > NORM_TOL)
    throw NumericalError("strategy selection probabilities do not sum to 1");
}

double nonadaptive_alpha(double theta) {
  const double s2 = std::sin(2 * theta);
  return (2 - s2) / (4 + s2);
}

double nonadaptive_lambda2(double theta) {
  const double s2 = std::sin(2 * theta);
  return (2 + s2) / (4 + s2);
}

double adaptive_beta(double theta) {
  const double c2 = std::cos(theta) * std::cos(theta);
  return c2 / (1 + c2);
}

double adaptive_lambda2(double theta) { return adaptive_beta(theta); }

double adaptive_lambda4(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return s * s / (1 + c * c);
}

namespace {

bool near(double a, double b) { return std::abs(a - b) < kRegimeTol; }

Mat4 zz_plus() {
  return projector(tensor(kets::H(), kets::H())) + projector(tensor(kets::V(), kets::V()));
}

// |H><H| (x) |V><V| + |V><V| (x) |H><H|: P+_ZZ mapped into the experimental frame.
Mat4 hv_vh() {
  return projector(tensor(kets::H(), kets::V())) + projector(tensor(kets::V(), kets::H()));
}

Ket2 qubit(cplx h, cplx v) { return {{h, v}}; }

Mat4 conjugate(const Mat4& u, const Mat4& m) { return u * m * adjoint(u); }

}  // namespace

Strategy nonadaptive_strategy(const TargetParams& p, Frame frame) {
  p.validate();
  const double th = p.theta;
  if (th < kRegimeTol || near(th, kPi / 2))
    throw RegimeError("nonadaptive strategy undefined at a product target; use the product family");
  if (near(th, kPi / 4))
    throw RegimeError("nonadaptive strategy is not optimal at theta = pi/4; use the bell family");

  const double a = 1.0 / std::sqrt(1.0 + std::tan(th));
  const double b = 1.0 / std::sqrt(1.0 + 1.0 / std::tan(th));
  const double alpha = nonadaptive_alpha(th);
  const double rest = (1.0 - alpha) / 3.0;

  // Phases of the V amplitude of u_k and v_k in the theoretical frame.
  constexpr std::array<double, 3> u_phase{2 * kPi / 3, 4 * kPi / 3, 0.0};
  constexpr std::array<double, 3> v_phase{kPi / 3, 5 * kPi / 3, kPi};

  std::vector<Test> tests;
  tests.emplace_back(BinaryTest{frame == Frame::theoretical ? zz_plus() : hv_vh(), "P0", alpha});
  for (std::size_t k = 0; k < 3; ++k) {
    const Ket2 u = qubit(a, std::polar(b, u_phase[k]));
    // kappa maps a|H> + c|V> to a|V> + e^{i phi} c|H>.
    const Ket2 v = frame == Frame::theoretical
                       ? qubit(a, std::polar(b, v_phase[k]))
                       : qubit(std::polar(b, v_phase[k] + p.phi), a);
    const Mat4 pass = Mat4::identity() - tensor(projector(u), projector(v));
    tests.emplace_back(BinaryTest{pass, "P" + std::to_string(k + 1), rest});
  }
  const double l2 = nonadaptive_lambda2(th);
  return Strategy(Family::nonadaptive, p, frame, std::move(tests),
                  StrategySpectrum{l2, l2, alpha, 1.0 - l2, Family::nonadaptive});
}

Strategy adaptive_strategy(const TargetParams& p, Frame frame) {
  p.validate();
  const double th = p.theta;
  if (th < kRegimeTol || th > kPi / 4 + kRegimeTol)
    throw RegimeError("adaptive strategy requires theta in (0, pi/4]");

  const double c = std::cos(th);
  const double s = std::sin(th);
  const cplx i(0.0, 1.0);
  const double beta = adaptive_beta(th);
  const double rest = (1.0 - beta) / 2.0;

  // v+- = cos|V> +- sin|H>, w+- = cos|V> -+ i sin|H>; the experimental frame
  // applies kappa, giving e^{i phi} cos|H> + ... |V>.
  auto bob = [&](cplx sin_part) -> Ket2 {
    if (frame == Frame::theoretical) return qubit(sin_part, c);
    return qubit(std::polar(c, p.phi), sin_part);
  };

  std::vector<Test> tests;
  tests.emplace_back(BinaryTest{frame == Frame::theoretical ? zz_plus() : hv_vh(), "T0", beta});
  tests.emplace_back(AdaptiveTest{{kets::plus(), kets::minus()}, {bob(s), bob(-s)}, "T1", rest});
  tests.emplace_back(AdaptiveTest{{kets::R(), kets::L()}, {bob(-i * s), bob(i * s)}, "T2", rest});

  return Strategy(Family::adaptive, p, frame, std::move(tests),
                  StrategySpectrum{adaptive_lambda2(th), adaptive_lambda4(th), beta,
                                   1.0 - adaptive_lambda2(th), Family::adaptive});
}

namespace {

Mat2 pauli_x() {
  Mat2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}
Mat2 pauli_y() {
  Mat2 m;
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}
Mat2 pauli_z() { return Mat2::diagonal({1.0, -1.0}); }

std::vector<Test> bell_plus_tests() {
  const Mat4 id = Mat4::identity();
  const Mat4 xx = tensor(pauli_x(), pauli_x());
  const Mat4 yy = tensor(pauli_y(), pauli_y());
  const Mat4 zz = tensor(pauli_z(), pauli_z());
  return {BinaryTest{cplx(0.5) * (id + xx), "XX+", 1.0 / 3},
          BinaryTest{cplx(0.5) * (id - yy), "YY-", 1.0 / 3},
          BinaryTest{cplx(0.5) * (id + zz), "ZZ+", 1.0 / 3}};
}

StrategySpectrum bell_spectrum() {
  return {1.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3, Family::bell};
}

StrategySpectrum product_spectrum() { return {0.0, 0.0, 1.0, 1.0, Family::product}; }

}  // namespace

Strategy bell_strategy(BellVariant variant) {
  if (variant == BellVariant::phi_plus)
    return Strategy(Family::bell, {kPi / 4, 0.0}, Frame::theoretical, bell_plus_tests(),
                    bell_spectrum());

  const auto pp = [](const Ket2& a, const Ket2& b) { return tensor(projector(a), projector(b)); };
  std::vector<Test> tests{
      BinaryTest{pp(kets::minus(), kets::plus()) + pp(kets::plus(), kets::minus()), "M1", 1.0 / 3},
      BinaryTest{pp(kets::L(), kets::R()) + pp(kets::R(), kets::L()), "M2", 1.0 / 3},
      BinaryTest{pp(kets::H(), kets::V()) + pp(kets::V(), kets::H()), "M3", 1.0 / 3}};
  return Strategy(Family::bell, {kPi / 4, kPi}, Frame::experimental, std::move(tests),
                  bell_spectrum());
}

Strategy product_strategy() {
  return Strategy(Family::product, {kPi / 2, 0.0}, Frame::experimental,
                  {BinaryTest{projector(tensor(kets::H(), kets::V())), "HV", 1.0}},
                  product_spectrum());
}

Family default_family(double theta) {
  if (theta < kRegimeTol || near(theta, kPi / 2)) return Family::product;
  if (near(theta, kPi / 4)) return Family::bell;
  return Family::nonadaptive;
}

Strategy make_strategy(Family family, const TargetParams& p, Frame frame) {
  p.validate();
  switch (family) {
    case Family::nonadaptive: return nonadaptive_strategy(p, frame);
    case Family::adaptive: return adaptive_strategy(p, frame);
    case Family::bell: {
      if (!near(p.theta, kPi / 4)) throw RegimeError("bell family requires theta = pi/4");
      const TargetParams exact{kPi / 4, frame == Frame::theoretical ? 0.0 : p.phi};
      if (frame == Frame::theoretical) return bell_strategy(BellVariant::phi_plus);
      // Lemma: conjugating an optimal strategy by a local unitary gives the
      // optimal strategy for the rotated target.
      const Mat4 u = frame_unitary(p.phi);
      std::vector<Test> tests;
      for (auto& t : bell_plus_tests()) {
        auto& b = std::get<BinaryTest>(t);
        tests.emplace_back(BinaryTest{conjugate(u, b.pass_projector), b.label, b.selection_probability});
      }
      return Strategy(Family::bell, exact, frame, std::move(tests), bell_spectrum());
    }
    case Family::product: {
      if (!(p.theta < kRegimeTol || near(p.theta, kPi / 2)))
        throw RegimeError("product family requires theta = 0 or pi/2");
      const TargetParams exact{p.theta < kRegimeTol ? 0.0 : kPi / 2, p.phi};
      Ket4 target = make_target(exact, frame);
      for (auto& x : target.amp)
        if (std::abs(x) < 1e-12) x = 0.0;
      target = normalized(target);
      return Strategy(Family::product, exact, frame,
                      {BinaryTest{projector(target), "target", 1.0}}, product_spectrum());
    }
  }
  throw InvalidArgument("unknown family");
}

double pass_probability(const StrategySpectrum& spectrum, const Mat4& sigma,
                        const VerifierBasis& basis) {
  if (!is_density_matrix(sigma)) throw InvalidArgument("pass_probability: sigma is not a density matrix");
  const double fidelity = expectation(sigma, basis.psi);
  const double eps = 1.0 - fidelity;
  const double base = 1.0 - (1.0 - spectrum.lambda2) * eps;
  if (spectrum.family != Family::adaptive) return base;
  const double p4 = expectation(sigma, basis.vh);
  return base - (spectrum.lambda2 - spectrum.lambda4) * p4;
}

namespace {
void check_eps_delta(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
}
}  // namespace

std::int64_t required_copies(double epsilon, double delta, const StrategySpectrum& spectrum) {
  check_eps_delta(epsilon, delta);
  const double fail = (1.0 - spectrum.lambda2) * epsilon;
  if (fail >= 1.0) throw InvalidArgument("required_copies: (1 - lambda2) * epsilon must be < 1");
  return static_cast<std::int64_t>(std::ceil(std::log(delta) / std::log1p(-fail)));
}

double required_copies_approx(double epsilon, double delta, const StrategySpectrum& spectrum) {
  check_eps_delta(epsilon, delta);
  return std::log(1.0 / delta) / ((1.0 - spectrum.lambda2) * epsilon);
}

double failure_probability(const StrategySpectrum& spectrum, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in [0, 1]");
  return (1.0 - spectrum.lambda2) * epsilon;
}

}  // namespace qsv
