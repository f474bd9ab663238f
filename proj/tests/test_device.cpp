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

#include <doctest.h>

#include <sstream>

#include "qsv/device.hpp"
#include "qsv/error.hpp"
#include "test_util.hpp"

using namespace qsv;
using qsv::testing::binomial_sigma;
using qsv::testing::max_abs_diff;

namespace {

const TargetParams kK2{0.6419, 3.2034};

double fidelity_of(const Mat4& sigma, const Ket4& psi) { return expectation(sigma, psi); }

}  // namespace

TEST_CASE("device models emit the requested states") {
  const auto s = nonadaptive_strategy(kK2, Frame::experimental);
  const auto& b = s.basis();

  const Mat4 exact = emit_state(DeviceModel::exact_target(), b);
  CHECK(max_abs_diff(exact, projector(b.psi)) < 1e-15);

  const Mat4 f = emit_state(DeviceModel::from_fidelity(0.9964), b);
  CHECK(is_density_matrix(f));
  CHECK(fidelity_of(f, b.psi) == doctest::Approx(0.9964).epsilon(1e-12));
  CHECK(expectation(f, b.vh) == doctest::Approx(0.0012).epsilon(1e-12));

  const Mat4 g = emit_state(DeviceModel::from_fidelity(0.99, 0.004), b);
  CHECK(expectation(g, b.vh) == doctest::Approx(0.004).epsilon(1e-12));
  CHECK(expectation(g, b.hv) == doctest::Approx(0.003).epsilon(1e-12));
  CHECK(expectation(g, b.psi_perp) == doctest::Approx(0.003).epsilon(1e-12));

  const Mat4 m = emit_state(DeviceModel::diagonal_mixture({0.97, 0.01, 0.01, 0.01}), b);
  CHECK(fidelity_of(m, b.psi) == doctest::Approx(0.97).epsilon(1e-12));

  for (double v : {0.0, 0.3, 0.9, 1.0}) {
    const Mat4 w = emit_state(DeviceModel::werner(v), b);
    CHECK(is_density_matrix(w));
    CHECK(fidelity_of(w, b.psi) == doctest::Approx((1 + 3 * v) / 4).epsilon(1e-12));
  }

  Rng rng(41);
  const Mat4 rho = testing::random_density(rng);
  CHECK(max_abs_diff(emit_state(DeviceModel::explicit_state(rho), b), rho) == 0.0);
}

TEST_CASE("device validation") {
  CHECK_THROWS_AS(DeviceModel::from_fidelity(1.2), InvalidArgument);
  CHECK_THROWS_AS(DeviceModel::from_fidelity(0.99, 0.02), InvalidArgument);
  CHECK_THROWS_AS(DeviceModel::diagonal_mixture({0.5, 0.2, 0.2, 0.2}), InvalidArgument);
  CHECK_THROWS_AS(DeviceModel::diagonal_mixture({1.1, -0.1, 0.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(DeviceModel::werner(-0.1), InvalidArgument);
  CHECK_THROWS_AS(DeviceModel::explicit_state(Mat4::diagonal({2, -1, 0, 0})), InvalidArgument);
  CHECK_THROWS_AS(DeviceModel::exact_target().with_eom_flip(1.5), InvalidArgument);
}

TEST_CASE("setting frequencies follow the selection probabilities") {
  const auto s = nonadaptive_strategy(kK2, Frame::experimental);
  Rng rng(42);
  const int n = 200000;
  std::array<int, 4> counts{};
  for (int i = 0; i < n; ++i) ++counts[sample_setting(s, rng)];
  for (int k = 0; k < 4; ++k) {
    const double p = selection_probability(s.tests()[k]);
    CHECK(std::abs(counts[k] / double(n) - p) < 4 * binomial_sigma(p, n));
  }
}

TEST_CASE("fixed-projector measurement frequency matches the Born rule") {
  const auto s = nonadaptive_strategy(kK2, Frame::experimental);
  Rng rng(43);
  const Mat4 sigma = testing::random_density(rng);
  const int n = 100000;
  for (const auto& t : s.tests()) {
    const auto& b = std::get<BinaryTest>(t);
    const double p = trace_product(b.pass_projector, sigma);
    int passes = 0;
    for (int i = 0; i < n; ++i) passes += measure_nonadaptive(sigma, b, rng) ? 1 : 0;
    CHECK(std::abs(passes / double(n) - p) < 4 * binomial_sigma(p, n));
  }
}

TEST_CASE("two-stage adaptive sampling matches the effective projector") {
  const auto s = adaptive_strategy(kK2, Frame::experimental);
  Rng rng(44);
  const int n = 100000;
  for (int trial = 0; trial < 3; ++trial) {
    const Mat4 sigma = testing::random_density(rng);
    for (std::size_t k = 1; k < s.tests().size(); ++k) {
      const auto& t = std::get<AdaptiveTest>(s.tests()[k]);
      const double p = trace_product(t.effective_projector(), sigma);
      const double a0 = trace_product(tensor(projector(t.alice_basis[0]), Mat2::identity()), sigma);
      int passes = 0, alice0 = 0;
      for (int i = 0; i < n; ++i) {
        const auto o = measure_adaptive(sigma, t, rng);
        passes += o.passed ? 1 : 0;
        alice0 += o.alice == 0 ? 1 : 0;
      }
      CHECK(std::abs(passes / double(n) - p) < 4 * binomial_sigma(p, n));
      CHECK(std::abs(alice0 / double(n) - a0) < 4 * binomial_sigma(a0, n));
    }
  }
}

TEST_CASE("adaptive sampling on a state with a zero-probability Alice outcome") {
  const auto s = adaptive_strategy({kPi / 8, 0.0}, Frame::theoretical);
  const auto& t = std::get<AdaptiveTest>(s.tests()[1]);
  const Mat4 sigma = projector(tensor(t.alice_basis[0], kets::H()));
  Rng rng(45);
  for (int i = 0; i < 1000; ++i) CHECK(measure_adaptive(sigma, t, rng).alice == 0);
}

TEST_CASE("simulator pass probability equals tr(Omega sigma)") {
  Rng rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat4 rho = testing::random_density(rng);
    for (const auto& s : {nonadaptive_strategy(kK2, Frame::experimental), adaptive_strategy(kK2, Frame::experimental)}) {
      const CopySimulator sim(s, DeviceModel::explicit_state(rho));
      CHECK(sim.pass_probability() == doctest::Approx(trace_product(s.operator_matrix(), rho)).epsilon(1e-12));
    }
  }
}

TEST_CASE("EOM flip applies only to the adaptive family") {
  const auto model = DeviceModel::from_fidelity(0.9964).with_eom_flip(0.01);
  const auto n = nonadaptive_strategy(kK2, Frame::experimental);
  const auto a = adaptive_strategy(kK2, Frame::experimental);
  const auto& bn = n.basis();
  const auto& ba = a.basis();
  CHECK(CopySimulator(n, model).pass_probability() ==
        doctest::Approx(pass_probability(n.spectrum(), emit_state(model, bn), bn)).epsilon(1e-12));
  CHECK(CopySimulator(a, model).pass_probability() ==
        doctest::Approx(0.99 * pass_probability(a.spectrum(), emit_state(model, ba), ba)).epsilon(1e-12));
}

TEST_CASE("empirical task B pass rate") {
  const auto model = DeviceModel::from_fidelity(0.99);
  for (const auto& s : {nonadaptive_strategy(kK2, Frame::experimental), adaptive_strategy(kK2, Frame::experimental),
                        bell_strategy(BellVariant::phi_minus)}) {
    const CopySimulator sim(s, model.with_eom_flip(0.002));
    Rng rng(47);
    const std::int64_t n = 200000;
    const auto run = run_task_b(sim, rng, n);
    const double p = sim.pass_probability();
    CHECK(run.n == n);
    CHECK(std::abs(run.m_pass / double(n) - p) < 4 * binomial_sigma(p, double(n)));
  }
}

TEST_CASE("task A first-failure statistics") {
  const auto s = nonadaptive_strategy(kK2, Frame::experimental);
  const CopySimulator sim(s, DeviceModel::from_fidelity(0.97));
  const double p = sim.pass_probability();
  Rng rng(48);
  const int rounds = 20000;
  double sum = 0.0;
  for (int r = 0; r < rounds; ++r) {
    const auto f = run_task_a(sim, rng, 1000000);
    CHECK_FALSE(f.censored);
    CHECK(f.copies >= 1);
    sum += double(f.copies);
  }
  const double mean = 1.0 / (1.0 - p);
  const double sd = std::sqrt(p) / (1.0 - p);
  CHECK(std::abs(sum / rounds - mean) < 4 * sd / std::sqrt(double(rounds)));
}

TEST_CASE("task A censoring") {
  const auto s = nonadaptive_strategy(kK2, Frame::experimental);
  Rng rng(49);
  const auto f = run_task_a(DeviceModel::exact_target(), s, rng, 5000);
  CHECK(f.censored);
  CHECK(f.copies == 5000);
  CHECK_THROWS_AS(run_task_a(DeviceModel::exact_target(), s, rng, 0), InvalidArgument);
}

TEST_CASE("runs are reproducible from the seed") {
  const auto s = adaptive_strategy(kK2, Frame::experimental);
  const CopySimulator sim(s, DeviceModel::from_fidelity(0.98));
  Rng a(7, 3), b(7, 3), c(7, 4);
  const auto ra = run_task_b(sim, a, 2000, true);
  const auto rb = run_task_b(sim, b, 2000, true);
  const auto rc = run_task_b(sim, c, 2000, true);
  REQUIRE(ra.records.size() == 2000);
  bool differs = false;
  for (std::size_t i = 0; i < ra.records.size(); ++i) {
    CHECK(ra.records[i].setting_label == rb.records[i].setting_label);
    CHECK(ra.records[i].alice == rb.records[i].alice);
    CHECK(ra.records[i].passed == rb.records[i].passed);
    differs = differs || ra.records[i].setting_label != rc.records[i].setting_label;
  }
  CHECK(differs);

  Rng p(7, 3);
  const auto prefix = pass_prefix(sim, p, 2000);
  CHECK(prefix.back() == ra.m_pass);
  for (std::size_t i = 1; i < prefix.size(); ++i) CHECK(prefix[i] - prefix[i - 1] >= 0);
}

TEST_CASE("run records CSV") {
  const auto s = adaptive_strategy(kK2, Frame::experimental);
  Rng rng(50);
  const auto run = run_task_b(DeviceModel::exact_target(), s, rng, 3, true);
  std::ostringstream out;
  write_run_records_csv(out, run.records);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "copy_index,setting,alice,passed");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.size() - 2) == ",1");
  }
  CHECK(rows == 3);
}

TEST_CASE("pass-rate calibration helpers") {
  const auto a = adaptive_strategy(kK2, Frame::experimental);
  const auto model = DeviceModel::from_fidelity(0.9964);
  const double flip = calibrate_eom_flip(a, model, 0.9914);
  CHECK(flip == doctest::Approx(0.00621).epsilon(0.02));
  CHECK(CopySimulator(a, model.with_eom_flip(flip)).pass_probability() == doctest::Approx(0.9914).epsilon(1e-12));
  CHECK_THROWS_AS(calibrate_eom_flip(a, model, 0.9999), InvalidArgument);
  CHECK_THROWS_AS(calibrate_eom_flip(nonadaptive_strategy(kK2, Frame::experimental), model, 0.99), InvalidArgument);

  const auto n = nonadaptive_strategy(kK2, Frame::experimental);
  const double f = fidelity_for_pass_rate(n.spectrum(), 0.9985);
  CHECK(CopySimulator(n, DeviceModel::from_fidelity(f)).pass_probability() == doctest::Approx(0.9985).epsilon(1e-12));
}
