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

#include "qsv/experiments.hpp"

using namespace qsv;

namespace {

const TargetParams kK2{0.6419, 3.2034};

}  // namespace

TEST_CASE("task A experiment is independent of the thread count") {
  const auto s = nonadaptive_strategy(kK2, Frame::experimental);
  const auto model = DeviceModel::from_fidelity(0.99);
  const auto a = run_task_a_experiment(s, model, 500, 100000, 0.99, {11, 1});
  const auto b = run_task_a_experiment(s, model, 500, 100000, 0.99, {11, 4});
  CHECK(a.histogram.counts == b.histogram.counts);
  REQUIRE(a.fit);
  CHECK(a.fit->epsilon_hat == b.fit->epsilon_hat);
  CHECK(a.n_for_confidence == b.n_for_confidence);
  CHECK(a.true_delta_eps == doctest::Approx((1 - s.spectrum().lambda2) * 0.01));
  CHECK(std::abs(a.fit->epsilon_hat - 0.01) < 4 * a.fit->std_error);

  const auto c = run_task_a_experiment(s, model, 500, 100000, 0.99, {12, 4});
  CHECK(c.histogram.counts != a.histogram.counts);
}

TEST_CASE("task A experiment on a perfect device reports an upper bound") {
  const auto s = nonadaptive_strategy(kK2, Frame::experimental);
  const auto r = run_task_a_experiment(s, DeviceModel::exact_target(), 10, 1000, 0.99, {1, 2});
  CHECK_FALSE(r.fit);
  REQUIRE(r.upper_bound);
  CHECK(*r.upper_bound > 0.0);
  CHECK(r.n_for_confidence == 0);
}

TEST_CASE("task B point") {
  const auto sp = nonadaptive_strategy(kK2, Frame::experimental).spectrum();
  const auto p = task_b_point(10000, 9986.0, sp, 0.001, 0.006);
  // For the nonadaptive family mu_s > mu_l, so 0.9986 lies in both regions.
  CHECK(p.region == Region::both);
  REQUIRE(p.delta_s);
  CHECK(*p.delta_s == doctest::Approx(chernoff_delta(9986, 10000, threshold_pass_rate(sp.lambda2, 0.001))));
  const auto small = task_b_point(10000, 9900.0, sp, 0.001, 0.006);
  CHECK(small.region == Region::small);
  CHECK(small.delta == small.delta_s);
  CHECK_FALSE(small.delta_l);
  const auto both = task_b_point(10000, 9914.0, adaptive_strategy(kK2, Frame::experimental).spectrum(), 0.008, 0.017);
  CHECK(both.region == Region::both);
  CHECK(*both.delta == doctest::Approx(std::max(*both.delta_s, *both.delta_l)));
}

TEST_CASE("task B experiment is independent of the thread count") {
  const auto s = adaptive_strategy(kK2, Frame::experimental);
  const auto model = DeviceModel::from_fidelity(0.9964).with_eom_flip(0.006);
  const std::vector<std::int64_t> checkpoints{100, 1000, 5000};
  const auto a = run_task_b_experiment(s, model, checkpoints, 20, 0.008, 0.017, {3, 1});
  const auto b = run_task_b_experiment(s, model, checkpoints, 20, 0.008, 0.017, {3, 8});
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n == checkpoints[i]);
    CHECK(a[i].m_pass == b[i].m_pass);
    CHECK(a[i].m_pass_sd == b[i].m_pass_sd);
    CHECK(a[i].delta == b[i].delta);
    CHECK(a[i].region == b[i].region);
  }
  CHECK(a[0].m_pass <= a[1].m_pass);
}

TEST_CASE("pass counts are running totals of one stream") {
  const auto s = nonadaptive_strategy(kK2, Frame::experimental);
  const CopySimulator sim(s, DeviceModel::from_fidelity(0.95));
  const auto counts = simulate_pass_counts(sim, {10, 50, 200}, 5, {9, 2});
  REQUIRE(counts.size() == 5);
  for (const auto& row : counts) {
    REQUIRE(row.size() == 3);
    CHECK(row[0] <= row[1]);
    CHECK(row[1] <= row[2]);
    CHECK(row[1] - row[0] <= 40);
  }
}

TEST_CASE("scaling experiment is independent of the thread count") {
  const auto s = nonadaptive_strategy(kK2, Frame::experimental);
  const auto model = DeviceModel::from_fidelity(0.9966);
  const auto a = run_scaling_experiment(s, model, 30, 20, 0.1, {5, 1});
  const auto b = run_scaling_experiment(s, model, 30, 20, 0.1, {5, 6});
  REQUIRE(a.size() == b.size());
  REQUIRE_FALSE(a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n == b[i].n);
    CHECK(a[i].epsilon == b[i].epsilon);
    CHECK(a[i].rounds == 20);
  }
  CHECK(a.front().epsilon > a.back().epsilon);
}

TEST_CASE("tomography comparison is independent of the thread count") {
  const auto s = nonadaptive_strategy(kK2, Frame::experimental);
  const auto model = DeviceModel::from_fidelity(0.9964);
  const auto a = run_tomo_compare(s, model, {900, 4500}, 4, 0.001, 0.1, 50, {8, 1});
  const auto b = run_tomo_compare(s, model, {900, 4500}, 4, 0.001, 0.1, 50, {8, 3});
  REQUIRE(a.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].fidelity == b[i].fidelity);
    CHECK(a[i].dF == b[i].dF);
    CHECK(a[i].delta_tomo == b[i].delta_tomo);
    CHECK(a[i].delta_verif == b[i].delta_verif);
    CHECK(a[i].eps_tomo == doctest::Approx(1 - a[i].fidelity));
  }
  CHECK(a[1].dF < a[0].dF);
}
