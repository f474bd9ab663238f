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

#include <cmath>

#include "qsv/analysis.hpp"
#include "qsv/error.hpp"
#include "test_util.hpp"

using namespace qsv;

namespace {

const TargetParams kK2{0.6419, 3.2034};

StrategySpectrum k2_nonadaptive() { return nonadaptive_strategy(kK2, Frame::experimental).spectrum(); }
StrategySpectrum k2_adaptive() { return adaptive_strategy(kK2, Frame::experimental).spectrum(); }

// Draws a censored geometric dataset directly, independent of the device code.
FirstFailureHistogram synthetic_histogram(Rng& rng, double delta_eps, int rounds, std::int64_t max_copies) {
  FirstFailureHistogram h;
  h.max_copies = max_copies;
  for (int r = 0; r < rounds; ++r) {
    const double u = 1.0 - rng.uniform();
    const auto n = static_cast<std::int64_t>(std::ceil(std::log(u) / std::log1p(-delta_eps)));
    if (n > max_copies) {
      h.add({max_copies, true});
    } else {
      h.add({std::max<std::int64_t>(n, 1), false});
    }
  }
  return h;
}

}  // namespace

// ---- Task A -----------------------------------------------------------------

TEST_CASE("geometric pmf") {
  CHECK(geometric_pmf(0.1, 1) == doctest::Approx(0.1));
  CHECK(geometric_pmf(0.1, 3) == doctest::Approx(0.081));
  double total = 0.0;
  for (std::int64_t n = 1; n <= 5000; ++n) total += geometric_pmf(0.01, n);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(geometric_pmf(0.1, 0), InvalidArgument);
}

TEST_CASE("cumulative confidence and copies for confidence") {
  const double de = (1 - k2_nonadaptive().lambda2) * 0.0034;
  CHECK(n_for_confidence(de, 0.99) == 3357);
  CHECK(cumulative_confidence(de, 3357) >= 0.99);
  CHECK(cumulative_confidence(de, 3356) < 0.99);
  CHECK(cumulative_confidence(0.5, 2) == doctest::Approx(0.75));
  Rng rng(51);
  for (int t = 0; t < 200; ++t) {
    const double d = 1e-4 + 0.1 * rng.uniform();
    const double c = 0.5 + 0.499 * rng.uniform();
    const auto n = n_for_confidence(d, c);
    CHECK(cumulative_confidence(d, n) >= c);
    if (n > 1) CHECK(cumulative_confidence(d, n - 1) < c);
  }
}

TEST_CASE("histogram bookkeeping") {
  const auto h = make_histogram({{3, false}, {3, false}, {7, false}, {100, true}}, 100);
  CHECK(h.rounds() == 4);
  CHECK(h.censored == 1);
  CHECK(h.counts.at(3) == 2);
  CHECK(h.counts.at(7) == 1);
}

TEST_CASE("censored geometric fit on a hand-made histogram") {
  // Failures at 3, 3, 7 and one round censored at 100: k = 3, S = 113.
  const auto h = make_histogram({{3, false}, {3, false}, {7, false}, {100, true}}, 100);
  const auto fit = fit_geometric(h, 0.5);
  CHECK(fit.failures == 3);
  CHECK(fit.exposure == 113);
  CHECK(fit.delta_eps_hat == doctest::Approx(3.0 / 113));
  CHECK(fit.epsilon_hat == doctest::Approx(6.0 / 113));
  const double d = 3.0 / 113;
  const double info = 3 / (d * d) + (113 - 3) / ((1 - d) * (1 - d));
  CHECK(fit.delta_eps_std_error == doctest::Approx(1 / std::sqrt(info)));
  CHECK(fit.std_error == doctest::Approx(2 / std::sqrt(info)));
}

TEST_CASE("all-censored data raise with an upper bound") {
  const auto h = make_histogram(std::vector<FirstFailure>(20, {1000, true}), 1000);
  try {
    fit_geometric(h, 0.6);
    FAIL("expected AllCensoredError");
  } catch (const AllCensoredError& e) {
    CHECK(e.upper_bound() == doctest::Approx((1 - std::pow(0.05, 1.0 / 20000)) / 0.4));
  }
}

TEST_CASE("geometric fit recovers delta_eps within 2 standard errors") {
  Rng rng(52);
  const double de = 0.0015;
  int covered = 0;
  for (int t = 0; t < 100; ++t) {
    const auto h = synthetic_histogram(rng, de, 10000, 1000000);
    const auto fit = fit_geometric(h, 0.0);
    covered += std::abs(fit.delta_eps_hat - de) <= 2 * fit.delta_eps_std_error ? 1 : 0;
  }
  // 95.4% nominal coverage; 90 of 100 is more than 3 sigma below it.
  CHECK(covered >= 90);
}

TEST_CASE("censoring does not bias the fit") {
  Rng rng(53);
  const double de = 0.002;
  const auto h = synthetic_histogram(rng, de, 20000, 400);
  CHECK(h.censored > 0);
  const auto fit = fit_geometric(h, 0.0);
  CHECK(std::abs(fit.delta_eps_hat - de) < 4 * fit.delta_eps_std_error);
}

// ---- Task B -----------------------------------------------------------------

TEST_CASE("KL divergence examples") {
  CHECK(kl_divergence(0.9986, 0.999597) == doctest::Approx(7.469e-4).epsilon(1e-3));
  CHECK(kl_divergence(0.5, 0.5) == 0.0);
  CHECK(kl_divergence(1.0, 0.9) == doctest::Approx(-std::log(0.9)));
  CHECK(kl_divergence(0.0, 0.1) == doctest::Approx(-std::log(0.9)));
  CHECK(std::isinf(kl_divergence(0.5, 1.0)));
  CHECK(std::isinf(kl_divergence(0.5, 0.0)));
  CHECK(kl_divergence(1.0, 1.0) == 0.0);
}

TEST_CASE("KL divergence is nonnegative and vanishes only on the diagonal") {
  for (int i = 0; i <= 100; ++i) {
    for (int j = 1; j < 100; ++j) {
      const double x = i / 100.0, y = j / 100.0;
      const double d = kl_divergence(x, y);
      CHECK(d >= 0.0);
      if (i != j) CHECK(d > 0.0);
    }
  }
}

TEST_CASE("Chernoff copy counts at k2") {
  const auto sp = k2_nonadaptive();
  const double mu_min = threshold_pass_rate(sp.lambda2, 0.001);
  const double mu_max = threshold_pass_rate(sp.lambda2, 0.006);
  CHECK(mu_min == doctest::Approx(0.999597).epsilon(1e-6));
  CHECK(mu_max == doctest::Approx(0.997580).epsilon(1e-6));
  const auto n_min = copies_for_delta(0.9986, mu_min, 0.01);
  const auto n_max = copies_for_delta(0.9986, mu_max, 0.01);
  CHECK(n_min == 6172);
  CHECK(n_max == 18115);
  CHECK(std::abs(n_min - 6000) <= 0.05 * 6000);
  CHECK(std::abs(n_max - 17905) <= 0.03 * 17905);
  CHECK(chernoff_delta(9986 * n_min / 10000, n_min, mu_min) == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("adaptive two-region copy counts") {
  const auto sp = k2_adaptive();
  const double mu_s = threshold_pass_rate(sp.lambda4, 0.008);
  const double mu_l = threshold_pass_rate(sp.lambda2, 0.017);
  CHECK(mu_s == doctest::Approx(0.993747).epsilon(1e-6));
  CHECK(mu_l == doctest::Approx(0.989644).epsilon(1e-6));
  const auto n_s = copies_for_delta(0.9914, mu_s, 0.01);
  const auto n_l = copies_for_delta(0.9914, mu_l, 0.01);
  CHECK(n_s == 11612);
  CHECK(n_l == 28842);
  CHECK(std::abs(n_s - 10429) <= 0.25 * 10429);
  CHECK(std::abs(n_l - 23645) <= 0.25 * 23645);
}

TEST_CASE("adaptive region classification") {
  const auto sp = k2_adaptive();
  // mu_s > mu_l here, so a rate between them is covered by both bounds.
  const auto both = adaptive_region_deltas(9914, 10000, sp, 0.008, 0.017);
  CHECK(both.region == Region::both);
  REQUIRE(both.delta_s);
  REQUIRE(both.delta_l);
  CHECK(*both.delta_s == doctest::Approx(chernoff_delta(9914, 10000, both.mu_s)));

  const auto small = adaptive_region_deltas(9800, 10000, sp, 0.008, 0.017);
  CHECK(small.region == Region::small);
  CHECK_FALSE(small.delta_l);

  const auto large = adaptive_region_deltas(9999, 10000, sp, 0.008, 0.017);
  CHECK(large.region == Region::large);
  CHECK_FALSE(large.delta_s);

  // Narrow window: mu_s < mu_l and the rate falls between them.
  const auto gap = adaptive_region_deltas(99925, 100000, sp, 0.001, 0.0012);
  CHECK(gap.mu_s < gap.mu_l);
  CHECK(gap.region == Region::indeterminate);
  CHECK_FALSE(gap.delta_s);
  CHECK_FALSE(gap.delta_l);

  CHECK_THROWS_AS(adaptive_region_deltas(10, 10, sp, 0.02, 0.01), InvalidArgument);
  CHECK(std::string(to_string(Region::both)) == "both");
}

TEST_CASE("Chernoff delta decreases with n at a fixed rate") {
  const double mu = threshold_pass_rate(k2_nonadaptive().lambda2, 0.001);
  double prev = 1.0;
  for (std::int64_t n = 1000; n <= 100000; n += 1000) {
    const double d = chernoff_delta(n * 9986 / 10000, n, mu);
    CHECK(d <= prev);
    CHECK(d > 0.0);
    prev = d;
  }
  CHECK(chernoff_region(9986, 10000, mu) == Region::small);
  CHECK(chernoff_region(10000, 10000, mu) == Region::large);
}

TEST_CASE("Case 2 descends faster than Case 1 at the same margin") {
  const double x = 0.9986;
  for (double eta : {1e-4, 3e-4, 5e-4, 1e-3}) CHECK(kl_divergence(x, x + eta) > kl_divergence(x, x - eta));
}

TEST_CASE("epsilon at fixed confidence") {
  const auto sp = k2_nonadaptive();
  const double asym = epsilon_asymptote(0.9986, sp.lambda2);
  CHECK(asym == doctest::Approx(0.0034714).epsilon(1e-4));
  CHECK(epsilon_asymptote(0.9992, 0.0) == doctest::Approx(0.0008));

  const double eps = epsilon_at(20000, 0.9986, 0.1, sp);
  const double mu = threshold_pass_rate(sp.lambda2, eps);
  CHECK(std::exp(-20000 * kl_divergence(0.9986, mu)) == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(eps > asym);

  double prev = 1.0;
  for (std::int64_t n : {1000, 3000, 10000, 100000, 1000000, 10000000}) {
    const double e = epsilon_at(n, 0.9986, 0.1, sp);
    CHECK(e < prev);
    CHECK(e > asym);
    prev = e;
  }
  CHECK(epsilon_at(1000000000000, 0.9986, 0.1, sp) - asym < 1e-6);
  CHECK(epsilon_at(1000, 1.0, 1.0, sp) == 0.0);

  const double small = epsilon_at(20000, 0.9914, 0.1, k2_adaptive(), Region::small);
  CHECK(small < adaptive_asymptote_small_region(0.9914, k2_adaptive()));
  CHECK_THROWS_AS(epsilon_at(5, 0.2, 0.01, sp), NumericalError);
}

// ---- Fits -------------------------------------------------------------------

TEST_CASE("line fits") {
  const auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.std_error == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_line({1, 2}, {1, 2}), InvalidArgument);

  std::vector<std::pair<double, double>> pts;
  for (int n = 1; n <= 100; ++n) pts.push_back({double(n), 0.5 * std::pow(n, -0.75)});
  CHECK(fit_loglog_slope(pts).slope == doctest::Approx(-0.75));
  const auto windowed = fit_loglog_slope(pts, {10.0, 20.0});
  CHECK(windowed.points == 11);

  std::vector<std::pair<double, double>> decay;
  for (int n = 0; n <= 20000; n += 1000) decay.push_back({double(n), 0.8 * std::exp(-7.469e-4 * n)});
  CHECK(fit_exp_decay(decay).slope == doctest::Approx(-7.469e-4));
  CHECK_THROWS_AS(fit_exp_decay({{1, 0.5}, {2, 0.0}, {3, 0.1}}), InvalidArgument);
}

TEST_CASE("simulated Case 2 curve decays at the KL exponent") {
  const auto s = nonadaptive_strategy(kK2, Frame::experimental);
  const double mu = threshold_pass_rate(s.spectrum().lambda2, 0.001);
  std::vector<std::pair<double, double>> pts;
  for (std::int64_t n = 1000; n <= 20000; n += 1000) pts.push_back({double(n), chernoff_delta(n * 9986 / 10000, n, mu)});
  CHECK(fit_exp_decay(pts).slope == doctest::Approx(-kl_divergence(0.9986, mu)).epsilon(0.02));
}
