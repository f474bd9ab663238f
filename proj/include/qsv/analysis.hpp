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

// Statistics for verification runs: geometric first-failure analysis (Task A),
// Chernoff/KL confidence for fixed copy counts (Task B), solving for the
// certifiable infidelity at a fixed confidence, and scaling-law fits.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qsv/device.hpp"
#include "qsv/strategy.hpp"

namespace qsv {

// ---- Task A -----------------------------------------------------------------

/// (1 - delta_eps)^(n-1) * delta_eps.
double geometric_pmf(double delta_eps, std::int64_t n);

/// Histogram of first-failure indices plus the number of censored rounds.
struct FirstFailureHistogram {
  std::map<std::int64_t, std::int64_t> counts;  ///< n_first -> rounds
  std::int64_t censored = 0;
  std::int64_t max_copies = 0;

  void add(const FirstFailure& f);
  std::int64_t rounds() const;
};

FirstFailureHistogram make_histogram(const std::vector<FirstFailure>& rounds, std::int64_t max_copies);

struct GeometricFit {
  double delta_eps_hat = 0.0;
  double delta_eps_std_error = 0.0;
  double epsilon_hat = 0.0;
  double std_error = 0.0;  ///< of epsilon_hat
  std::int64_t failures = 0;
  std::int64_t exposure = 0;  ///< copies observed, censored rounds contributing max_copies
};

/// Censored-geometric maximum likelihood. Throws AllCensoredError, carrying a
/// one-sided 95% upper bound on epsilon, when no round saw a failure.
GeometricFit fit_geometric(const FirstFailureHistogram& histogram, double lambda2);

/// 1 - (1 - delta_eps)^n.
double cumulative_confidence(double delta_eps, std::int64_t n);

/// Smallest n with cumulative_confidence(delta_eps, n) >= confidence.
std::int64_t n_for_confidence(double delta_eps, double confidence);

// ---- Task B -----------------------------------------------------------------

/// Natural-log binary relative entropy with 0 ln 0 = 0; +infinity when y is
/// 0 or 1 and x differs from it.
double kl_divergence(double x, double y);

enum class Region { small, large, both, indeterminate };
const char* to_string(Region r);

/// exp(-n D(m/n || mu)). The caller decides which case the value bounds:
/// m/n >= mu bounds Case 2 (large region), m/n <= mu bounds Case 1 (small).
double chernoff_delta(std::int64_t m_pass, std::int64_t n, double mu);

/// Region of an observed pass rate relative to a single mu.
Region chernoff_region(std::int64_t m_pass, std::int64_t n, double mu);

/// Smallest n for which exp(-n D(rate || mu)) <= delta.
std::int64_t copies_for_delta(double rate, double mu, double delta);

/// 1 - (1 - lambda) eps.
double threshold_pass_rate(double lambda, double epsilon);

struct RegionDeltas {
  double mu_s = 0.0;
  double mu_l = 0.0;
  std::optional<double> delta_s;  ///< set when m/n <= mu_s
  std::optional<double> delta_l;  ///< set when m/n >= mu_l
  Region region = Region::indeterminate;
};

/// Adaptive two-region confidence: mu_s from lambda4 and eps_min, mu_l from
/// lambda2 and eps_max. When mu_s >= mu_l both deltas can be valid at once
/// (region `both`); between them nothing is claimed (region `indeterminate`).
RegionDeltas adaptive_region_deltas(std::int64_t m_pass, std::int64_t n,
                                    const StrategySpectrum& spectrum, double eps_min,
                                    double eps_max);

/// (1 - pass_rate) / (1 - lambda), where exp(-n D) reaches 1.
double epsilon_asymptote(double pass_rate, double lambda);

/// Adaptive small-region asymptote (1 - pass_rate) / (1 - lambda4).
double adaptive_asymptote_small_region(double pass_rate, const StrategySpectrum& spectrum);

/// Solves exp(-n D(pass_rate || 1 - (1-lambda) eps)) = delta_target for eps by
/// bisection. Large region: lambda = lambda2, eps in [asymptote, 1]. Small
/// region: lambda = lambda4, eps in (0, asymptote]. Throws NumericalError if
/// no root lies in the bracket.
double epsilon_at(std::int64_t n, double pass_rate, double delta_target,
                  const StrategySpectrum& spectrum, Region region = Region::large);

// ---- Fits -------------------------------------------------------------------

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;  ///< of the slope
  std::size_t points = 0;
};

/// Ordinary least squares y = a + b x with the slope standard error from residuals.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log eps against log n over points with n in [window.first, window.second].
LineFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points,
                         std::pair<double, double> window = {0.0, std::numeric_limits<double>::infinity()});

/// Slope g of ln delta against n (delta = exp(g n)).
LineFit fit_exp_decay(const std::vector<std::pair<double, double>>& points);

}  // namespace qsv
