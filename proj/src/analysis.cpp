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

#include "qsv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsv/error.hpp"

namespace qsv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_counts(std::int64_t m_pass, std::int64_t n) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (m_pass < 0 || m_pass > n) throw InvalidArgument("m_pass must lie in [0, n]");
}

void check_unit_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw InvalidArgument(std::string(name) + " must lie in (0, 1)");
}

// x ln(x / y) with 0 ln 0 = 0.
double xlogxy(double x, double y) {
  if (x == 0.0) return 0.0;
  if (y == 0.0) return kInf;
  return x * std::log(x / y);
}

}  // namespace

double geometric_pmf(double delta_eps, std::int64_t n) {
  if (!(delta_eps > 0.0 && delta_eps <= 1.0)) throw InvalidArgument("delta_eps must lie in (0, 1]");
  if (n < 1) throw InvalidArgument("n must be at least 1");
  return std::exp(static_cast<double>(n - 1) * std::log1p(-delta_eps)) * delta_eps;
}

void FirstFailureHistogram::add(const FirstFailure& f) {
  if (f.censored) {
    ++censored;
  } else {
    ++counts[f.copies];
  }
}

std::int64_t FirstFailureHistogram::rounds() const {
  std::int64_t total = censored;
  for (const auto& [n, c] : counts) total += c;
  return total;
}

FirstFailureHistogram make_histogram(const std::vector<FirstFailure>& rounds, std::int64_t max_copies) {
  FirstFailureHistogram h;
  h.max_copies = max_copies;
  for (const auto& r : rounds) h.add(r);
  return h;
}

GeometricFit fit_geometric(const FirstFailureHistogram& histogram, double lambda2) {
  if (!(lambda2 >= 0.0 && lambda2 < 1.0)) throw InvalidArgument("lambda2 must lie in [0, 1)");
  GeometricFit fit;
  for (const auto& [n, c] : histogram.counts) {
    if (n < 1 || c < 0) throw InvalidArgument("histogram entries must have n_first >= 1 and count >= 0");
    fit.failures += c;
    fit.exposure += n * c;
  }
  if (histogram.censored > 0 && histogram.max_copies < 1) {
    throw InvalidArgument("censored rounds require max_copies >= 1");
  }
  fit.exposure += histogram.censored * histogram.max_copies;
  if (fit.exposure == 0) throw InvalidArgument("histogram is empty");
  const double scale = 1.0 - lambda2;
  if (fit.failures == 0) {
    const double bound = -std::expm1(std::log(0.05) / static_cast<double>(fit.exposure));
    throw AllCensoredError("every round was censored; epsilon is below the reported 95% upper bound",
                           std::min(1.0, bound / scale));
  }
  const double k = static_cast<double>(fit.failures);
  const double s = static_cast<double>(fit.exposure);
  const double d = k / s;
  fit.delta_eps_hat = d;
  if (d < 1.0) {
    const double info = k / (d * d) + (s - k) / ((1.0 - d) * (1.0 - d));
    fit.delta_eps_std_error = 1.0 / std::sqrt(info);
  }
  fit.epsilon_hat = d / scale;
  fit.std_error = fit.delta_eps_std_error / scale;
  return fit;
}

double cumulative_confidence(double delta_eps, std::int64_t n) {
  if (!(delta_eps >= 0.0 && delta_eps <= 1.0)) throw InvalidArgument("delta_eps must lie in [0, 1]");
  if (n < 0) throw InvalidArgument("n must be non-negative");
  if (n == 0) return 0.0;
  if (delta_eps == 1.0) return 1.0;
  return -std::expm1(static_cast<double>(n) * std::log1p(-delta_eps));
}

std::int64_t n_for_confidence(double delta_eps, double confidence) {
  if (!(delta_eps > 0.0 && delta_eps <= 1.0)) throw InvalidArgument("delta_eps must lie in (0, 1]");
  check_unit_open(confidence, "confidence");
  if (delta_eps == 1.0) return 1;
  auto n = static_cast<std::int64_t>(std::ceil(std::log1p(-confidence) / std::log1p(-delta_eps)));
  n = std::max<std::int64_t>(n, 1);
  // Guard the ceiling against rounding in either direction.
  while (n > 1 && cumulative_confidence(delta_eps, n - 1) >= confidence) --n;
  while (cumulative_confidence(delta_eps, n) < confidence) ++n;
  return n;
}

double kl_divergence(double x, double y) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("kl_divergence: x must lie in [0, 1]");
  if (!(y >= 0.0 && y <= 1.0)) throw InvalidArgument("kl_divergence: y must lie in [0, 1]");
  if (x == y) return 0.0;
  const double d = xlogxy(x, y) + xlogxy(1.0 - x, 1.0 - y);
  return std::max(0.0, d);
}

const char* to_string(Region r) {
  switch (r) {
    case Region::small: return "small";
    case Region::large: return "large";
    case Region::both: return "both";
    case Region::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

double chernoff_delta(std::int64_t m_pass, std::int64_t n, double mu) {
  check_counts(m_pass, n);
  check_unit_open(mu, "mu");
  const double x = static_cast<double>(m_pass) / static_cast<double>(n);
  const double d = kl_divergence(x, mu);
  if (d == kInf) return 0.0;
  return std::exp(-static_cast<double>(n) * d);
}

Region chernoff_region(std::int64_t m_pass, std::int64_t n, double mu) {
  check_counts(m_pass, n);
  const double x = static_cast<double>(m_pass) / static_cast<double>(n);
  if (x == mu) return Region::both;
  return x > mu ? Region::large : Region::small;
}

std::int64_t copies_for_delta(double rate, double mu, double delta) {
  check_unit_open(mu, "mu");
  check_unit_open(delta, "delta");
  const double d = kl_divergence(rate, mu);
  if (d == 0.0) throw InvalidArgument("pass rate equals mu; no number of copies reaches delta < 1");
  if (d == kInf) return 1;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(-std::log(delta) / d)));
}

double threshold_pass_rate(double lambda, double epsilon) { return 1.0 - (1.0 - lambda) * epsilon; }

RegionDeltas adaptive_region_deltas(std::int64_t m_pass, std::int64_t n,
                                    const StrategySpectrum& spectrum, double eps_min,
                                    double eps_max) {
  check_counts(m_pass, n);
  check_unit_open(eps_min, "eps_min");
  check_unit_open(eps_max, "eps_max");
  if (eps_min > eps_max) throw InvalidArgument("eps_min must not exceed eps_max");
  RegionDeltas out;
  out.mu_s = threshold_pass_rate(spectrum.lambda4, eps_min);
  out.mu_l = threshold_pass_rate(spectrum.lambda2, eps_max);
  const double x = static_cast<double>(m_pass) / static_cast<double>(n);
  if (x <= out.mu_s) out.delta_s = chernoff_delta(m_pass, n, out.mu_s);
  if (x >= out.mu_l) out.delta_l = chernoff_delta(m_pass, n, out.mu_l);
  if (out.delta_s && out.delta_l) {
    out.region = Region::both;
  } else if (out.delta_s) {
    out.region = Region::small;
  } else if (out.delta_l) {
    out.region = Region::large;
  } else {
    out.region = Region::indeterminate;
  }
  return out;
}

double epsilon_asymptote(double pass_rate, double lambda) {
  if (!(pass_rate >= 0.0 && pass_rate <= 1.0)) throw InvalidArgument("pass_rate must lie in [0, 1]");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw InvalidArgument("lambda must lie in [0, 1)");
  return (1.0 - pass_rate) / (1.0 - lambda);
}

double adaptive_asymptote_small_region(double pass_rate, const StrategySpectrum& spectrum) {
  return epsilon_asymptote(pass_rate, spectrum.lambda4);
}

double epsilon_at(std::int64_t n, double pass_rate, double delta_target,
                  const StrategySpectrum& spectrum, Region region) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (!(delta_target > 0.0 && delta_target <= 1.0)) {
    throw InvalidArgument("delta_target must lie in (0, 1]");
  }
  if (region != Region::large && region != Region::small) {
    throw InvalidArgument("epsilon_at needs the small or large region");
  }
  const double lambda = region == Region::large ? spectrum.lambda2 : spectrum.lambda4;
  const double asym = epsilon_asymptote(pass_rate, lambda);
  if (delta_target == 1.0) return asym;
  const double target = -std::log(delta_target);
  const double nn = static_cast<double>(n);
  // g(eps) = n D(pass_rate || mu(eps)) - ln(1/delta) is increasing away from asym.
  auto g = [&](double eps) { return nn * kl_divergence(pass_rate, threshold_pass_rate(lambda, eps)) - target; };

  double lo;
  double hi;
  if (region == Region::large) {
    if (asym >= 1.0 || g(1.0) < 0.0) {
      throw NumericalError("epsilon_at: no root in [asymptote, 1]; n is too small to certify at this delta");
    }
    lo = asym;
    hi = 1.0;
  } else {
    if (asym <= 0.0) throw NumericalError("epsilon_at: the small region is empty at pass rate 1");
    lo = 0.0;
    hi = std::min(asym, 1.0);
    if (asym > 1.0 && g(1.0) > 0.0) {
      throw NumericalError("epsilon_at: no root in (0, 1] for the small region");
    }
  }
  // Bisection on the monotone branch; the sign convention flips between regions.
  const bool increasing = region == Region::large;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool above = g(mid) > 0.0;
    if (above == increasing) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("fit_line: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw InvalidArgument("fit_line: at least 3 points are required");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_line: x values are all equal");
  LineFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ssr += r * r;
  }
  fit.std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return fit;
}

LineFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points,
                         std::pair<double, double> window) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& [n, eps] : points) {
    if (n < window.first || n > window.second) continue;
    if (!(n > 0.0 && eps > 0.0)) throw InvalidArgument("fit_loglog_slope: n and epsilon must be positive");
    lx.push_back(std::log(n));
    ly.push_back(std::log(eps));
  }
  if (lx.size() < 3) throw InvalidArgument("fit_loglog_slope: fewer than 3 points in the window");
  return fit_line(lx, ly);
}

LineFit fit_exp_decay(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> xs;
  std::vector<double> ly;
  for (const auto& [n, delta] : points) {
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("fit_exp_decay: delta must lie in (0, 1]");
    xs.push_back(n);
    ly.push_back(std::log(delta));
  }
  return fit_line(xs, ly);
}

}  // namespace qsv
