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

#include "qsv/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "qsv/error.hpp"
#include "qsv/parallel.hpp"
#include "qsv/tomography.hpp"

namespace qsv {

namespace {

// Stream tags keep the generators of different experiment kinds disjoint.
constexpr std::uint64_t kScalingTag = 1ULL << 60;
constexpr std::uint64_t kTomoTag = 2ULL << 60;
constexpr std::uint64_t kVerifTag = 3ULL << 60;

unsigned threads_for(const RunOptions& o) { return o.threads == 0 ? default_thread_count() : o.threads; }

double delta_at_rate(double rate, std::int64_t n, double mu) {
  const double d = kl_divergence(rate, mu);
  return std::isinf(d) ? 0.0 : std::exp(-static_cast<double>(n) * d);
}

void check_rounds(std::int64_t rounds) {
  if (rounds < 1) throw InvalidArgument("rounds must be at least 1");
}

void check_checkpoints(const std::vector<std::int64_t>& checkpoints) {
  if (checkpoints.empty()) throw InvalidArgument("at least one checkpoint is required");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1) throw InvalidArgument("checkpoints must be at least 1");
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
      throw InvalidArgument("checkpoints must be strictly increasing");
    }
  }
}

}  // namespace

TaskAReport run_task_a_experiment(const Strategy& strategy, const DeviceModel& model,
                                  std::int64_t rounds, std::int64_t max_copies, double confidence,
                                  const RunOptions& options) {
  check_rounds(rounds);
  if (max_copies < 1) throw InvalidArgument("max_copies must be at least 1");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");
  const CopySimulator sim(strategy, model);
  std::vector<FirstFailure> results(static_cast<std::size_t>(rounds));
  parallel_for(results.size(), threads_for(options), [&](std::size_t r) {
    Rng rng(options.seed, r);
    results[r] = run_task_a(sim, rng, max_copies);
  });
  TaskAReport report;
  report.confidence = confidence;
  report.histogram = make_histogram(results, max_copies);
  report.true_delta_eps = 1.0 - sim.pass_probability();
  try {
    report.fit = fit_geometric(report.histogram, strategy.spectrum().lambda2);
    report.n_for_confidence = n_for_confidence(report.fit->delta_eps_hat, confidence);
  } catch (const AllCensoredError& e) {
    report.upper_bound = e.upper_bound();
  }
  return report;
}

TaskBPoint task_b_point(std::int64_t n, double mean_pass, const StrategySpectrum& spectrum,
                        double eps_min, double eps_max) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (!(mean_pass >= 0.0 && mean_pass <= static_cast<double>(n))) {
    throw InvalidArgument("mean pass count must lie in [0, n]");
  }
  if (!(eps_min > 0.0 && eps_min < 1.0 && eps_max > 0.0 && eps_max < 1.0)) {
    throw InvalidArgument("eps_min and eps_max must lie in (0, 1)");
  }
  if (eps_min > eps_max) throw InvalidArgument("eps_min must not exceed eps_max");
  TaskBPoint p;
  p.n = n;
  p.m_pass = mean_pass;
  const double x = mean_pass / static_cast<double>(n);
  const double mu_s = threshold_pass_rate(spectrum.lambda4, eps_min);
  const double mu_l = threshold_pass_rate(spectrum.lambda2, eps_max);
  if (x <= mu_s) p.delta_s = delta_at_rate(x, n, mu_s);
  if (x >= mu_l) p.delta_l = delta_at_rate(x, n, mu_l);
  if (p.delta_s && p.delta_l) {
    p.region = Region::both;
    p.delta = std::max(*p.delta_s, *p.delta_l);
  } else if (p.delta_s) {
    p.region = Region::small;
    p.delta = p.delta_s;
  } else if (p.delta_l) {
    p.region = Region::large;
    p.delta = p.delta_l;
  }
  return p;
}

std::vector<std::vector<std::int64_t>> simulate_pass_counts(const CopySimulator& sim,
                                                            const std::vector<std::int64_t>& checkpoints,
                                                            std::int64_t rounds,
                                                            const RunOptions& options,
                                                            std::uint64_t stream_base) {
  check_rounds(rounds);
  check_checkpoints(checkpoints);
  std::vector<std::vector<std::int64_t>> out(static_cast<std::size_t>(rounds));
  parallel_for(out.size(), threads_for(options), [&](std::size_t r) {
    Rng rng(options.seed, stream_base + r);
    std::vector<std::int64_t> row;
    row.reserve(checkpoints.size());
    std::int64_t copies = 0;
    std::int64_t m = 0;
    for (std::int64_t target : checkpoints) {
      for (; copies < target; ++copies) m += sim.next(rng).passed ? 1 : 0;
      row.push_back(m);
    }
    out[r] = std::move(row);
  });
  return out;
}

std::vector<TaskBPoint> run_task_b_experiment(const Strategy& strategy, const DeviceModel& model,
                                              const std::vector<std::int64_t>& checkpoints,
                                              std::int64_t rounds, double eps_min, double eps_max,
                                              const RunOptions& options) {
  const CopySimulator sim(strategy, model);
  const auto counts = simulate_pass_counts(sim, checkpoints, rounds, options);
  std::vector<TaskBPoint> points;
  const double nr = static_cast<double>(rounds);
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    double sum = 0.0;
    double sum2 = 0.0;
    for (const auto& row : counts) {
      const double m = static_cast<double>(row[c]);
      sum += m;
      sum2 += m * m;
    }
    const double mean = sum / nr;
    TaskBPoint p = task_b_point(checkpoints[c], mean, strategy.spectrum(), eps_min, eps_max);
    p.m_pass_sd = rounds > 1 ? std::sqrt(std::max(0.0, (sum2 - sum * mean) / (nr - 1.0))) : 0.0;
    points.push_back(p);
  }
  return points;
}

std::vector<ScalingPoint> run_scaling_experiment(const Strategy& strategy, const DeviceModel& model,
                                                 std::int64_t n_max, std::int64_t rounds,
                                                 double delta_target, const RunOptions& options) {
  check_rounds(rounds);
  if (n_max < 1) throw InvalidArgument("n_max must be at least 1");
  if (!(delta_target > 0.0 && delta_target < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  const CopySimulator sim(strategy, model);
  const auto& spectrum = strategy.spectrum();
  const auto nn = static_cast<std::size_t>(n_max);
  const auto nr = static_cast<std::size_t>(rounds);
  // eps[n-1][r]; NaN marks a round with no certifiable epsilon.
  std::vector<std::vector<double>> eps(nn, std::vector<double>(nr));
  parallel_for(nn * nr, threads_for(options), [&](std::size_t k) {
    const std::size_t i = k / nr;
    const std::size_t r = k % nr;
    const auto n = static_cast<std::int64_t>(i + 1);
    Rng rng(options.seed, kScalingTag + (static_cast<std::uint64_t>(n) << 24) + r);
    std::int64_t m = 0;
    for (std::int64_t c = 0; c < n; ++c) m += sim.next(rng).passed ? 1 : 0;
    const double rate = static_cast<double>(m) / static_cast<double>(n);
    try {
      eps[i][r] = epsilon_at(n, rate, delta_target, spectrum, Region::large);
    } catch (const NumericalError&) {
      eps[i][r] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  std::vector<ScalingPoint> points;
  for (std::size_t i = 0; i < nn; ++i) {
    const auto& row = eps[i];
    if (std::any_of(row.begin(), row.end(), [](double v) { return std::isnan(v); })) continue;
    double sum = 0.0;
    double sum2 = 0.0;
    for (double v : row) {
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / static_cast<double>(nr);
    const double var = nr > 1 ? std::max(0.0, (sum2 - sum * mean) / static_cast<double>(nr - 1)) : 0.0;
    points.push_back({static_cast<std::int64_t>(i + 1), mean, std::sqrt(var / static_cast<double>(nr)),
                      rounds});
  }
  return points;
}

std::vector<TomoComparePoint> run_tomo_compare(const Strategy& strategy, const DeviceModel& model,
                                               const std::vector<std::int64_t>& checkpoints,
                                               std::int64_t rounds, double eps_min,
                                               double delta_target, int bootstrap_resamples,
                                               const RunOptions& options) {
  check_rounds(rounds);
  check_checkpoints(checkpoints);
  if (!(eps_min > 0.0 && eps_min < 1.0)) throw InvalidArgument("eps_min must lie in (0, 1)");
  if (!(delta_target > 0.0 && delta_target < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (checkpoints.front() < kTomoSettings) throw InvalidArgument("tomography needs at least 9 copies");
  const CopySimulator sim(strategy, model);
  const Mat4& sigma = sim.state();
  const Ket4& psi = strategy.target();
  const auto nc = checkpoints.size();
  const auto nr = static_cast<std::size_t>(rounds);

  std::vector<double> f(nc * nr);
  std::vector<double> df(nc * nr);
  parallel_for(nc * nr, threads_for(options), [&](std::size_t k) {
    Rng rng(options.seed, kTomoTag + k);
    const TomoDataset data = simulate_tomography(sigma, checkpoints[k / nr], rng);
    f[k] = fidelity_estimate(data, psi);
    df[k] = bootstrap_dF(data, psi, bootstrap_resamples, rng);
  });
  const auto verif = simulate_pass_counts(sim, checkpoints, rounds, options, kVerifTag);

  const auto& spectrum = strategy.spectrum();
  const double mu = threshold_pass_rate(spectrum.lambda2, eps_min);
  std::vector<TomoComparePoint> points;
  for (std::size_t c = 0; c < nc; ++c) {
    TomoComparePoint p;
    p.n = checkpoints[c];
    double m_sum = 0.0;
    for (std::size_t r = 0; r < nr; ++r) {
      const double fr = f[c * nr + r];
      // A zero bootstrap spread would make the tail a step function; floor it.
      const double dfr = std::max(df[c * nr + r], 1e-12);
      p.fidelity += fr;
      p.dF += dfr;
      p.delta_tomo += tomo_confidence(fr, dfr, eps_min, TomoCase::case2);
      m_sum += static_cast<double>(verif[r][c]);
    }
    const double inv = 1.0 / static_cast<double>(nr);
    p.fidelity *= inv;
    p.dF *= inv;
    p.delta_tomo *= inv;
    p.eps_tomo = 1.0 - p.fidelity;
    const double rate = m_sum * inv / static_cast<double>(p.n);
    p.delta_verif = delta_at_rate(rate, p.n, mu);
    try {
      p.eps_verif = epsilon_at(p.n, rate, delta_target, spectrum, Region::large);
    } catch (const NumericalError&) {
      p.eps_verif.reset();
    }
    points.push_back(p);
  }
  return points;
}

}  // namespace qsv
