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

// Multi-round experiment drivers shared by the C API, the CLI and the
// acceptance suite. Every round draws from its own (seed, stream) generator
// and results are stored by round index, so output does not depend on the
// number of worker threads.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsv/analysis.hpp"
#include "qsv/device.hpp"
#include "qsv/strategy.hpp"

namespace qsv {

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned threads = 0;  ///< 0 selects default_thread_count()
};

// ---- Task A -----------------------------------------------------------------

struct TaskAReport {
  FirstFailureHistogram histogram;
  std::optional<GeometricFit> fit;    ///< absent when every round was censored
  std::optional<double> upper_bound;  ///< 95% bound on epsilon when all censored
  double confidence = 0.99;
  /// Copies needed to reach `confidence` at the fitted delta_eps (0 if no fit).
  std::int64_t n_for_confidence = 0;
  /// Exact per-copy failure probability of the simulated device.
  double true_delta_eps = 0.0;
};

TaskAReport run_task_a_experiment(const Strategy& strategy, const DeviceModel& model,
                                  std::int64_t rounds, std::int64_t max_copies, double confidence,
                                  const RunOptions& options);

// ---- Task B -----------------------------------------------------------------

struct TaskBPoint {
  std::int64_t n = 0;
  double m_pass = 0.0;  ///< mean over rounds
  double m_pass_sd = 0.0;
  std::optional<double> delta;  ///< delta of the region the mean rate falls in
  std::optional<double> delta_s;
  std::optional<double> delta_l;
  Region region = Region::indeterminate;
};

/// Pass-count confidence at a single rate and copy count: mu_s from
/// lambda4 and eps_min, mu_l from lambda2 and eps_max.
TaskBPoint task_b_point(std::int64_t n, double mean_pass, const StrategySpectrum& spectrum,
                        double eps_min, double eps_max);

/// Each round is one continuous stream of copies; checkpoints read its
/// running pass count. Deltas are evaluated at the round-mean pass rate.
std::vector<TaskBPoint> run_task_b_experiment(const Strategy& strategy, const DeviceModel& model,
                                              const std::vector<std::int64_t>& checkpoints,
                                              std::int64_t rounds, double eps_min, double eps_max,
                                              const RunOptions& options);

/// Per-round pass counts at each checkpoint: out[round][checkpoint].
std::vector<std::vector<std::int64_t>> simulate_pass_counts(const CopySimulator& sim,
                                                            const std::vector<std::int64_t>& checkpoints,
                                                            std::int64_t rounds,
                                                            const RunOptions& options,
                                                            std::uint64_t stream_base = 0);

// ---- Scaling ----------------------------------------------------------------

struct ScalingPoint {
  std::int64_t n = 0;
  double epsilon = 0.0;    ///< mean over rounds
  double std_error = 0.0;  ///< standard error of the mean
  std::int64_t rounds = 0;
};

/// For each n in [1, n_max], `rounds` independent Task B runs of n copies;
/// per round epsilon_at(n, m/n, delta, large region). Values of n where any
/// round has no certifiable epsilon <= 1 are omitted.
std::vector<ScalingPoint> run_scaling_experiment(const Strategy& strategy, const DeviceModel& model,
                                                 std::int64_t n_max, std::int64_t rounds,
                                                 double delta_target, const RunOptions& options);

// ---- Tomography comparison ---------------------------------------------------

struct TomoComparePoint {
  std::int64_t n = 0;
  double fidelity = 0.0;  ///< mean fidelity_estimate
  double dF = 0.0;        ///< mean bootstrap standard deviation
  double delta_tomo = 0.0;
  double eps_tomo = 0.0;  ///< 1 - mean fidelity
  double delta_verif = 0.0;
  std::optional<double> eps_verif;
};

/// At every checkpoint, `rounds` tomography runs and `rounds` verification
/// runs of n copies each on the same device. Both deltas bound the assertion
/// that the device is worse than 1 - eps_min: verification through
/// exp(-n D(m/n || 1 - (1-lambda2) eps_min)), tomography through the upper
/// tail P(F >= 1 - eps_min) of Normal(F, dF). eps_verif solves epsilon_at at
/// delta_target.
std::vector<TomoComparePoint> run_tomo_compare(const Strategy& strategy, const DeviceModel& model,
                                               const std::vector<std::int64_t>& checkpoints,
                                               std::int64_t rounds, double eps_min,
                                               double delta_target, int bootstrap_resamples,
                                               const RunOptions& options);

}  // namespace qsv
