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

// Device model and per-copy measurement simulation.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qsv/rng.hpp"
#include "qsv/strategy.hpp"

namespace qsv {

/// Source of i.i.d. fake states.
struct DeviceModel {
  enum class Kind { exact_target, diagonal_mixture, werner, explicit_state };

  Kind kind = Kind::exact_target;
  /// Weights over (psi, psi_perp, hv, vh) of the verifier basis.
  std::array<double, 4> weights{1.0, 0.0, 0.0, 0.0};
  double visibility = 1.0;
  Mat4 state;
  /// Probability that a passing copy is recorded as failed. Only applied
  /// under the adaptive family, where it stands in for imperfect EOM modulation.
  double eom_flip = 0.0;

  static DeviceModel exact_target();
  static DeviceModel diagonal_mixture(const std::array<double, 4>& p);
  /// Fidelity F with the infidelity split equally over the three other basis
  /// states, or with p4 fixed and the rest split equally between p2 and p3.
  static DeviceModel from_fidelity(double fidelity, std::optional<double> p4 = std::nullopt);
  static DeviceModel werner(double visibility);
  static DeviceModel explicit_state(const Mat4& rho);

  DeviceModel with_eom_flip(double flip) const;

  /// Throws InvalidArgument on out-of-range weights, visibility, flip or an
  /// explicit matrix that is not a density matrix.
  void validate() const;
};

/// The density matrix the device emits, expressed in the frame of `basis`.
/// Every model kind is deterministic, so no random source is needed.
Mat4 emit_state(const DeviceModel& model, const VerifierBasis& basis);

/// Index of a test drawn according to the selection probabilities.
std::size_t sample_setting(const Strategy& strategy, Rng& rng);

/// Born-rule pass/fail for a fixed-projector test.
bool measure_nonadaptive(const Mat4& sigma, const BinaryTest& test, Rng& rng);

struct AdaptiveOutcome {
  int alice = 0;  ///< index into AdaptiveTest::alice_basis
  bool passed = false;
};

/// Two-stage LOCC sampling: Alice's outcome first, then Bob on his
/// conditional state in the accepted direction chosen by her outcome.
AdaptiveOutcome measure_adaptive(const Mat4& sigma, const AdaptiveTest& test, Rng& rng);

struct RunRecord {
  std::int64_t copy_index = 0;
  std::string setting_label;
  std::optional<int> alice;
  bool passed = false;
};

/// Writes `copy_index,setting,alice,passed` with a header line.
void write_run_records_csv(std::ostream& out, const std::vector<RunRecord>& records);

/// Per-copy simulator for one (strategy, device) pair with the emitted state
/// and all per-test outcome probabilities precomputed.
class CopySimulator {
 public:
  CopySimulator(const Strategy& strategy, const DeviceModel& model);

  struct Copy {
    std::size_t setting = 0;
    int alice = -1;  ///< -1 for fixed-projector tests
    bool passed = false;
  };

  Copy next(Rng& rng) const;

  const Mat4& state() const { return sigma_; }
  const Strategy& strategy() const { return *strategy_; }

  /// Exact per-copy pass probability including the EOM flip.
  double pass_probability() const;

 private:
  struct TestCache {
    bool adaptive = false;
    double pass = 0.0;            // fixed-projector tests
    double alice0 = 0.0;          // adaptive: P(Alice outcome 0)
    std::array<double, 2> bob{};  // adaptive: P(pass | Alice outcome)
  };

  const Strategy* strategy_;
  Mat4 sigma_;
  std::vector<TestCache> cache_;
  double flip_ = 0.0;
};

struct FirstFailure {
  std::int64_t copies = 0;  ///< index of the first failed copy, or max_copies when censored
  bool censored = false;
};

/// Task A: measure copy by copy until the first failure.
FirstFailure run_task_a(const CopySimulator& sim, Rng& rng, std::int64_t max_copies);
FirstFailure run_task_a(const DeviceModel& model, const Strategy& strategy, Rng& rng,
                        std::int64_t max_copies);

struct TaskBRun {
  std::int64_t n = 0;
  std::int64_t m_pass = 0;
  std::vector<RunRecord> records;  ///< filled only when requested
};

/// Task B: a fixed number of copies.
TaskBRun run_task_b(const CopySimulator& sim, Rng& rng, std::int64_t n_copies,
                    bool keep_records = false);
TaskBRun run_task_b(const DeviceModel& model, const Strategy& strategy, Rng& rng,
                    std::int64_t n_copies, bool keep_records = false);

/// Cumulative pass counts: out[k] = passes among the first k+1 copies.
std::vector<std::int64_t> pass_prefix(const CopySimulator& sim, Rng& rng, std::int64_t n_copies);

/// EOM flip that brings the closed-form pass rate of (strategy, model) down
/// to `target_rate`. Throws InvalidArgument if the target exceeds the
/// unflipped rate.
double calibrate_eom_flip(const Strategy& strategy, const DeviceModel& model, double target_rate);

/// Fidelity whose diagonal-mixture device passes a nonadaptive-type strategy
/// with probability `pass_rate`.
double fidelity_for_pass_rate(const StrategySpectrum& spectrum, double pass_rate);

}  // namespace qsv
