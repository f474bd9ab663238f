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

#include "qsv/device.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qsv/error.hpp"

namespace qsv {

namespace {

constexpr double kProbTol = 1e-10;

double checked_probability(double p, const char* what) {
  if (!(p >= -kProbTol && p <= 1.0 + kProbTol)) {
    throw NumericalError(std::string(what) + " probability " + std::to_string(p) +
                         " is outside [0, 1]; the state is not a valid density matrix");
  }
  return std::clamp(p, 0.0, 1.0);
}

// Unnormalised Bob state after Alice projects onto |a>:
// M(k,l) = sum_{i,j} conj(a_i) a_j sigma(2i+k, 2j+l).
Mat2 bob_conditional(const Mat4& sigma, const Ket2& a) {
  Mat2 out;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      cplx s = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          s += std::conj(a.amp[i]) * a.amp[j] * sigma(2 * i + k, 2 * j + l);
      out(k, l) = s;
    }
  return out;
}

struct AdaptiveProbabilities {
  double alice0 = 0.0;
  std::array<double, 2> bob{};
};

AdaptiveProbabilities adaptive_probabilities(const Mat4& sigma, const AdaptiveTest& test) {
  AdaptiveProbabilities out;
  std::array<double, 2> pa{};
  for (int a = 0; a < 2; ++a) {
    const Mat2 m = bob_conditional(sigma, test.alice_basis[a]);
    pa[a] = checked_probability(trace(m).real(), "Alice outcome");
    const double joint = checked_probability(expectation(m, test.bob_accept[a]), "joint pass");
    // An outcome that cannot occur is never sampled, so its conditional is moot.
    out.bob[a] = pa[a] > 0.0 ? std::clamp(joint / pa[a], 0.0, 1.0) : 0.0;
  }
  const double total = pa[0] + pa[1];
  if (std::abs(total - 1.0) > 1e-8) {
    throw NumericalError("Alice outcome probabilities sum to " + std::to_string(total));
  }
  out.alice0 = pa[0] / total;
  return out;
}

AdaptiveOutcome sample_adaptive(const AdaptiveProbabilities& p, Rng& rng) {
  AdaptiveOutcome out;
  out.alice = rng.uniform() < p.alice0 ? 0 : 1;
  out.passed = rng.uniform() < p.bob[out.alice];
  return out;
}

void check_copies(std::int64_t n, const char* what) {
  if (n < 1) throw InvalidArgument(std::string(what) + " must be at least 1");
}

}  // namespace

DeviceModel DeviceModel::exact_target() { return DeviceModel{}; }

DeviceModel DeviceModel::diagonal_mixture(const std::array<double, 4>& p) {
  DeviceModel m;
  m.kind = Kind::diagonal_mixture;
  m.weights = p;
  m.validate();
  return m;
}

DeviceModel DeviceModel::from_fidelity(double fidelity, std::optional<double> p4) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    throw InvalidArgument("fidelity must lie in [0, 1]");
  }
  const double rest = 1.0 - fidelity;
  if (!p4) return diagonal_mixture({fidelity, rest / 3.0, rest / 3.0, rest / 3.0});
  if (!(*p4 >= 0.0 && *p4 <= rest + 1e-15)) {
    throw InvalidArgument("p4 must lie in [0, 1 - F]");
  }
  const double other = std::max(0.0, (rest - *p4) / 2.0);
  return diagonal_mixture({fidelity, other, other, *p4});
}

DeviceModel DeviceModel::werner(double visibility) {
  DeviceModel m;
  m.kind = Kind::werner;
  m.visibility = visibility;
  m.validate();
  return m;
}

DeviceModel DeviceModel::explicit_state(const Mat4& rho) {
  DeviceModel m;
  m.kind = Kind::explicit_state;
  m.state = rho;
  m.validate();
  return m;
}

DeviceModel DeviceModel::with_eom_flip(double flip) const {
  DeviceModel m = *this;
  m.eom_flip = flip;
  m.validate();
  return m;
}

void DeviceModel::validate() const {
  if (!(eom_flip >= 0.0 && eom_flip <= 1.0)) throw InvalidArgument("eom_flip must lie in [0, 1]");
  switch (kind) {
    case Kind::exact_target:
      return;
    case Kind::diagonal_mixture: {
      for (double w : weights)
        if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("mixture weights must lie in [0, 1]");
      const double s = std::accumulate(weights.begin(), weights.end(), 0.0);
      if (std::abs(s - 1.0) > 1e-9) {
        throw InvalidArgument("mixture weights sum to " + std::to_string(s) + ", expected 1");
      }
      return;
    }
    case Kind::werner:
      if (!(visibility >= 0.0 && visibility <= 1.0)) {
        throw InvalidArgument("werner visibility must lie in [0, 1]");
      }
      return;
    case Kind::explicit_state:
      if (!is_density_matrix(state)) {
        throw InvalidArgument("explicit state is not a density matrix (Hermitian, PSD, trace 1)");
      }
      return;
  }
}

Mat4 emit_state(const DeviceModel& model, const VerifierBasis& basis) {
  model.validate();
  switch (model.kind) {
    case DeviceModel::Kind::exact_target:
      return projector(basis.psi);
    case DeviceModel::Kind::diagonal_mixture: {
      const auto kets = basis.as_array();
      Mat4 out;
      for (std::size_t i = 0; i < 4; ++i) out = out + projector(kets[i]) * cplx(model.weights[i]);
      return out;
    }
    case DeviceModel::Kind::werner:
      return projector(basis.psi) * cplx(model.visibility) +
             Mat4::identity() * cplx((1.0 - model.visibility) / 4.0);
    case DeviceModel::Kind::explicit_state:
      return model.state;
  }
  return Mat4{};
}

std::size_t sample_setting(const Strategy& strategy, Rng& rng) {
  const auto& tests = strategy.tests();
  double u = rng.uniform();
  for (std::size_t i = 0; i + 1 < tests.size(); ++i) {
    u -= selection_probability(tests[i]);
    if (u < 0.0) return i;
  }
  return tests.size() - 1;
}

bool measure_nonadaptive(const Mat4& sigma, const BinaryTest& test, Rng& rng) {
  const double p = checked_probability(trace_product(test.pass_projector, sigma), "pass");
  return rng.uniform() < p;
}

AdaptiveOutcome measure_adaptive(const Mat4& sigma, const AdaptiveTest& test, Rng& rng) {
  return sample_adaptive(adaptive_probabilities(sigma, test), rng);
}

void write_run_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "copy_index,setting,alice,passed\n";
  for (const auto& r : records) {
    out << r.copy_index << ',' << r.setting_label << ',';
    if (r.alice) out << *r.alice;
    out << ',' << (r.passed ? 1 : 0) << '\n';
  }
}

CopySimulator::CopySimulator(const Strategy& strategy, const DeviceModel& model)
    : strategy_(&strategy), sigma_(emit_state(model, strategy.basis())) {
  flip_ = strategy.family() == Family::adaptive ? model.eom_flip : 0.0;
  for (const auto& t : strategy.tests()) {
    TestCache c;
    if (const auto* b = std::get_if<BinaryTest>(&t)) {
      c.pass = checked_probability(trace_product(b->pass_projector, sigma_), "pass");
    } else {
      const auto p = adaptive_probabilities(sigma_, std::get<AdaptiveTest>(t));
      c.adaptive = true;
      c.alice0 = p.alice0;
      c.bob = p.bob;
    }
    cache_.push_back(c);
  }
}

CopySimulator::Copy CopySimulator::next(Rng& rng) const {
  Copy out;
  // Same draw order as sample_setting followed by measure_*.
  double u = rng.uniform();
  std::size_t s = 0;
  while (s + 1 < cache_.size()) {
    u -= selection_probability(strategy_->tests()[s]);
    if (u < 0.0) break;
    ++s;
  }
  out.setting = s;
  const TestCache& c = cache_[s];
  if (c.adaptive) {
    out.alice = rng.uniform() < c.alice0 ? 0 : 1;
    out.passed = rng.uniform() < c.bob[out.alice];
  } else {
    out.passed = rng.uniform() < c.pass;
  }
  if (flip_ > 0.0 && out.passed && rng.uniform() < flip_) out.passed = false;
  return out;
}

double CopySimulator::pass_probability() const {
  double total = 0.0;
  for (std::size_t i = 0; i < cache_.size(); ++i) {
    const TestCache& c = cache_[i];
    const double p = c.adaptive ? c.alice0 * c.bob[0] + (1.0 - c.alice0) * c.bob[1] : c.pass;
    total += selection_probability(strategy_->tests()[i]) * p;
  }
  return total * (1.0 - flip_);
}

FirstFailure run_task_a(const CopySimulator& sim, Rng& rng, std::int64_t max_copies) {
  check_copies(max_copies, "max_copies");
  for (std::int64_t k = 1; k <= max_copies; ++k) {
    if (!sim.next(rng).passed) return {k, false};
  }
  return {max_copies, true};
}

FirstFailure run_task_a(const DeviceModel& model, const Strategy& strategy, Rng& rng,
                        std::int64_t max_copies) {
  return run_task_a(CopySimulator(strategy, model), rng, max_copies);
}

TaskBRun run_task_b(const CopySimulator& sim, Rng& rng, std::int64_t n_copies, bool keep_records) {
  check_copies(n_copies, "n_copies");
  TaskBRun out;
  out.n = n_copies;
  if (keep_records) out.records.reserve(static_cast<std::size_t>(n_copies));
  for (std::int64_t k = 1; k <= n_copies; ++k) {
    const auto c = sim.next(rng);
    out.m_pass += c.passed ? 1 : 0;
    if (keep_records) {
      RunRecord r;
      r.copy_index = k;
      r.setting_label = label(sim.strategy().tests()[c.setting]);
      if (c.alice >= 0) r.alice = c.alice;
      r.passed = c.passed;
      out.records.push_back(std::move(r));
    }
  }
  return out;
}

TaskBRun run_task_b(const DeviceModel& model, const Strategy& strategy, Rng& rng,
                    std::int64_t n_copies, bool keep_records) {
  return run_task_b(CopySimulator(strategy, model), rng, n_copies, keep_records);
}

std::vector<std::int64_t> pass_prefix(const CopySimulator& sim, Rng& rng, std::int64_t n_copies) {
  check_copies(n_copies, "n_copies");
  std::vector<std::int64_t> out(static_cast<std::size_t>(n_copies));
  std::int64_t m = 0;
  for (auto& v : out) {
    m += sim.next(rng).passed ? 1 : 0;
    v = m;
  }
  return out;
}

double calibrate_eom_flip(const Strategy& strategy, const DeviceModel& model, double target_rate) {
  if (strategy.family() != Family::adaptive) {
    throw InvalidArgument("the EOM flip only applies to the adaptive family");
  }
  const double base = CopySimulator(strategy, model.with_eom_flip(0.0)).pass_probability();
  if (!(target_rate >= 0.0 && target_rate <= base)) {
    throw InvalidArgument("target pass rate " + std::to_string(target_rate) +
                          " is not reachable: the unflipped rate is " + std::to_string(base));
  }
  return base > 0.0 ? 1.0 - target_rate / base : 0.0;
}

double fidelity_for_pass_rate(const StrategySpectrum& spectrum, double pass_rate) {
  if (!(pass_rate >= spectrum.lambda2 && pass_rate <= 1.0)) {
    throw InvalidArgument("pass rate must lie in [lambda2, 1]");
  }
  return (pass_rate - spectrum.lambda2) / (1.0 - spectrum.lambda2);
}

}  // namespace qsv
