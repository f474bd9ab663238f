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

#include "qsv/qsv.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "qsv/analysis.hpp"
#include "qsv/device.hpp"
#include "qsv/error.hpp"
#include "qsv/experiments.hpp"
#include "qsv/parallel.hpp"
#include "qsv/strategy.hpp"
#include "qsv/tomography.hpp"

struct qsv_strategy {
  qsv::Strategy value;
};

struct qsv_device {
  qsv::DeviceModel value;
};

struct qsv_task_a_result {
  qsv::TaskAReport value;
};

namespace {

thread_local std::string g_last_error;

qsv_status fail(qsv_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating library exceptions into status codes.
template <class Fn>
qsv_status guarded(Fn&& body) {
  try {
    body();
    return QSV_OK;
  } catch (const qsv::AllCensoredError& e) {
    return fail(QSV_ERR_ALL_CENSORED, e.what());
  } catch (const qsv::InvalidArgument& e) {
    return fail(QSV_ERR_INVALID_ARGUMENT, e.what());
  } catch (const qsv::RegimeError& e) {
    return fail(QSV_ERR_REGIME, e.what());
  } catch (const qsv::NumericalError& e) {
    return fail(QSV_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QSV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QSV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QSV_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw qsv::InvalidArgument(std::string(name) + " must not be NULL");
}

qsv::RunOptions run_options(const qsv_run_options* o) {
  qsv::RunOptions out;
  if (o != nullptr) {
    out.seed = o->seed;
    out.threads = o->threads;
  }
  return out;
}

void export_matrix(const qsv::Mat4& m, double re[16], double im[16]) {
  require(re, "re");
  require(im, "im");
  for (int i = 0; i < 16; ++i) {
    re[i] = m.m[i].real();
    im[i] = m.m[i].imag();
  }
}

qsv::Mat4 import_matrix(const double re[16], const double im[16]) {
  require(re, "re");
  require(im, "im");
  qsv::Mat4 m;
  for (int i = 0; i < 16; ++i) m.m[i] = qsv::cplx(re[i], im[i]);
  return m;
}

qsv::Family to_family(int family) {
  switch (family) {
    case QSV_FAMILY_NONADAPTIVE: return qsv::Family::nonadaptive;
    case QSV_FAMILY_ADAPTIVE: return qsv::Family::adaptive;
    case QSV_FAMILY_BELL: return qsv::Family::bell;
    case QSV_FAMILY_PRODUCT: return qsv::Family::product;
    default: throw qsv::InvalidArgument("unknown strategy family " + std::to_string(family));
  }
}

int from_region(qsv::Region r) {
  switch (r) {
    case qsv::Region::small: return QSV_REGION_SMALL;
    case qsv::Region::large: return QSV_REGION_LARGE;
    case qsv::Region::both: return QSV_REGION_BOTH;
    case qsv::Region::indeterminate: return QSV_REGION_INDETERMINATE;
  }
  return QSV_REGION_INDETERMINATE;
}

qsv::Region to_region(int r) {
  switch (r) {
    case QSV_REGION_SMALL: return qsv::Region::small;
    case QSV_REGION_LARGE: return qsv::Region::large;
    default: throw qsv::InvalidArgument("region must be QSV_REGION_SMALL or QSV_REGION_LARGE");
  }
}

void export_point(const qsv::TaskBPoint& p, qsv_task_b_point* out) {
  *out = qsv_task_b_point{};
  out->n = p.n;
  out->m_pass = p.m_pass;
  out->m_pass_sd = p.m_pass_sd;
  out->has_delta = p.delta.has_value();
  out->delta = p.delta.value_or(0.0);
  out->has_delta_s = p.delta_s.has_value();
  out->delta_s = p.delta_s.value_or(0.0);
  out->has_delta_l = p.delta_l.has_value();
  out->delta_l = p.delta_l.value_or(0.0);
  out->region = from_region(p.region);
}

std::vector<std::int64_t> checkpoint_vector(const int64_t* checkpoints, size_t count) {
  require(checkpoints, "checkpoints");
  return std::vector<std::int64_t>(checkpoints, checkpoints + count);
}

std::vector<std::pair<double, double>> zip(const double* a, const double* b, size_t count) {
  require(a, "x values");
  require(b, "y values");
  std::vector<std::pair<double, double>> out(count);
  for (size_t i = 0; i < count; ++i) out[i] = {a[i], b[i]};
  return out;
}

}  // namespace

extern "C" {

const char* qsv_version(void) { return "1.0.0"; }

const char* qsv_last_error(void) { return g_last_error.c_str(); }

const char* qsv_status_name(qsv_status status) {
  switch (status) {
    case QSV_OK: return "ok";
    case QSV_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QSV_ERR_REGIME: return "regime error";
    case QSV_ERR_NUMERICAL: return "numerical error";
    case QSV_ERR_ALL_CENSORED: return "all rounds censored";
    case QSV_ERR_IO: return "i/o error";
    case QSV_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

unsigned qsv_default_thread_count(void) { return qsv::default_thread_count(); }

qsv_status qsv_strategy_create(int family, double theta, double phi, int frame, qsv_strategy** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (frame != QSV_FRAME_THEORETICAL && frame != QSV_FRAME_EXPERIMENTAL) {
      throw qsv::InvalidArgument("frame must be theoretical or experimental");
    }
    const qsv::TargetParams params{theta, phi};
    params.validate();
    const qsv::Family f = family == QSV_FAMILY_AUTO ? qsv::default_family(theta) : to_family(family);
    const auto fr = frame == QSV_FRAME_THEORETICAL ? qsv::Frame::theoretical : qsv::Frame::experimental;
    *out = new qsv_strategy{qsv::make_strategy(f, params, fr)};
  });
}

void qsv_strategy_destroy(qsv_strategy* strategy) { delete strategy; }

qsv_status qsv_family_name(int family, const char** out) {
  return guarded([&] {
    require(out, "out");
    *out = qsv::to_string(to_family(family));
  });
}

qsv_status qsv_family_parse(const char* name, int* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    if (std::strcmp(name, "auto") == 0) {
      *out = QSV_FAMILY_AUTO;
      return;
    }
    *out = static_cast<int>(qsv::family_from_string(name));
  });
}

qsv_status qsv_strategy_spectrum(const qsv_strategy* strategy, qsv_spectrum* out) {
  return guarded([&] {
    require(strategy, "strategy");
    require(out, "out");
    const auto& s = strategy->value.spectrum();
    *out = qsv_spectrum{s.lambda2, s.lambda4, s.weight, s.delta_eps_coefficient, static_cast<int>(s.family)};
  });
}

qsv_status qsv_strategy_test_count(const qsv_strategy* strategy, size_t* out) {
  return guarded([&] {
    require(strategy, "strategy");
    require(out, "out");
    *out = strategy->value.tests().size();
  });
}

namespace {

const qsv::Test& test_at(const qsv::Strategy& s, size_t index) {
  if (index >= s.tests().size()) throw qsv::InvalidArgument("test index out of range");
  return s.tests()[index];
}

}  // namespace

qsv_status qsv_strategy_test_info(const qsv_strategy* strategy, size_t index, qsv_test_info* out) {
  return guarded([&] {
    require(strategy, "strategy");
    require(out, "out");
    const auto& t = test_at(strategy->value, index);
    *out = qsv_test_info{};
    std::strncpy(out->label, qsv::label(t).c_str(), sizeof(out->label) - 1);
    out->selection_probability = qsv::selection_probability(t);
    out->adaptive = std::holds_alternative<qsv::AdaptiveTest>(t) ? 1 : 0;
  });
}

qsv_status qsv_strategy_test_operator(const qsv_strategy* strategy, size_t index, double re[16],
                                      double im[16]) {
  return guarded([&] {
    require(strategy, "strategy");
    export_matrix(qsv::pass_operator(test_at(strategy->value, index)), re, im);
  });
}

qsv_status qsv_strategy_operator(const qsv_strategy* strategy, double re[16], double im[16]) {
  return guarded([&] {
    require(strategy, "strategy");
    export_matrix(strategy->value.operator_matrix(), re, im);
  });
}

qsv_status qsv_strategy_eigenvalues(const qsv_strategy* strategy, double out[4]) {
  return guarded([&] {
    require(strategy, "strategy");
    require(out, "out");
    const auto e = qsv::herm_eigen(strategy->value.operator_matrix());
    for (int i = 0; i < 4; ++i) out[i] = e.values[i];
  });
}

qsv_status qsv_strategy_target(const qsv_strategy* strategy, double re[4], double im[4]) {
  return guarded([&] {
    require(strategy, "strategy");
    require(re, "re");
    require(im, "im");
    for (int i = 0; i < 4; ++i) {
      re[i] = strategy->value.target().amp[i].real();
      im[i] = strategy->value.target().amp[i].imag();
    }
  });
}

qsv_status qsv_required_copies(const qsv_strategy* strategy, double epsilon, double delta, int64_t* out) {
  return guarded([&] {
    require(strategy, "strategy");
    require(out, "out");
    *out = qsv::required_copies(epsilon, delta, strategy->value.spectrum());
  });
}

qsv_status qsv_device_create_fidelity(double fidelity, double p4, qsv_device** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    const auto m = p4 < 0.0 ? qsv::DeviceModel::from_fidelity(fidelity)
                            : qsv::DeviceModel::from_fidelity(fidelity, p4);
    *out = new qsv_device{m};
  });
}

qsv_status qsv_device_create_mixture(const double p[4], qsv_device** out) {
  return guarded([&] {
    require(out, "out");
    require(p, "p");
    *out = nullptr;
    *out = new qsv_device{qsv::DeviceModel::diagonal_mixture({p[0], p[1], p[2], p[3]})};
  });
}

qsv_status qsv_device_create_werner(double visibility, qsv_device** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new qsv_device{qsv::DeviceModel::werner(visibility)};
  });
}

qsv_status qsv_device_create_explicit(const double re[16], const double im[16], qsv_device** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new qsv_device{qsv::DeviceModel::explicit_state(import_matrix(re, im))};
  });
}

qsv_status qsv_device_create_exact(qsv_device** out) {
  return guarded([&] {
    require(out, "out");
    *out = new qsv_device{qsv::DeviceModel::exact_target()};
  });
}

void qsv_device_destroy(qsv_device* device) { delete device; }

qsv_status qsv_device_set_eom_flip(qsv_device* device, double flip) {
  return guarded([&] {
    require(device, "device");
    device->value = device->value.with_eom_flip(flip);
  });
}

qsv_status qsv_device_eom_flip(const qsv_device* device, double* out) {
  return guarded([&] {
    require(device, "device");
    require(out, "out");
    *out = device->value.eom_flip;
  });
}

qsv_status qsv_device_state(const qsv_device* device, const qsv_strategy* strategy, double re[16],
                            double im[16]) {
  return guarded([&] {
    require(device, "device");
    require(strategy, "strategy");
    export_matrix(qsv::emit_state(device->value, strategy->value.basis()), re, im);
  });
}

qsv_status qsv_pass_probability(const qsv_strategy* strategy, const qsv_device* device, double* out) {
  return guarded([&] {
    require(strategy, "strategy");
    require(device, "device");
    require(out, "out");
    *out = qsv::CopySimulator(strategy->value, device->value).pass_probability();
  });
}

qsv_status qsv_calibrate_eom_flip(const qsv_strategy* strategy, qsv_device* device, double target_rate,
                                  double* flip_out) {
  return guarded([&] {
    require(strategy, "strategy");
    require(device, "device");
    const double flip = qsv::calibrate_eom_flip(strategy->value, device->value, target_rate);
    device->value = device->value.with_eom_flip(flip);
    if (flip_out != nullptr) *flip_out = flip;
  });
}

qsv_status qsv_fidelity_for_pass_rate(const qsv_strategy* strategy, double pass_rate, double* out) {
  return guarded([&] {
    require(strategy, "strategy");
    require(out, "out");
    *out = qsv::fidelity_for_pass_rate(strategy->value.spectrum(), pass_rate);
  });
}

qsv_status qsv_task_a_run(const qsv_strategy* strategy, const qsv_device* device, int64_t rounds,
                          int64_t max_copies, double confidence, const qsv_run_options* options,
                          qsv_task_a_result** out) {
  return guarded([&] {
    require(strategy, "strategy");
    require(device, "device");
    require(out, "out");
    *out = nullptr;
    *out = new qsv_task_a_result{qsv::run_task_a_experiment(strategy->value, device->value, rounds,
                                                            max_copies, confidence, run_options(options))};
  });
}

void qsv_task_a_result_destroy(qsv_task_a_result* result) { delete result; }

qsv_status qsv_task_a_summary_get(const qsv_task_a_result* result, qsv_task_a_summary* out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    const auto& r = result->value;
    *out = qsv_task_a_summary{};
    out->rounds = r.histogram.rounds();
    out->censored = r.histogram.censored;
    out->confidence = r.confidence;
    out->true_delta_eps = r.true_delta_eps;
    if (r.fit) {
      out->failures = r.fit->failures;
      out->exposure = r.fit->exposure;
      out->delta_eps_hat = r.fit->delta_eps_hat;
      out->epsilon_hat = r.fit->epsilon_hat;
      out->std_error = r.fit->std_error;
      out->n_for_confidence = r.n_for_confidence;
    } else {
      out->all_censored = 1;
      out->exposure = r.histogram.censored * r.histogram.max_copies;
      out->upper_bound = r.upper_bound.value_or(1.0);
    }
  });
}

qsv_status qsv_task_a_histogram_size(const qsv_task_a_result* result, size_t* out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    *out = result->value.histogram.counts.size();
  });
}

qsv_status qsv_task_a_histogram_entry(const qsv_task_a_result* result, size_t index, int64_t* n_first,
                                      int64_t* count) {
  return guarded([&] {
    require(result, "result");
    require(n_first, "n_first");
    require(count, "count");
    const auto& counts = result->value.histogram.counts;
    if (index >= counts.size()) throw qsv::InvalidArgument("histogram index out of range");
    auto it = counts.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(index));
    *n_first = it->first;
    *count = it->second;
  });
}

qsv_status qsv_task_b_run(const qsv_strategy* strategy, const qsv_device* device, const int64_t* checkpoints,
                          size_t count, int64_t rounds, double eps_min, double eps_max,
                          const qsv_run_options* options, qsv_task_b_point* out) {
  return guarded([&] {
    require(strategy, "strategy");
    require(device, "device");
    require(out, "out");
    const auto points = qsv::run_task_b_experiment(strategy->value, device->value,
                                                   checkpoint_vector(checkpoints, count), rounds,
                                                   eps_min, eps_max, run_options(options));
    for (size_t i = 0; i < points.size(); ++i) export_point(points[i], &out[i]);
  });
}

qsv_status qsv_task_b_point_at(const qsv_strategy* strategy, int64_t n, double m_pass, double eps_min,
                               double eps_max, qsv_task_b_point* out) {
  return guarded([&] {
    require(strategy, "strategy");
    require(out, "out");
    export_point(qsv::task_b_point(n, m_pass, strategy->value.spectrum(), eps_min, eps_max), out);
  });
}

qsv_status qsv_write_run_records(const qsv_strategy* strategy, const qsv_device* device, int64_t n_copies,
                                 uint64_t seed, const char* path, int64_t* m_pass) {
  qsv::TaskBRun run;
  const qsv_status st = guarded([&] {
    require(strategy, "strategy");
    require(device, "device");
    require(path, "path");
    qsv::Rng rng(seed, 0);
    run = qsv::run_task_b(device->value, strategy->value, rng, n_copies, true);
  });
  if (st != QSV_OK) return st;
  std::ofstream file(path, std::ios::binary);
  if (!file) return fail(QSV_ERR_IO, std::string("cannot open ") + path + " for writing");
  qsv::write_run_records_csv(file, run.records);
  file.close();
  if (!file) return fail(QSV_ERR_IO, std::string("failed writing ") + path);
  if (m_pass != nullptr) *m_pass = run.m_pass;
  return QSV_OK;
}

qsv_status qsv_scaling_run(const qsv_strategy* strategy, const qsv_device* device, int64_t n_max,
                           int64_t rounds, double delta, const qsv_run_options* options,
                           qsv_scaling_point* out, size_t* count) {
  return guarded([&] {
    require(strategy, "strategy");
    require(device, "device");
    require(out, "out");
    require(count, "count");
    const auto points = qsv::run_scaling_experiment(strategy->value, device->value, n_max, rounds, delta,
                                                    run_options(options));
    for (size_t i = 0; i < points.size(); ++i) {
      out[i] = qsv_scaling_point{points[i].n, points[i].epsilon, points[i].std_error, points[i].rounds};
    }
    *count = points.size();
  });
}

qsv_status qsv_tomo_compare_run(const qsv_strategy* strategy, const qsv_device* device,
                                const int64_t* checkpoints, size_t count, int64_t rounds, double eps_min,
                                double delta, int bootstrap_resamples, const qsv_run_options* options,
                                qsv_tomo_point* out) {
  return guarded([&] {
    require(strategy, "strategy");
    require(device, "device");
    require(out, "out");
    const auto points = qsv::run_tomo_compare(strategy->value, device->value,
                                              checkpoint_vector(checkpoints, count), rounds, eps_min,
                                              delta, bootstrap_resamples, run_options(options));
    for (size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      out[i] = qsv_tomo_point{p.n,           p.fidelity,  p.dF, p.delta_tomo, p.eps_tomo,
                              p.delta_verif, p.eps_verif.has_value(), p.eps_verif.value_or(0.0)};
    }
  });
}

qsv_status qsv_tomo_estimate(const qsv_strategy* strategy, const qsv_device* device, int64_t n_copies,
                             int bootstrap_resamples, uint64_t seed, double* fidelity, double* dF) {
  return guarded([&] {
    require(strategy, "strategy");
    require(device, "device");
    require(fidelity, "fidelity");
    require(dF, "dF");
    qsv::Rng rng(seed, 0);
    const auto sigma = qsv::emit_state(device->value, strategy->value.basis());
    const auto data = qsv::simulate_tomography(sigma, n_copies, rng);
    *fidelity = qsv::fidelity_estimate(data, strategy->value.target());
    *dF = qsv::bootstrap_dF(data, strategy->value.target(), bootstrap_resamples, rng);
  });
}

qsv_status qsv_kl_divergence(double x, double y, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = qsv::kl_divergence(x, y);
  });
}

qsv_status qsv_chernoff_delta(int64_t m_pass, int64_t n, double mu, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = qsv::chernoff_delta(m_pass, n, mu);
  });
}

qsv_status qsv_copies_for_delta(double rate, double mu, double delta, int64_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = qsv::copies_for_delta(rate, mu, delta);
  });
}

qsv_status qsv_epsilon_at(const qsv_spectrum* spectrum, int64_t n, double pass_rate, double delta,
                          int region, double* out) {
  return guarded([&] {
    require(spectrum, "spectrum");
    require(out, "out");
    qsv::StrategySpectrum s;
    s.lambda2 = spectrum->lambda2;
    s.lambda4 = spectrum->lambda4;
    s.weight = spectrum->weight;
    s.delta_eps_coefficient = spectrum->delta_eps_coefficient;
    *out = qsv::epsilon_at(n, pass_rate, delta, s, to_region(region));
  });
}

qsv_status qsv_epsilon_asymptote(double pass_rate, double lambda, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = qsv::epsilon_asymptote(pass_rate, lambda);
  });
}

qsv_status qsv_fit_loglog_slope(const double* n, const double* epsilon, size_t count, double n_lo,
                                double n_hi, double* slope, double* std_error) {
  return guarded([&] {
    require(slope, "slope");
    const auto fit = qsv::fit_loglog_slope(zip(n, epsilon, count), {n_lo, n_hi});
    *slope = fit.slope;
    if (std_error != nullptr) *std_error = fit.std_error;
  });
}

qsv_status qsv_fit_exp_decay(const double* n, const double* delta, size_t count, double* g,
                             double* std_error) {
  return guarded([&] {
    require(g, "g");
    const auto fit = qsv::fit_exp_decay(zip(n, delta, count));
    *g = fit.slope;
    if (std_error != nullptr) *std_error = fit.std_error;
  });
}

}  // extern "C"
