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

// qsv: command-line driver for two-qubit state verification experiments.
//
//   qsv strategy-info --family nonadaptive --theta 0.7854
//   qsv task-a --theta 0.6419 --phi 3.2034 --fidelity 0.9966 --rounds 10000
//   qsv task-b --family adaptive --eps-min 0.008 --eps-max 0.017 --pass-rate 0.9914 --fidelity 0.9964
//   qsv scaling --pass-rate 0.9986 --delta 0.1
//   qsv tomo-compare --pass-rate 0.9986
//   qsv run --config experiment.json
//
// Exit status: 0 success, 2 configuration error, 3 runtime error.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "qsv/qsv.h"

namespace {

using qsv_tools::ConfigError;
using qsv_tools::ExperimentConfig;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

/// Failure of a library call while running an experiment.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(qsv_status st, const char* what, bool config_stage = false) {
  if (st == QSV_OK) return;
  const std::string msg = std::string(what) + ": " + qsv_last_error();
  if (config_stage && (st == QSV_ERR_INVALID_ARGUMENT || st == QSV_ERR_REGIME)) throw ConfigError(msg);
  throw RuntimeFailure(msg);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string opt_num(bool has, double v) { return has ? num(v) : std::string(); }

struct StrategyPtr {
  qsv_strategy* p = nullptr;
  ~StrategyPtr() { qsv_strategy_destroy(p); }
};
struct DevicePtr {
  qsv_device* p = nullptr;
  ~DevicePtr() { qsv_device_destroy(p); }
};

const char* region_name(int r) {
  switch (r) {
    case QSV_REGION_SMALL: return "small";
    case QSV_REGION_LARGE: return "large";
    case QSV_REGION_BOTH: return "both";
    default: return "indeterminate";
  }
}

/// Command-line values; each set option overrides the config document.
struct Overrides {
  std::string config_path;
  bool print_config = false;
  std::optional<double> theta, phi, fidelity, p4, werner, pass_rate, eom_flip, eps_min, eps_max, delta, confidence;
  std::optional<std::string> frame, family, output, records;
  std::optional<std::int64_t> n_copies, rounds, max_copies, n_max, bootstrap, threads;
  std::optional<std::uint64_t> seed;
  std::vector<double> mixture;
  std::vector<std::int64_t> checkpoints;

  void apply(nlohmann::json& doc) const {
    auto set = [&](const char* path, const auto& v) {
      if (v) qsv_tools::set_path(doc, path, *v);
    };
    set("target.theta", theta);
    set("target.phi", phi);
    set("target.frame", frame);
    set("family", family);
    set("device.fidelity", fidelity);
    set("device.p4", p4);
    set("device.werner", werner);
    set("device.pass_rate", pass_rate);
    set("device.eom_flip", eom_flip);
    if (!mixture.empty()) qsv_tools::set_path(doc, "device.mixture", mixture);
    set("n_copies", n_copies);
    set("rounds", rounds);
    set("max_copies", max_copies);
    if (!checkpoints.empty()) qsv_tools::set_path(doc, "checkpoints", checkpoints);
    set("n_max", n_max);
    set("eps_min", eps_min);
    set("eps_max", eps_max);
    set("delta", delta);
    set("confidence", confidence);
    set("bootstrap", bootstrap);
    set("seed", seed);
    set("threads", threads);
    set("output", output);
    set("records", records);
  }
};

void add_options(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config_path, "JSON experiment config; command-line flags override it")
      ->check(CLI::ExistingFile);
  cmd.add_flag("--print-config", o.print_config, "Print the effective config as canonical JSON and exit");
  cmd.add_option("--theta", o.theta, "Target angle theta in [0, pi/2] (default 0.6419)");
  cmd.add_option("--phi", o.phi, "Relative phase phi in [0, 2pi) (default 0)");
  cmd.add_option("--frame", o.frame, "theoretical | experimental (default experimental)");
  cmd.add_option("--family", o.family, "auto | nonadaptive | adaptive | bell | product (default auto)");
  cmd.add_option("--fidelity", o.fidelity, "Device fidelity; infidelity split equally unless --p4 is set");
  cmd.add_option("--p4", o.p4, "Weight on the fourth verifier-basis state (with --fidelity)");
  cmd.add_option("--mixture", o.mixture, "Device weights p1 p2 p3 p4 over the verifier basis")->expected(4);
  cmd.add_option("--werner", o.werner, "Werner visibility");
  cmd.add_option("--pass-rate", o.pass_rate,
                 "Target per-copy pass rate: sets the fidelity, or calibrates the EOM flip for the adaptive family");
  cmd.add_option("--eom-flip", o.eom_flip, "Adaptive pass->fail flip probability (default 0)");
  cmd.add_option("--n-copies", o.n_copies, "Copies per run (default 20000)");
  cmd.add_option("--rounds", o.rounds, "Independent rounds (default 10000 for task-a, 100 otherwise)");
  cmd.add_option("--max-copies", o.max_copies, "Task A censoring limit (default 1000000)");
  cmd.add_option("--checkpoints", o.checkpoints, "Copy counts to report (default: 20 evenly spaced up to n-copies)");
  cmd.add_option("--n-max", o.n_max, "Scaling: largest N (default 100)");
  cmd.add_option("--eps-min", o.eps_min, "Smallest infidelity of interest (default 0.001)");
  cmd.add_option("--eps-max", o.eps_max, "Largest infidelity of interest (default 0.006)");
  cmd.add_option("--delta", o.delta, "Target confidence parameter delta (default 0.1)");
  cmd.add_option("--confidence", o.confidence, "Task A confidence level for n_for_confidence (default 0.99)");
  cmd.add_option("--bootstrap", o.bootstrap, "Tomography bootstrap resamples (default 100)");
  cmd.add_option("--seed", o.seed, "Random seed (default 0)");
  cmd.add_option("--threads", o.threads, "Worker threads; 0 uses QSV_THREADS or the hardware count");
  cmd.add_option("--output", o.output, "CSV output path (default stdout)");
  cmd.add_option("--records", o.records, "task-b: write the per-copy records of round 0 to this CSV");
}

ExperimentConfig build_config(const std::string& task, const Overrides& o) {
  nlohmann::json doc = nlohmann::json::object();
  if (!o.config_path.empty()) doc = qsv_tools::parse_document(qsv_tools::read_config_text(o.config_path));
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  if (task != "run") {
    doc["task"] = task;
  } else if (!doc.contains("task")) {
    throw ConfigError("config field 'task': required by the run subcommand");
  }
  o.apply(doc);
  return qsv_tools::config_from_json(doc);
}

int family_code(const ExperimentConfig& c) {
  int f = QSV_FAMILY_AUTO;
  check(qsv_family_parse(c.family.c_str(), &f), "family", true);
  return f;
}

void make_strategy(const ExperimentConfig& c, StrategyPtr& s) {
  const int frame = c.target.frame == "theoretical" ? QSV_FRAME_THEORETICAL : QSV_FRAME_EXPERIMENTAL;
  check(qsv_strategy_create(family_code(c), c.target.theta, c.target.phi, frame, &s.p), "strategy", true);
}

void make_device(const ExperimentConfig& c, const qsv_strategy* s, DevicePtr& d) {
  const auto& dc = c.device;
  qsv_spectrum spec{};
  check(qsv_strategy_spectrum(s, &spec), "spectrum");
  const bool adaptive = spec.family == QSV_FAMILY_ADAPTIVE;
  if (dc.pass_rate && !adaptive) {
    double f = 0.0;
    check(qsv_fidelity_for_pass_rate(s, *dc.pass_rate, &f), "device.pass_rate", true);
    check(qsv_device_create_fidelity(f, -1.0, &d.p), "device", true);
    return;
  }
  if (dc.fidelity) {
    check(qsv_device_create_fidelity(*dc.fidelity, dc.p4 ? *dc.p4 : -1.0, &d.p), "device", true);
  } else if (dc.mixture) {
    check(qsv_device_create_mixture(dc.mixture->data(), &d.p), "device", true);
  } else if (dc.werner) {
    check(qsv_device_create_werner(*dc.werner, &d.p), "device", true);
  } else {
    check(qsv_device_create_exact(&d.p), "device", true);
  }
  if (dc.pass_rate) {
    check(qsv_calibrate_eom_flip(s, d.p, *dc.pass_rate, nullptr), "device.pass_rate", true);
  } else {
    check(qsv_device_set_eom_flip(d.p, dc.eom_flip), "device.eom_flip", true);
  }
}

/// CSV goes to --output (summary then on stdout) or to stdout (summary on stderr).
struct Sinks {
  std::ofstream file;
  std::ostream* csv = &std::cout;
  std::ostream* summary = &std::cerr;

  explicit Sinks(const std::string& path) {
    if (path.empty()) return;
    file.open(path, std::ios::binary | std::ios::trunc);
    if (!file) throw RuntimeFailure("cannot open output file '" + path + "' for writing");
    csv = &file;
    summary = &std::cout;
  }

  void finish(const std::string& path) {
    if (!file.is_open()) {
      std::cout.flush();
      return;
    }
    file.close();
    if (!file) throw RuntimeFailure("failed writing output file '" + path + "'");
  }
};

qsv_run_options run_options(const ExperimentConfig& c) { return qsv_run_options{c.seed, c.threads}; }

void print_matrix(std::ostream& out, const double re[16], const double im[16]) {
  for (int r = 0; r < 4; ++r) {
    out << "  ";
    for (int col = 0; col < 4; ++col) {
      const int i = 4 * r + col;
      out << (col ? "," : "") << num(re[i]) << (im[i] < 0 ? "" : "+") << num(im[i]) << "i";
    }
    out << "\n";
  }
}

void run_strategy_info(const ExperimentConfig& c, const qsv_strategy* s, std::ostream& out) {
  qsv_spectrum spec{};
  check(qsv_strategy_spectrum(s, &spec), "spectrum");
  const char* fam = nullptr;
  check(qsv_family_name(spec.family, &fam), "family");
  double ev[4];
  check(qsv_strategy_eigenvalues(s, ev), "eigenvalues");
  double tre[4], tim[4];
  check(qsv_strategy_target(s, tre, tim), "target");
  out << "key,value\n";
  out << "family," << fam << "\n";
  out << "theta," << num(c.target.theta) << "\n";
  out << "phi," << num(c.target.phi) << "\n";
  out << "frame," << c.target.frame << "\n";
  const char* weight_name = spec.family == QSV_FAMILY_NONADAPTIVE ? "alpha"
                            : spec.family == QSV_FAMILY_ADAPTIVE  ? "beta"
                                                                  : "weight";
  out << weight_name << "," << num(spec.weight) << "\n";
  out << "lambda2," << num(spec.lambda2) << "\n";
  out << "lambda4," << num(spec.lambda4) << "\n";
  out << "delta_eps_coefficient," << num(spec.delta_eps_coefficient) << "\n";
  for (int i = 0; i < 4; ++i) out << "eigenvalue" << i + 1 << "," << num(ev[i]) << "\n";
  for (int i = 0; i < 4; ++i) {
    static const char* names[4] = {"HH", "HV", "VH", "VV"};
    out << "target_" << names[i] << "," << num(tre[i]) << (tim[i] < 0 ? "" : "+") << num(tim[i]) << "i\n";
  }
  size_t count = 0;
  check(qsv_strategy_test_count(s, &count), "tests");
  out << "\nindex,label,probability,adaptive\n";
  for (size_t i = 0; i < count; ++i) {
    qsv_test_info info{};
    check(qsv_strategy_test_info(s, i, &info), "test info");
    out << i << "," << info.label << "," << num(info.selection_probability) << "," << info.adaptive << "\n";
  }
  for (size_t i = 0; i < count; ++i) {
    qsv_test_info info{};
    check(qsv_strategy_test_info(s, i, &info), "test info");
    double re[16], im[16];
    check(qsv_strategy_test_operator(s, i, re, im), "test operator");
    out << "\npass_operator," << info.label << "\n";
    print_matrix(out, re, im);
  }
}

void run_task_a(const ExperimentConfig& c, const qsv_strategy* s, const qsv_device* d, Sinks& io) {
  qsv_task_a_result* raw = nullptr;
  const auto opts = run_options(c);
  check(qsv_task_a_run(s, d, c.effective_rounds(), c.max_copies, c.confidence, &opts, &raw), "task-a");
  std::unique_ptr<qsv_task_a_result, void (*)(qsv_task_a_result*)> result(raw, qsv_task_a_result_destroy);
  size_t size = 0;
  check(qsv_task_a_histogram_size(raw, &size), "histogram");
  *io.csv << "n_first,count\n";
  for (size_t i = 0; i < size; ++i) {
    int64_t n = 0, k = 0;
    check(qsv_task_a_histogram_entry(raw, i, &n, &k), "histogram");
    *io.csv << n << "," << k << "\n";
  }
  qsv_task_a_summary sum{};
  check(qsv_task_a_summary_get(raw, &sum), "summary");
  auto& out = *io.summary;
  out << "rounds: " << sum.rounds << " (censored " << sum.censored << " at " << c.max_copies << " copies)\n";
  if (sum.all_censored) {
    out << "no failures observed; epsilon < " << num(sum.upper_bound) << " (95% upper bound)\n";
  } else {
    out << "epsilon_hat: " << num(sum.epsilon_hat) << " +- " << num(sum.std_error) << "\n";
    out << "delta_eps_hat: " << num(sum.delta_eps_hat) << " (device " << num(sum.true_delta_eps) << ")\n";
    out << "n_for_" << num(100 * sum.confidence) << "%: " << sum.n_for_confidence << "\n";
  }
}

void run_task_b(const ExperimentConfig& c, const qsv_strategy* s, const qsv_device* d, Sinks& io) {
  const auto cps = c.effective_checkpoints();
  std::vector<qsv_task_b_point> pts(cps.size());
  const auto opts = run_options(c);
  check(qsv_task_b_run(s, d, cps.data(), cps.size(), c.effective_rounds(), c.eps_min, c.eps_max, &opts, pts.data()),
        "task-b");
  *io.csv << "n,m_pass,m_pass_sd,delta,delta_s,delta_l,region\n";
  for (const auto& p : pts) {
    *io.csv << p.n << "," << num(p.m_pass) << "," << num(p.m_pass_sd) << "," << opt_num(p.has_delta, p.delta) << ","
            << opt_num(p.has_delta_s, p.delta_s) << "," << opt_num(p.has_delta_l, p.delta_l) << ","
            << region_name(p.region) << "\n";
  }
  if (!c.records.empty()) {
    int64_t m = 0;
    check(qsv_write_run_records(s, d, cps.back(), c.seed, c.records.c_str(), &m), "records");
  }
  const auto& last = pts.back();
  auto& out = *io.summary;
  out << "n: " << last.n << ", mean pass rate: " << num(last.m_pass / static_cast<double>(last.n)) << "\n";
  out << "region: " << region_name(last.region);
  if (last.has_delta_s) out << ", delta_s: " << num(last.delta_s);
  if (last.has_delta_l) out << ", delta_l: " << num(last.delta_l);
  out << "\n";
}

void run_scaling(const ExperimentConfig& c, const qsv_strategy* s, const qsv_device* d, Sinks& io) {
  std::vector<qsv_scaling_point> pts(static_cast<size_t>(c.n_max));
  size_t count = 0;
  const auto opts = run_options(c);
  check(qsv_scaling_run(s, d, c.n_max, c.effective_rounds(), c.delta, &opts, pts.data(), &count), "scaling");
  pts.resize(count);
  *io.csv << "n,epsilon,stderr\n";
  std::vector<double> ns, eps;
  for (const auto& p : pts) {
    *io.csv << p.n << "," << num(p.epsilon) << "," << num(p.std_error) << "\n";
    ns.push_back(static_cast<double>(p.n));
    eps.push_back(p.epsilon);
  }
  auto& out = *io.summary;
  out << "points: " << count << " of " << c.n_max << "\n";
  double slope = 0.0, se = 0.0;
  if (qsv_fit_loglog_slope(ns.data(), eps.data(), ns.size(), 1.0, static_cast<double>(c.n_max), &slope, &se) ==
      QSV_OK) {
    out << "log-log slope: " << num(slope) << " +- " << num(se) << "\n";
  } else {
    out << "log-log slope: unavailable (" << qsv_last_error() << ")\n";
  }
  double rate = 0.0;
  qsv_spectrum spec{};
  check(qsv_pass_probability(s, d, &rate), "pass probability");
  check(qsv_strategy_spectrum(s, &spec), "spectrum");
  double asym = 0.0;
  if (qsv_epsilon_asymptote(rate, spec.lambda2, &asym) == QSV_OK) out << "asymptote: " << num(asym) << "\n";
}

void run_tomo_compare(const ExperimentConfig& c, const qsv_strategy* s, const qsv_device* d, Sinks& io) {
  const auto cps = c.effective_checkpoints();
  std::vector<qsv_tomo_point> pts(cps.size());
  const auto opts = run_options(c);
  check(qsv_tomo_compare_run(s, d, cps.data(), cps.size(), c.effective_rounds(), c.eps_min, c.delta, c.bootstrap,
                             &opts, pts.data()),
        "tomo-compare");
  *io.csv << "n,delta_tomo,eps_tomo,delta_verif,eps_verif,fidelity,dF\n";
  std::vector<double> ns, dv, dt;
  for (const auto& p : pts) {
    *io.csv << p.n << "," << num(p.delta_tomo) << "," << num(p.eps_tomo) << "," << num(p.delta_verif) << ","
            << opt_num(p.has_eps_verif, p.eps_verif) << "," << num(p.fidelity) << "," << num(p.dF) << "\n";
    if (p.delta_tomo > 0.0 && p.delta_verif > 0.0) {
      ns.push_back(static_cast<double>(p.n));
      dv.push_back(p.delta_verif);
      dt.push_back(p.delta_tomo);
    }
  }
  auto& out = *io.summary;
  double gv = 0.0, gt = 0.0;
  if (qsv_fit_exp_decay(ns.data(), dv.data(), ns.size(), &gv, nullptr) == QSV_OK &&
      qsv_fit_exp_decay(ns.data(), dt.data(), ns.size(), &gt, nullptr) == QSV_OK) {
    out << "g_verif: " << num(gv) << ", g_tomo: " << num(gt);
    if (gt != 0.0) out << ", ratio: " << num(gv / gt);
    out << "\n";
  } else {
    out << "decay fit unavailable (" << qsv_last_error() << ")\n";
  }
}

int execute(const std::string& task, const Overrides& o) {
  ExperimentConfig c;
  StrategyPtr s;
  DevicePtr d;
  try {
    c = build_config(task, o);
    if (o.print_config) {
      std::cout << qsv_tools::serialize(c);
      return 0;
    }
    make_strategy(c, s);
    if (c.task != "strategy-info") make_device(c, s.p, d);
  } catch (const ConfigError& e) {
    std::cerr << "qsv: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RuntimeFailure& e) {
    std::cerr << "qsv: " << e.what() << "\n";
    return kExitRuntime;
  }
  try {
    Sinks io(c.output);
    if (c.task == "strategy-info") {
      run_strategy_info(c, s.p, *io.csv);
    } else if (c.task == "task-a") {
      run_task_a(c, s.p, d.p, io);
    } else if (c.task == "task-b") {
      run_task_b(c, s.p, d.p, io);
    } else if (c.task == "scaling") {
      run_scaling(c, s.p, d.p, io);
    } else {
      run_tomo_compare(c, s.p, d.p, io);
    }
    io.finish(c.output);
  } catch (const std::exception& e) {
    std::cerr << "qsv: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit state verification: strategies, simulated devices and confidence analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qsv_version());
  app.footer("Environment: QSV_THREADS sets the default worker count.\n"
             "Exit status: 0 success, 2 configuration error, 3 runtime error.");
  Overrides o;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"strategy-info", "Print test probabilities, pass operators and spectra"},
      {"task-a", "Copies until first failure over many rounds; CSV n_first,count"},
      {"task-b", "Fixed-N pass counting with Chernoff confidence; CSV n,m_pass,...,delta,delta_s,delta_l,region"},
      {"scaling", "Certifiable infidelity versus N at fixed delta; CSV n,epsilon,stderr"},
      {"tomo-compare", "Verification against nine-setting tomography; CSV n,delta_tomo,eps_tomo,delta_verif,..."},
      {"run", "Run the task named in --config"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_options(*sub, o);
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) return execute(commands[i].first, o);
  }
  return kExitConfig;
}
