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

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qsv_tools {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ConfigError("config field '" + path + "': " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  if (!obj.is_object()) field_error(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) field_error(join(path, key), "unknown key");
  }
}

double get_double(const json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  return v.get<double>();
}

std::int64_t get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) field_error(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) field_error(path, "expected a string");
  return v.get<std::string>();
}

template <class T, class Getter>
void read(const json& obj, const std::string& prefix, const char* key, T& out, Getter get) {
  if (auto it = obj.find(key); it != obj.end()) out = get(*it, join(prefix, key));
}

template <class T, class Getter>
void read_opt(const json& obj, const std::string& prefix, const char* key, std::optional<T>& out, Getter get) {
  if (auto it = obj.find(key); it != obj.end()) {
    if (it->is_null()) {
      out.reset();
    } else {
      out = get(*it, join(prefix, key));
    }
  }
}

void check_range(double v, double lo, double hi, const std::string& path, bool open_lo = false,
                 bool open_hi = false) {
  const bool ok = (open_lo ? v > lo : v >= lo) && (open_hi ? v < hi : v <= hi);
  if (!ok || std::isnan(v)) {
    std::ostringstream os;
    os << "value " << v << " outside " << (open_lo ? '(' : '[') << lo << ", " << hi << (open_hi ? ')' : ']');
    field_error(path, os.str());
  }
}

// Literal defaults for normalize(); kept separate from the struct initialisers
// so the round-trip property compares two independent descriptions.
const json& default_document() {
  static const json d = json::parse(R"({
    "task": "strategy-info",
    "target": {"theta": 0.6419, "phi": 0.0, "frame": "experimental"},
    "family": "auto",
    "device": {"eom_flip": 0.0},
    "n_copies": 20000,
    "max_copies": 1000000,
    "checkpoints": [],
    "n_max": 100,
    "eps_min": 0.001,
    "eps_max": 0.006,
    "delta": 0.1,
    "confidence": 0.99,
    "bootstrap": 100,
    "seed": 0,
    "threads": 0,
    "output": "",
    "records": ""
  })");
  return d;
}

void fill_defaults(json& doc, const json& defaults) {
  for (const auto& [key, value] : defaults.items()) {
    auto it = doc.find(key);
    if (it == doc.end()) {
      doc[key] = value;
    } else if (value.is_object() && it->is_object()) {
      fill_defaults(*it, value);
    }
  }
}

void drop_nulls(json& doc) {
  if (!doc.is_object()) return;
  for (auto it = doc.begin(); it != doc.end();) {
    if (it->is_null()) {
      it = doc.erase(it);
    } else {
      drop_nulls(*it);
      ++it;
    }
  }
}

std::string canonical(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::int64_t ExperimentConfig::effective_rounds() const {
  if (rounds) return *rounds;
  return task == "task-a" ? 10000 : 100;
}

std::vector<std::int64_t> ExperimentConfig::effective_checkpoints() const {
  if (!checkpoints.empty()) return checkpoints;
  const std::int64_t floor = task == "tomo-compare" ? 9 : 1;
  std::vector<std::int64_t> out;
  for (int k = 1; k <= 20; ++k) {
    const std::int64_t n = std::max(floor, n_copies * k / 20);
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j, {"task", "target", "family", "device", "n_copies", "rounds", "max_copies", "checkpoints",
                     "n_max", "eps_min", "eps_max", "delta", "confidence", "bootstrap", "seed", "threads",
                     "output", "records"},
                 "");
  ExperimentConfig c;
  read(j, "", "task", c.task, get_string);
  if (auto it = j.find("target"); it != j.end()) {
    reject_unknown(*it, {"theta", "phi", "frame"}, "target");
    read(*it, "target", "theta", c.target.theta, get_double);
    read(*it, "target", "phi", c.target.phi, get_double);
    read(*it, "target", "frame", c.target.frame, get_string);
  }
  read(j, "", "family", c.family, get_string);
  if (auto it = j.find("device"); it != j.end()) {
    reject_unknown(*it, {"fidelity", "p4", "mixture", "werner", "pass_rate", "eom_flip"}, "device");
    read_opt(*it, "device", "fidelity", c.device.fidelity, get_double);
    read_opt(*it, "device", "p4", c.device.p4, get_double);
    read_opt(*it, "device", "werner", c.device.werner, get_double);
    read_opt(*it, "device", "pass_rate", c.device.pass_rate, get_double);
    read(*it, "device", "eom_flip", c.device.eom_flip, get_double);
    if (auto m = it->find("mixture"); m != it->end() && !m->is_null()) {
      if (!m->is_array() || m->size() != 4) field_error("device.mixture", "expected an array of 4 numbers");
      std::array<double, 4> p{};
      for (std::size_t i = 0; i < 4; ++i) p[i] = get_double((*m)[i], "device.mixture[" + std::to_string(i) + "]");
      c.device.mixture = p;
    }
  }
  read(j, "", "n_copies", c.n_copies, get_int);
  read_opt(j, "", "rounds", c.rounds, get_int);
  read(j, "", "max_copies", c.max_copies, get_int);
  if (auto it = j.find("checkpoints"); it != j.end()) {
    if (!it->is_array()) field_error("checkpoints", "expected an array of integers");
    c.checkpoints.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      c.checkpoints.push_back(get_int((*it)[i], "checkpoints[" + std::to_string(i) + "]"));
    }
  }
  read(j, "", "n_max", c.n_max, get_int);
  read(j, "", "eps_min", c.eps_min, get_double);
  read(j, "", "eps_max", c.eps_max, get_double);
  read(j, "", "delta", c.delta, get_double);
  read(j, "", "confidence", c.confidence, get_double);
  read(j, "", "bootstrap", c.bootstrap, [](const json& v, const std::string& p) {
    const auto n = get_int(v, p);
    if (n < 0 || n > 1000000) field_error(p, "value out of range");
    return static_cast<int>(n);
  });
  read(j, "", "seed", c.seed, [](const json& v, const std::string& p) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      field_error(p, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  });
  read(j, "", "threads", c.threads, [](const json& v, const std::string& p) {
    const auto n = get_int(v, p);
    if (n < 0 || n > 4096) field_error(p, "expected an integer in [0, 4096]");
    return static_cast<unsigned>(n);
  });
  read(j, "", "output", c.output, get_string);
  read(j, "", "records", c.records, get_string);
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  const auto& tasks = known_tasks();
  if (std::find(tasks.begin(), tasks.end(), c.task) == tasks.end()) field_error("task", "unknown task '" + c.task + "'");
  check_range(c.target.theta, 0.0, kPi / 2, "target.theta");
  check_range(c.target.phi, 0.0, 2 * kPi, "target.phi", false, true);
  if (c.target.frame != "theoretical" && c.target.frame != "experimental") {
    field_error("target.frame", "expected 'theoretical' or 'experimental'");
  }
  static const std::set<std::string> families{"auto", "nonadaptive", "adaptive", "bell", "product"};
  if (!families.count(c.family)) field_error("family", "unknown family '" + c.family + "'");

  const auto& d = c.device;
  const int kinds = int(d.fidelity.has_value()) + int(d.mixture.has_value()) + int(d.werner.has_value());
  if (kinds > 1) field_error("device", "set at most one of fidelity, mixture and werner");
  if (d.fidelity) check_range(*d.fidelity, 0.0, 1.0, "device.fidelity");
  if (d.p4) {
    if (!d.fidelity) field_error("device.p4", "requires device.fidelity");
    check_range(*d.p4, 0.0, 1.0 - *d.fidelity + 1e-15, "device.p4");
  }
  if (d.mixture) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      check_range((*d.mixture)[i], 0.0, 1.0, "device.mixture[" + std::to_string(i) + "]");
      sum += (*d.mixture)[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) field_error("device.mixture", "weights must sum to 1");
  }
  if (d.werner) check_range(*d.werner, 0.0, 1.0, "device.werner");
  check_range(d.eom_flip, 0.0, 1.0, "device.eom_flip");
  if (d.pass_rate) {
    check_range(*d.pass_rate, 0.0, 1.0, "device.pass_rate", true, false);
    if (d.eom_flip != 0.0) field_error("device.pass_rate", "cannot be combined with device.eom_flip");
    if (c.family != "adaptive" && kinds > 0) {
      field_error("device.pass_rate", "sets the fidelity itself unless family is 'adaptive'");
    }
    if (c.family == "adaptive" && d.werner) {
      field_error("device.pass_rate", "adaptive calibration needs a fidelity or mixture device");
    }
  }

  if (c.n_copies < 1) field_error("n_copies", "must be at least 1");
  if (c.task == "tomo-compare" && c.n_copies < 9) field_error("n_copies", "tomography needs at least 9 copies");
  if (c.rounds && *c.rounds < 1) field_error("rounds", "must be at least 1");
  if (c.max_copies < 1) field_error("max_copies", "must be at least 1");
  for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
    const std::string p = "checkpoints[" + std::to_string(i) + "]";
    if (c.checkpoints[i] < (c.task == "tomo-compare" ? 9 : 1)) field_error(p, "too small");
    if (i > 0 && c.checkpoints[i] <= c.checkpoints[i - 1]) field_error(p, "checkpoints must be strictly increasing");
  }
  if (c.n_max < 3) field_error("n_max", "must be at least 3");
  check_range(c.eps_min, 0.0, 1.0, "eps_min", true, true);
  check_range(c.eps_max, 0.0, 1.0, "eps_max", true, true);
  if (c.eps_min > c.eps_max) field_error("eps_min", "must not exceed eps_max");
  check_range(c.delta, 0.0, 1.0, "delta", true, true);
  check_range(c.confidence, 0.0, 1.0, "confidence", true, true);
  if (c.bootstrap < 50) field_error("bootstrap", "must be at least 50");
  if (!c.records.empty() && c.task != "task-b") field_error("records", "only task-b writes per-copy records");
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string detail = e.what();
    if (auto pos = detail.find("] "); pos != std::string::npos) detail = detail.substr(pos + 2);
    throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + detail);
  }
}

ExperimentConfig parse_config(const std::string& text) { return config_from_json(parse_document(text)); }

std::string read_config_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_config_text(path)); }

json to_json(const ExperimentConfig& c) {
  json j;
  j["task"] = c.task;
  j["target"] = {{"theta", c.target.theta}, {"phi", c.target.phi}, {"frame", c.target.frame}};
  j["family"] = c.family;
  json d = {{"eom_flip", c.device.eom_flip}};
  if (c.device.fidelity) d["fidelity"] = *c.device.fidelity;
  if (c.device.p4) d["p4"] = *c.device.p4;
  if (c.device.mixture) d["mixture"] = *c.device.mixture;
  if (c.device.werner) d["werner"] = *c.device.werner;
  if (c.device.pass_rate) d["pass_rate"] = *c.device.pass_rate;
  j["device"] = d;
  j["n_copies"] = c.n_copies;
  if (c.rounds) j["rounds"] = *c.rounds;
  j["max_copies"] = c.max_copies;
  j["checkpoints"] = c.checkpoints;
  j["n_max"] = c.n_max;
  j["eps_min"] = c.eps_min;
  j["eps_max"] = c.eps_max;
  j["delta"] = c.delta;
  j["confidence"] = c.confidence;
  j["bootstrap"] = c.bootstrap;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["output"] = c.output;
  j["records"] = c.records;
  return j;
}

std::string serialize(const ExperimentConfig& c) { return canonical(to_json(c)); }

std::string normalize(const std::string& text) {
  json doc = parse_document(text);
  drop_nulls(doc);
  fill_defaults(doc, default_document());
  // Integral values given as e.g. 0 for a real-valued field print as reals.
  for (const char* key : {"eps_min", "eps_max", "delta", "confidence"}) doc[key] = doc[key].get<double>();
  for (const char* key : {"theta", "phi"}) doc["target"][key] = doc["target"][key].get<double>();
  for (auto& [key, value] : doc["device"].items()) {
    if (value.is_number()) value = value.get<double>();
    if (value.is_array()) {
      for (auto& x : value) x = x.get<double>();
    }
  }
  return canonical(doc);
}

void set_path(json& j, const std::string& dotted, const json& value) {
  json* node = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace qsv_tools
