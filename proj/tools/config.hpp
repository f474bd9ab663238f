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

// Experiment configuration for the qsv command-line runner: a JSON document
// with nested target/device sections, overridable from the command line.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qsv_tools {

/// Malformed or out-of-range configuration; the message names the field
/// (as a dotted path) or the line and column of a syntax error.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TargetConfig {
  double theta = 0.6419;
  double phi = 0.0;
  std::string frame = "experimental";
};

/// At most one of fidelity, mixture and werner selects the device; with none
/// the device emits the exact target. pass_rate derives the fidelity for the
/// nonadaptive-type families and calibrates eom_flip for the adaptive one.
struct DeviceConfig {
  std::optional<double> fidelity;
  std::optional<double> p4;
  std::optional<std::array<double, 4>> mixture;
  std::optional<double> werner;
  std::optional<double> pass_rate;
  double eom_flip = 0.0;
};

struct ExperimentConfig {
  std::string task = "strategy-info";
  TargetConfig target;
  std::string family = "auto";
  DeviceConfig device;
  std::int64_t n_copies = 20000;
  std::optional<std::int64_t> rounds;  ///< defaults to 10000 for task-a, 100 otherwise
  std::int64_t max_copies = 1000000;
  std::vector<std::int64_t> checkpoints;  ///< empty: derived from n_copies
  std::int64_t n_max = 100;
  double eps_min = 0.001;
  double eps_max = 0.006;
  double delta = 0.1;
  double confidence = 0.99;
  int bootstrap = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string output;
  std::string records;

  std::int64_t effective_rounds() const;
  /// Explicit checkpoints, or 20 evenly spaced counts up to n_copies
  /// (starting at 9 copies for tomo-compare).
  std::vector<std::int64_t> effective_checkpoints() const;
};

inline const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> tasks{"strategy-info", "task-a", "task-b", "scaling", "tomo-compare"};
  return tasks;
}

/// Parses a JSON document, reporting syntax errors with line and column.
nlohmann::json parse_document(const std::string& text);

/// Parses JSON text. Unknown keys, wrong types and out-of-range values throw
/// ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig config_from_json(const nlohmann::json& j);
std::string read_config_text(const std::string& path);
ExperimentConfig load_config(const std::string& path);

/// Checks ranges and cross-field consistency.
void validate(const ExperimentConfig& c);

nlohmann::json to_json(const ExperimentConfig& c);
/// Canonical text: every non-optional field present, keys sorted, 2-space indent.
std::string serialize(const ExperimentConfig& c);
/// Canonical text of a JSON config with documented defaults filled in,
/// computed on the document without going through ExperimentConfig.
std::string normalize(const std::string& text);

/// Sets a dotted path such as "device.fidelity" in a JSON document.
void set_path(nlohmann::json& j, const std::string& dotted, const nlohmann::json& value);

}  // namespace qsv_tools
