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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "config.hpp"

using namespace qsv_tools;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Random valid configuration; fields left at their defaults are chosen at random too.
ExperimentConfig random_config(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto coin = [&] { return u(g) < 0.5; };
  ExperimentConfig c;
  const auto& tasks = known_tasks();
  c.task = tasks[g() % tasks.size()];
  c.target.theta = 0.05 + 0.7 * u(g);
  c.target.phi = 6.28 * u(g);
  c.target.frame = coin() ? "experimental" : "theoretical";
  c.family = coin() ? "nonadaptive" : "adaptive";
  switch (g() % 4) {
    case 0:
      c.device.fidelity = 0.9 + 0.1 * u(g);
      if (coin()) c.device.p4 = (1.0 - *c.device.fidelity) * u(g) * 0.5;
      break;
    case 1: {
      const double a = 0.9 + 0.05 * u(g);
      const double b = (1 - a) * u(g);
      c.device.mixture = std::array<double, 4>{a, b, 1 - a - b, 0.0};
      break;
    }
    case 2:
      c.device.werner = u(g);
      break;
    default:
      break;
  }
  if (coin()) c.device.eom_flip = 0.01 * u(g);
  c.n_copies = 9 + static_cast<std::int64_t>(g() % 100000);
  if (coin()) c.rounds = 1 + static_cast<std::int64_t>(g() % 1000);
  c.max_copies = 1 + static_cast<std::int64_t>(g() % 10000000);
  if (coin()) {
    std::int64_t n = 9;
    for (int i = 0; i < 5; ++i) c.checkpoints.push_back(n += 1 + static_cast<std::int64_t>(g() % 500));
  }
  c.n_max = 3 + static_cast<std::int64_t>(g() % 200);
  c.eps_min = 0.0001 + 0.01 * u(g);
  c.eps_max = c.eps_min + 0.02 * u(g);
  c.delta = 0.001 + 0.5 * u(g);
  c.confidence = 0.5 + 0.49 * u(g);
  c.bootstrap = 50 + static_cast<int>(g() % 500);
  c.seed = g();
  c.threads = static_cast<unsigned>(g() % 16);
  if (coin()) c.output = "out-" + std::to_string(g() % 1000) + ".csv";
  if (c.task == "task-b" && coin()) c.records = "records.csv";
  validate(c);
  return c;
}

}  // namespace

TEST_CASE("defaults") {
  const auto c = parse_config("{}");
  CHECK(c.seed == 0);
  CHECK(c.task == "strategy-info");
  CHECK(c.family == "auto");
  CHECK(c.target.theta == 0.6419);
  CHECK(c.n_copies == 20000);
  CHECK(c.effective_rounds() == 100);
  CHECK(parse_config(R"({"task": "task-a"})").effective_rounds() == 10000);
  CHECK(c.threads == 0);
}

TEST_CASE("effective checkpoints") {
  auto c = parse_config(R"({"task": "task-b", "n_copies": 100})");
  const auto cp = c.effective_checkpoints();
  REQUIRE(cp.size() == 20);
  CHECK(cp.front() == 5);
  CHECK(cp.back() == 100);
  c = parse_config(R"({"task": "tomo-compare", "n_copies": 100})");
  CHECK(c.effective_checkpoints().front() == 9);
  c = parse_config(R"({"checkpoints": [10, 20]})");
  CHECK(c.effective_checkpoints() == std::vector<std::int64_t>{10, 20});
}

TEST_CASE("serialize and parse round-trip over generated configs") {
  std::mt19937_64 g(2026);
  for (int t = 0; t < 500; ++t) {
    const auto c = random_config(g);
    const std::string text = serialize(c);
    const auto back = parse_config(text);
    CHECK(serialize(back) == text);
    CHECK(normalize(text) == text);
  }
}

TEST_CASE("normalize fills the documented defaults") {
  for (const char* text : {"{}", R"({"task": "scaling", "target": {"theta": 0.3}})",
                           R"({"device": {"fidelity": 0.99, "p4": null}, "seed": 7})",
                           R"({"delta": 1e-2, "eps_min": 1e-3})"}) {
    CHECK(normalize(text) == serialize(parse_config(text)));
  }
}

TEST_CASE("syntax errors report line and column") {
  const auto e = error_of("{\n  \"task\": \"task-a\",\n  \"seed\": ,\n}");
  CHECK(contains(e, "line 3"));
  CHECK(contains(e, "column"));
}

TEST_CASE("field errors name the dotted path") {
  CHECK(contains(error_of(R"({"device": {"fidelty": 0.9}})"), "device.fidelty"));
  CHECK(contains(error_of(R"({"device": {"fidelty": 0.9}})"), "unknown key"));
  CHECK(contains(error_of(R"({"target": {"theta": 2.0}})"), "target.theta"));
  CHECK(contains(error_of(R"({"target": {"theta": "small"}})"), "expected a number"));
  CHECK(contains(error_of(R"({"device": {"mixture": [0.5, 0.5, 0.5, "x"]}})"), "device.mixture[3]"));
  CHECK(contains(error_of(R"({"checkpoints": [10, 5]})"), "checkpoints[1]"));
  CHECK(contains(error_of(R"({"seed": -1})"), "seed"));
  CHECK(contains(error_of(R"({"task": "task-c"})"), "unknown task"));
  CHECK(contains(error_of(R"({"eps_min": 0.01, "eps_max": 0.001})"), "eps_min"));
  CHECK(contains(error_of(R"({"device": {"fidelity": 0.9, "werner": 0.9}})"), "at most one"));
  CHECK(contains(error_of(R"({"device": {"p4": 0.01}})"), "requires device.fidelity"));
  CHECK(contains(error_of(R"({"records": "r.csv"})"), "records"));
  CHECK(contains(error_of(R"({"bootstrap": 10})"), "bootstrap"));
  CHECK(contains(error_of("[1, 2]"), "expected an object"));
}

TEST_CASE("set_path writes nested keys") {
  nlohmann::json j = nlohmann::json::object();
  set_path(j, "device.fidelity", 0.95);
  set_path(j, "seed", 3);
  const auto c = config_from_json(j);
  REQUIRE(c.device.fidelity);
  CHECK(*c.device.fidelity == 0.95);
  CHECK(c.seed == 3);
}

TEST_CASE("missing config file") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
