// Copyright 2026 The aa-guard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aaguard/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "aaguard/errors.hpp"
#include "aaguard/rng.hpp"

namespace aaguard::synth {

namespace {

double require_param(const nlohmann::json& params, const char* name,
                     const std::string& event_id) {
  if (!params.contains(name) || !params[name].is_number()) {
    throw std::invalid_argument("event '" + event_id +
                                "': missing numeric parameter '" + name + "'");
  }
  return params[name].get<double>();
}

void validate(const EventSpec& ev) {
  const auto fail = [&](const std::string& why) {
    throw std::invalid_argument("event '" + ev.event_id + "': " + why);
  };
  switch (ev.distribution) {
    case Distribution::kConstant:
      if (!std::isfinite(ev.param1)) fail("constant value must be finite");
      break;
    case Distribution::kBernoulli:
      if (!(ev.param1 >= 0.0 && ev.param1 <= 1.0)) fail("p must be in [0, 1]");
      break;
    case Distribution::kPoisson:
      if (!(ev.param1 >= 0.0) || !std::isfinite(ev.param1)) {
        fail("lambda must be finite and >= 0");
      }
      break;
    case Distribution::kLognormal:
      if (!std::isfinite(ev.param1)) fail("mu must be finite");
      if (!(ev.param2 > 0.0)) fail("sigma must be > 0");
      break;
    case Distribution::kZeroInflatedLognormal:
      if (!(ev.param1 >= 0.0 && ev.param1 <= 1.0)) fail("pi must be in [0, 1]");
      if (!std::isfinite(ev.param2)) fail("mu must be finite");
      if (!(ev.param3 > 0.0)) fail("sigma must be > 0");
      break;
    case Distribution::kPareto:
      if (!(ev.param1 > 0.0)) fail("alpha must be > 0");
      if (!(ev.param2 > 0.0)) fail("x_min must be > 0");
      break;
  }
}

double draw(const EventSpec& ev, SplitMix64& rng) {
  switch (ev.distribution) {
    case Distribution::kConstant:
      return ev.param1;
    case Distribution::kBernoulli:
      return rng.uniform01() < ev.param1 ? 1.0 : 0.0;
    case Distribution::kPoisson:
      return static_cast<double>(rng.poisson(ev.param1));
    case Distribution::kLognormal:
      return rng.lognormal(ev.param1, ev.param2);
    case Distribution::kZeroInflatedLognormal:
      if (rng.uniform01() < ev.param1) return 0.0;
      return rng.lognormal(ev.param2, ev.param3);
    case Distribution::kPareto:
      return rng.pareto(ev.param1, ev.param2);
  }
  throw std::logic_error("unreachable distribution kind");
}

Distribution parse_distribution(const std::string& name,
                                const std::string& event_id) {
  if (name == "constant") return Distribution::kConstant;
  if (name == "bernoulli") return Distribution::kBernoulli;
  if (name == "poisson") return Distribution::kPoisson;
  if (name == "lognormal") return Distribution::kLognormal;
  if (name == "zero_inflated_lognormal") {
    return Distribution::kZeroInflatedLognormal;
  }
  if (name == "pareto") return Distribution::kPareto;
  throw std::invalid_argument("event '" + event_id +
                              "': unknown distribution '" + name + "'");
}

}  // namespace

PopulationSpec load_population_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("invalid population spec JSON: " +
                                std::string(e.what()));
  }

  PopulationSpec spec;
  if (!doc.contains("users") || !doc["users"].is_number_unsigned()) {
    throw std::invalid_argument("population spec: missing count field 'users'");
  }
  spec.users = doc["users"].get<std::uint64_t>();
  if (!doc.contains("seed") || !doc["seed"].is_number_unsigned()) {
    throw std::invalid_argument("population spec: missing field 'seed'");
  }
  spec.seed = doc["seed"].get<std::uint64_t>();
  if (!doc.contains("events") || !doc["events"].is_array() ||
      doc["events"].empty()) {
    throw std::invalid_argument(
        "population spec: 'events' must be a non-empty array");
  }

  for (const auto& entry : doc["events"]) {
    EventSpec ev;
    if (!entry.contains("event_id") || !entry["event_id"].is_string()) {
      throw std::invalid_argument("population spec: event without 'event_id'");
    }
    ev.event_id = entry["event_id"].get<std::string>();
    if (!entry.contains("distribution") || !entry["distribution"].is_string()) {
      throw std::invalid_argument("event '" + ev.event_id +
                                  "': missing 'distribution'");
    }
    ev.distribution = parse_distribution(
        entry["distribution"].get<std::string>(), ev.event_id);
    const nlohmann::json params =
        entry.contains("params") ? entry["params"] : nlohmann::json::object();

    switch (ev.distribution) {
      case Distribution::kConstant:
        ev.param1 = require_param(params, "value", ev.event_id);
        break;
      case Distribution::kBernoulli:
        ev.param1 = require_param(params, "p", ev.event_id);
        break;
      case Distribution::kPoisson:
        ev.param1 = require_param(params, "lambda", ev.event_id);
        break;
      case Distribution::kLognormal:
        ev.param1 = require_param(params, "mu", ev.event_id);
        ev.param2 = require_param(params, "sigma", ev.event_id);
        break;
      case Distribution::kZeroInflatedLognormal:
        ev.param1 = require_param(params, "pi", ev.event_id);
        ev.param2 = require_param(params, "mu", ev.event_id);
        ev.param3 = require_param(params, "sigma", ev.event_id);
        break;
      case Distribution::kPareto:
        ev.param1 = require_param(params, "alpha", ev.event_id);
        ev.param2 = require_param(params, "x_min", ev.event_id);
        break;
    }
    spec.events.push_back(std::move(ev));
  }
  return spec;
}

UserMetricMatrix generate(const PopulationSpec& spec) {
  if (spec.users < 4) {
    throw std::invalid_argument("population spec: need at least 4 users");
  }
  if (spec.events.empty()) {
    throw std::invalid_argument("population spec: need at least 1 event");
  }
  std::unordered_set<std::string> seen;
  for (const EventSpec& ev : spec.events) {
    if (ev.event_id.empty()) {
      throw std::invalid_argument("population spec: empty event_id");
    }
    if (!seen.insert(ev.event_id).second) {
      throw std::invalid_argument("population spec: duplicate event_id '" +
                                  ev.event_id + "'");
    }
    validate(ev);
  }

  UserMetricMatrix matrix;
  matrix.user_ids.reserve(spec.users);
  for (std::uint64_t u = 0; u < spec.users; ++u) {
    matrix.user_ids.push_back("u" + std::to_string(u + 1));
  }

  for (const EventSpec& ev : spec.events) {
    matrix.event_ids.push_back(ev.event_id);
    SplitMix64 rng(derive_seed(spec.seed, fnv1a64(ev.event_id)));

    UserMetricMatrix::Column col;
    std::uint64_t nonzero = 0;
    for (std::uint64_t u = 0; u < spec.users; ++u) {
      const double v = draw(ev, rng);
      if (v != 0.0) {
        col.users.push_back(static_cast<std::uint32_t>(u));
        col.values.push_back(v);
        ++nonzero;
      }
    }
    matrix.columns.push_back(std::move(col));
    matrix.observation_counts.push_back(nonzero);
  }
  return matrix;
}

}  // namespace aaguard::synth
