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

#ifndef AAGUARD_SYNTHETIC_HPP_
#define AAGUARD_SYNTHETIC_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aaguard/matrix.hpp"

namespace aaguard::synth {

enum class Distribution {
  kConstant,              // value
  kBernoulli,             // p
  kPoisson,               // lambda
  kLognormal,             // mu, sigma
  kZeroInflatedLognormal, // pi (zero mass), mu, sigma
  kPareto,                // alpha, x_min
};

struct EventSpec {
  std::string event_id;
  Distribution distribution = Distribution::kConstant;
  // Parameters in declaration order of the distribution comment above.
  double param1 = 0.0;
  double param2 = 0.0;
  double param3 = 0.0;
};

// Seeded description of a synthetic user population.
struct PopulationSpec {
  std::uint64_t users = 0;
  std::uint64_t seed = 0;
  std::vector<EventSpec> events;
};

// JSON spec file, documented in the README:
//   {"users": N, "seed": S, "events": [
//      {"event_id": "...", "distribution": "...", "params": {...}}, ...]}
PopulationSpec load_population_spec(const std::filesystem::path& path);

// Draws one outcome column per event. Deterministic in the seed; every
// event uses its own substream keyed on (seed, event_id), so adding or
// reordering events never perturbs the other columns.
UserMetricMatrix generate(const PopulationSpec& spec);

}  // namespace aaguard::synth

#endif  // AAGUARD_SYNTHETIC_HPP_
