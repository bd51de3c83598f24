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

#ifndef AAGUARD_RESAMPLER_HPP_
#define AAGUARD_RESAMPLER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "aaguard/matrix.hpp"

// Repeatedly partitions the user population into two groups that received
// identical treatment, runs the z-test pipeline per split, and collects
// the per-event p-value samples. Splits derive from a keyed hash of
// (master_seed, iteration), so iterations are independent work units and
// the result is bit-identical for any thread count.

namespace aaguard::resampling {

struct ResamplePlan {
  std::uint64_t iterations = 5000;
  std::uint64_t master_seed = 42;
  double alpha = 0.05;
  double split_fraction = 0.5;     // share of users assigned to group A
  bool include_zero_users = true;  // zeros stay in the denominator
};

// All p-values collected for one event across the plan's iterations.
struct PvalueSample {
  std::string event_id;
  std::vector<double> pvalues;              // length == plan.iterations
  std::uint64_t reject_count_at_alpha = 0;  // |{p : p < alpha}|
};

// Disjoint index sets covering all users; both sorted ascending.
struct PopulationSplit {
  std::vector<std::uint32_t> group_a;
  std::vector<std::uint32_t> group_b;
};

// The uniformly random partition used by iteration `iteration_index` under
// `plan`. |group_a| = round(split_fraction * user_count). Deterministic in
// (master_seed, iteration_index); throws InsufficientDataError when
// user_count < 4 or either side would drop below 2 users.
PopulationSplit split_population(std::size_t user_count,
                                 std::uint64_t iteration_index,
                                 const ResamplePlan& plan);

// Runs the full A/A audit: one split per iteration, shared across all
// event columns; per event the two groups' outcomes feed the z-test and
// the two-tailed p-value is recorded. `threads` = 0 picks the hardware
// concurrency. Output is ordered by matrix event index and is identical
// for every thread count.
std::vector<PvalueSample> run_aa_audit(const UserMetricMatrix& matrix,
                                       const ResamplePlan& plan,
                                       unsigned threads = 0);

}  // namespace aaguard::resampling

#endif  // AAGUARD_RESAMPLER_HPP_
