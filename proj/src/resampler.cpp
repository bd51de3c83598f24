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

#include "aaguard/resampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "aaguard/errors.hpp"
#include "aaguard/rng.hpp"
#include "aaguard/stats.hpp"

namespace aaguard::resampling {

namespace {

void validate_plan(const ResamplePlan& plan) {
  if (plan.iterations < 1) {
    throw std::invalid_argument("plan: iterations must be >= 1");
  }
  if (!(plan.alpha > 0.0 && plan.alpha < 1.0)) {
    throw std::invalid_argument("plan: alpha must be in (0, 1)");
  }
  if (!(plan.split_fraction > 0.0 && plan.split_fraction < 1.0)) {
    throw std::invalid_argument("plan: split_fraction must be in (0, 1)");
  }
}

std::size_t group_a_size(std::size_t user_count, const ResamplePlan& plan) {
  if (user_count < 4) {
    throw InsufficientDataError("population: need at least 4 users");
  }
  const auto k = static_cast<std::size_t>(
      std::lround(plan.split_fraction * static_cast<double>(user_count)));
  if (k < 2 || user_count - k < 2) {
    throw InsufficientDataError(
        "population: split leaves fewer than 2 users in one group");
  }
  return k;
}

// Partial Fisher-Yates: after the loop, perm[0..k) is a uniformly random
// k-subset (in random order) of the identity permutation perm started as.
void shuffle_first_k(std::vector<std::uint32_t>& perm, std::size_t k,
                     SplitMix64& rng) {
  const std::size_t n = perm.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.bounded(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[i], perm[j]);
  }
}

// Raw moment accumulator for one group within one column.
struct GroupMoments {
  double sum = 0.0;
  double sumsq = 0.0;
  double sumcube = 0.0;
  std::size_t nonzero = 0;
};

stats::SampleSummary to_summary(const GroupMoments& g, std::size_t n) {
  stats::SampleSummary s;
  s.n = n;
  s.n_nonzero = g.nonzero;
  const double dn = static_cast<double>(n);
  s.mean = g.sum / dn;
  const double raw2 = g.sumsq / dn;
  const double raw3 = g.sumcube / dn;
  s.variance = std::max(0.0, raw2 - s.mean * s.mean);
  const double m3 = raw3 - 3.0 * s.mean * raw2 + 2.0 * s.mean * s.mean * s.mean;
  s.skewness =
      s.variance > 0.0 ? m3 / (s.variance * std::sqrt(s.variance)) : 0.0;
  return s;
}

// Scratch owned by one worker thread.
struct IterationScratch {
  std::vector<std::uint32_t> perm;
  std::vector<std::uint8_t> in_a;
};

void run_one_iteration(const UserMetricMatrix& matrix, const ResamplePlan& plan,
                       std::uint64_t iteration, std::size_t k,
                       const std::vector<std::uint32_t>& identity,
                       IterationScratch& scratch,
                       std::vector<std::vector<double>>& pvalues) {
  const std::size_t n = matrix.user_count();
  scratch.perm.assign(identity.begin(), identity.end());
  SplitMix64 rng(derive_seed(plan.master_seed, iteration));
  shuffle_first_k(scratch.perm, k, rng);

  std::fill(scratch.in_a.begin(), scratch.in_a.end(), 0);
  for (std::size_t i = 0; i < k; ++i) scratch.in_a[scratch.perm[i]] = 1;

  for (std::size_t e = 0; e < matrix.event_count(); ++e) {
    const auto& col = matrix.columns[e];
    GroupMoments g[2];
    for (std::size_t i = 0; i < col.users.size(); ++i) {
      const double v = col.values[i];
      GroupMoments& m = g[scratch.in_a[col.users[i]]];
      m.sum += v;
      m.sumsq += v * v;
      m.sumcube += v * v * v;
      ++m.nonzero;
    }

    double p;
    if (plan.include_zero_users) {
      const stats::SampleSummary a = to_summary(g[1], k);
      const stats::SampleSummary b = to_summary(g[0], n - k);
      p = stats::ate_estimate(a, b, plan.alpha).p;
    } else if (g[1].nonzero < 2 || g[0].nonzero < 2) {
      // Not enough contributing users on one side: no evidence either way.
      p = 1.0;
    } else {
      const stats::SampleSummary a = to_summary(g[1], g[1].nonzero);
      const stats::SampleSummary b = to_summary(g[0], g[0].nonzero);
      p = stats::ate_estimate(a, b, plan.alpha).p;
    }
    pvalues[e][iteration] = p;
  }
}

}  // namespace

PopulationSplit split_population(std::size_t user_count,
                                 std::uint64_t iteration_index,
                                 const ResamplePlan& plan) {
  validate_plan(plan);
  const std::size_t k = group_a_size(user_count, plan);

  std::vector<std::uint32_t> perm(user_count);
  std::iota(perm.begin(), perm.end(), 0);
  SplitMix64 rng(derive_seed(plan.master_seed, iteration_index));
  shuffle_first_k(perm, k, rng);

  PopulationSplit split;
  split.group_a.assign(perm.begin(), perm.begin() + static_cast<long>(k));
  split.group_b.assign(perm.begin() + static_cast<long>(k), perm.end());
  std::sort(split.group_a.begin(), split.group_a.end());
  std::sort(split.group_b.begin(), split.group_b.end());
  return split;
}

std::vector<PvalueSample> run_aa_audit(const UserMetricMatrix& matrix,
                                       const ResamplePlan& plan,
                                       unsigned threads) {
  validate_plan(plan);
  if (matrix.event_count() < 1) {
    throw InsufficientDataError("matrix: need at least 1 event column");
  }
  const std::size_t n = matrix.user_count();
  const std::size_t k = group_a_size(n, plan);

  std::vector<std::uint32_t> identity(n);
  std::iota(identity.begin(), identity.end(), 0);

  std::vector<std::vector<double>> pvalues(matrix.event_count());
  for (auto& v : pvalues) v.resize(plan.iterations);

  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  const std::uint64_t iters = plan.iterations;
  threads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, iters));

  // Static partition of the iteration range; every slot is written exactly
  // once, indexed by iteration, so the outcome cannot depend on scheduling.
  auto worker = [&](std::uint64_t begin, std::uint64_t end) {
    IterationScratch scratch;
    scratch.perm.resize(n);
    scratch.in_a.resize(n);
    for (std::uint64_t it = begin; it < end; ++it) {
      run_one_iteration(matrix, plan, it, k, identity, scratch, pvalues);
    }
  };

  if (threads <= 1) {
    worker(0, iters);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::uint64_t chunk = (iters + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t begin = static_cast<std::uint64_t>(t) * chunk;
      const std::uint64_t end = std::min(iters, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<PvalueSample> samples;
  samples.reserve(matrix.event_count());
  for (std::size_t e = 0; e < matrix.event_count(); ++e) {
    PvalueSample s;
    s.event_id = matrix.event_ids[e];
    s.pvalues = std::move(pvalues[e]);
    s.reject_count_at_alpha = static_cast<std::uint64_t>(
        std::count_if(s.pvalues.begin(), s.pvalues.end(),
                      [&](double p) { return p < plan.alpha; }));
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace aaguard::resampling
