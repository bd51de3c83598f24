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

#ifndef AAGUARD_STATS_HPP_
#define AAGUARD_STATS_HPP_

#include <cstddef>
#include <span>
#include <vector>

// Pure numerical statistics: the normal special functions, the two-group
// z-test pipeline, the Kolmogorov-Smirnov uniformity test, and the rank /
// skewness diagnostics. Everything here is a pure function of its inputs
// and safe to call from any number of threads.

namespace aaguard::stats {

// Moment summary of one group's outcome vector. Variance and skewness use
// 1/n central moments (population form). Skewness of a constant sample is
// defined as 0.
struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  std::size_t n_nonzero = 0;
};

// Difference-in-means estimate for one two-group comparison.
struct AteEstimate {
  double ate = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double z = 0.0;
  double p = 1.0;
  double alpha = 0.05;
};

// One-sample KS test result against the uniform CDF on [0, 1].
// `small_sample` is set when n < 100, where the asymptotic Kolmogorov
// p-value is only a rough guide.
struct KsResult {
  double d = 0.0;
  double p = 1.0;
  std::size_t n = 0;
  bool small_sample = false;
};

// Standard normal CDF. Absolute error below 1e-12 on finite inputs.
// Throws std::invalid_argument for non-finite x.
double normal_cdf(double x);

// Standard normal quantile, the functional inverse of normal_cdf to within
// 1e-10 in probability space. Domain (0, 1), exclusive.
double inverse_normal_cdf(double q);

// Mean, 1/n variance, sample skewness and nonzero count of `values`.
// Throws std::invalid_argument on an empty or non-finite input.
SampleSummary summarize(std::span<const double> values);

// Two-group z-test: difference in means, pooled-per-group standard error,
// normal confidence interval at level alpha, z-score and two-tailed
// p-value. Degenerate zero-variance comparisons resolve to p = 1 when the
// difference is zero and p = 0 otherwise.
// Throws InsufficientDataError when either group has n < 2.
AteEstimate ate_estimate(const SampleSummary& control,
                         const SampleSummary& treatment, double alpha);

// Two-sided one-sample KS statistic of `pvalues` against Uniform[0,1],
// with the asymptotic Kolmogorov p-value Q(sqrt(n) * d).
KsResult ks_uniform_test(std::span<const double> pvalues);

// Kolmogorov survival function Q(lambda) = 2 * sum_{k>=1} (-1)^{k-1}
// exp(-2 k^2 lambda^2), with Q(0) = 1 by continuity.
double kolmogorov_sf(double lambda);

// 1-based average ranks (ties get the mean of their rank range).
std::vector<double> average_ranks(std::span<const double> values);

// Spearman rank correlation with average-rank tie handling. Returns 0 when
// either side has no rank variation. Requires equal lengths and n >= 2.
double spearman_rho(std::span<const double> x, std::span<const double> y);

// min(1, p * m) for each p, where m is the number of tests.
std::vector<double> bonferroni_adjust(std::span<const double> pvalues);

}  // namespace aaguard::stats

#endif  // AAGUARD_STATS_HPP_
