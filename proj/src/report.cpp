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

#include "aaguard/report.hpp"

#include <algorithm>
#include <cmath>

#include "aaguard/quantize.hpp"
#include "aaguard/stats.hpp"

namespace aaguard::report {

namespace {

std::vector<std::uint64_t> pvalue_histogram(const std::vector<double>& pvalues) {
  std::vector<std::uint64_t> bins(kPvalueHistogramBins, 0);
  for (double p : pvalues) {
    auto b = static_cast<int>(p * kPvalueHistogramBins);
    b = std::clamp(b, 0, kPvalueHistogramBins - 1);  // p == 1 lands in the top bin
    ++bins[static_cast<std::size_t>(b)];
  }
  return bins;
}

void outcome_histogram(const std::vector<double>& column, EventAudit& audit) {
  const auto [lo_it, hi_it] = std::minmax_element(column.begin(), column.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (lo == hi) hi = lo + 1.0;  // constant column: single occupied bin

  const double width = (hi - lo) / kOutcomeHistogramBins;
  audit.outcome_bin_edges.resize(kOutcomeHistogramBins + 1);
  for (int b = 0; b <= kOutcomeHistogramBins; ++b) {
    audit.outcome_bin_edges[static_cast<std::size_t>(b)] = lo + width * b;
  }

  std::vector<std::uint64_t> counts(kOutcomeHistogramBins, 0);
  for (double v : column) {
    auto b = static_cast<int>((v - lo) / width);
    b = std::clamp(b, 0, kOutcomeHistogramBins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  const double n = static_cast<double>(column.size());
  audit.outcome_densities.resize(kOutcomeHistogramBins);
  for (int b = 0; b < kOutcomeHistogramBins; ++b) {
    audit.outcome_densities[static_cast<std::size_t>(b)] =
        static_cast<double>(counts[static_cast<std::size_t>(b)]) / (n * width);
  }
}

}  // namespace

AuditReport audit(const UserMetricMatrix& matrix,
                  const resampling::ResamplePlan& plan, double flag_threshold,
                  unsigned threads) {
  if (!(flag_threshold > 0.0 && flag_threshold <= 1.0)) {
    throw std::invalid_argument("audit: flag_threshold must be in (0, 1]");
  }

  AuditReport rep;
  rep.plan = plan;
  rep.flag_threshold = quantize10(flag_threshold);
  rep.n_users = matrix.user_count();

  const std::vector<resampling::PvalueSample> samples =
      resampling::run_aa_audit(matrix, plan, threads);

  const double n_events = static_cast<double>(samples.size());
  std::vector<double> frequencies;
  std::vector<double> skewnesses;
  std::vector<double> d_stats;

  for (std::size_t e = 0; e < samples.size(); ++e) {
    const resampling::PvalueSample& sample = samples[e];
    EventAudit ev;
    ev.event_id = sample.event_id;
    ev.n_users = matrix.user_count();
    ev.n_observations = matrix.observation_counts[e];
    ev.low_data = ev.n_observations < kLowDataObservations;

    const std::vector<double> column = matrix.dense_column(e);
    const stats::SampleSummary summary = stats::summarize(column);
    ev.mean_outcome = summary.mean;
    ev.skewness = summary.skewness;

    const stats::KsResult ks = stats::ks_uniform_test(sample.pvalues);
    ev.ks_d = ks.d;
    ev.ks_p = ks.p;
    ev.ks_small_sample = ks.small_sample;
    ev.ks_p_bonferroni = std::min(1.0, ks.p * n_events);
    ev.empirical_type1_rate =
        static_cast<double>(sample.reject_count_at_alpha) /
        static_cast<double>(plan.iterations);

    ev.pvalue_histogram = pvalue_histogram(sample.pvalues);
    outcome_histogram(column, ev);

    frequencies.push_back(static_cast<double>(ev.n_observations));
    skewnesses.push_back(ev.skewness);
    d_stats.push_back(ev.ks_d);
    rep.events.push_back(std::move(ev));
  }

  // Rank correlations need at least two events to mean anything.
  if (rep.events.size() >= 2) {
    rep.spearman_frequency_vs_d = stats::spearman_rho(frequencies, d_stats);
    rep.spearman_skewness_vs_d = stats::spearman_rho(skewnesses, d_stats);
  }

  std::vector<std::size_t> flagged;
  for (std::size_t e = 0; e < rep.events.size(); ++e) {
    if (rep.events[e].ks_p_bonferroni < flag_threshold) flagged.push_back(e);
  }
  std::stable_sort(flagged.begin(), flagged.end(),
                   [&](std::size_t a, std::size_t b) {
                     return rep.events[a].ks_p < rep.events[b].ks_p;
                   });
  for (std::size_t e : flagged) {
    rep.flagged_events.push_back(rep.events[e].event_id);
  }

  for (EventAudit& ev : rep.events) {
    ev.mean_outcome = quantize10(ev.mean_outcome);
    ev.skewness = quantize10(ev.skewness);
    ev.ks_d = quantize10(ev.ks_d);
    ev.ks_p = quantize10(ev.ks_p);
    ev.ks_p_bonferroni = quantize10(ev.ks_p_bonferroni);
    ev.empirical_type1_rate = quantize10(ev.empirical_type1_rate);
    for (double& edge : ev.outcome_bin_edges) edge = quantize10(edge);
    for (double& d : ev.outcome_densities) d = quantize10(d);
  }
  rep.spearman_frequency_vs_d = quantize10(rep.spearman_frequency_vs_d);
  rep.spearman_skewness_vs_d = quantize10(rep.spearman_skewness_vs_d);
  return rep;
}

}  // namespace aaguard::report
