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

#ifndef AAGUARD_REPORT_HPP_
#define AAGUARD_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aaguard/matrix.hpp"
#include "aaguard/resampler.hpp"

namespace aaguard::report {

inline constexpr int kPvalueHistogramBins = 20;
inline constexpr int kOutcomeHistogramBins = 20;
inline constexpr std::uint64_t kLowDataObservations = 10;

// Per-event audit outcome and diagnostics.
struct EventAudit {
  std::string event_id;
  std::uint64_t n_users = 0;
  std::uint64_t n_observations = 0;  // event frequency
  double mean_outcome = 0.0;
  double skewness = 0.0;
  double ks_d = 0.0;
  double ks_p = 1.0;
  double ks_p_bonferroni = 1.0;
  double empirical_type1_rate = 0.0;
  bool low_data = false;          // fewer than 10 observations
  bool ks_small_sample = false;   // asymptotic p-value with n < 100
  // Counts of A/A p-values in 20 equal-width bins over [0, 1]; sums to the
  // plan's iteration count.
  std::vector<std::uint64_t> pvalue_histogram;
  // Outcome-distribution histogram backing the density plot data.
  std::vector<double> outcome_bin_edges;  // 21 edges
  std::vector<double> outcome_densities;  // 20 normalized densities
};

struct AuditReport {
  resampling::ResamplePlan plan;
  double flag_threshold = 1e-4;
  std::uint64_t n_users = 0;
  std::vector<EventAudit> events;
  double spearman_frequency_vs_d = 0.0;
  double spearman_skewness_vs_d = 0.0;
  std::vector<std::string> flagged_events;  // ascending KS p-value
};

enum class ReportFormat { kJson, kCsv };

// Runs the end-to-end audit: resample, KS-test every event's p-value set,
// apply the Bonferroni correction across events, and compute the
// frequency/skewness rank diagnostics. Every floating-point field of the
// returned report is already rounded to 10 significant digits so emitted
// files are byte-stable and re-parse to identical values.
AuditReport audit(const UserMetricMatrix& matrix,
                  const resampling::ResamplePlan& plan, double flag_threshold,
                  unsigned threads = 0);

// Writes the report (JSON schema or per-event CSV) plus the plot-data
// files fig1.csv, fig2.csv and fig3.csv. Plot files go to `plots_dir`, or
// alongside the report when `plots_dir` is empty.
void emit_report(const AuditReport& report, ReportFormat format,
                 const std::filesystem::path& destination,
                 const std::filesystem::path& plots_dir = {});

std::string to_json(const AuditReport& report);
AuditReport parse_report_json(const std::filesystem::path& path);

}  // namespace aaguard::report

#endif  // AAGUARD_REPORT_HPP_
