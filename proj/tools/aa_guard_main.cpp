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

#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aaguard/ingest.hpp"
#include "aaguard/quantize.hpp"
#include "aaguard/report.hpp"
#include "aaguard/resampler.hpp"
#include "aaguard/synthetic.hpp"

namespace {

// Exit codes: 0 = completed with no flagged events, 2 = completed with
// flagged events, 1 = error.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFlagged = 2;

void print_report_summary(const aaguard::report::AuditReport& rep) {
  std::printf("audited %zu event(s) over %llu users, %llu iterations\n",
              rep.events.size(),
              static_cast<unsigned long long>(rep.n_users),
              static_cast<unsigned long long>(rep.plan.iterations));
  std::printf("%-24s %12s %10s %12s %14s %10s\n", "event", "n_obs", "ks_d",
              "ks_p", "ks_p_bonf", "type1");
  for (const auto& ev : rep.events) {
    std::printf("%-24s %12llu %10.4f %12.4g %14.4g %10.4f%s%s\n",
                ev.event_id.c_str(),
                static_cast<unsigned long long>(ev.n_observations), ev.ks_d,
                ev.ks_p, ev.ks_p_bonferroni, ev.empirical_type1_rate,
                ev.low_data ? " [low-data]" : "",
                ev.ks_small_sample ? " [small-sample]" : "");
  }
  std::printf("spearman(frequency, D) = %s\n",
              aaguard::format10(rep.spearman_frequency_vs_d).c_str());
  std::printf("spearman(skewness, D)  = %s\n",
              aaguard::format10(rep.spearman_skewness_vs_d).c_str());
  if (rep.flagged_events.empty()) {
    std::printf("no events flagged at threshold %s\n",
                aaguard::format10(rep.flag_threshold).c_str());
  } else {
    std::printf("flagged at threshold %s:",
                aaguard::format10(rep.flag_threshold).c_str());
    for (const auto& id : rep.flagged_events) std::printf(" %s", id.c_str());
    std::printf("\n");
  }
}

int run_validate(const std::string& input, const std::string& format,
                 const std::optional<std::string>& universe_path,
                 std::uint64_t iterations, std::uint64_t seed, double alpha,
                 double split_fraction, bool exclude_zero_users,
                 double flag_threshold, const std::string& metric,
                 const std::string& out, const std::string& plots_dir,
                 unsigned threads) {
  const auto fmt = format == "jsonl" ? aaguard::ingest::LogFormat::kJsonl
                                     : aaguard::ingest::LogFormat::kCsv;
  const auto records = aaguard::ingest::load_events(input, fmt);

  std::optional<std::vector<std::string>> universe;
  if (universe_path) {
    universe = aaguard::ingest::load_universe(*universe_path);
  }
  aaguard::UserMetricMatrix matrix =
      aaguard::ingest::aggregate(records, universe);
  if (metric == "binary") matrix.binarize();

  aaguard::resampling::ResamplePlan plan;
  plan.iterations = iterations;
  plan.master_seed = seed;
  plan.alpha = alpha;
  plan.split_fraction = split_fraction;
  plan.include_zero_users = !exclude_zero_users;

  const aaguard::report::AuditReport rep =
      aaguard::report::audit(matrix, plan, flag_threshold, threads);

  const auto report_format =
      std::filesystem::path(out).extension() == ".csv"
          ? aaguard::report::ReportFormat::kCsv
          : aaguard::report::ReportFormat::kJson;
  aaguard::report::emit_report(rep, report_format, out, plots_dir);

  print_report_summary(rep);
  std::printf("report written to %s\n", out.c_str());
  return rep.flagged_events.empty() ? kExitOk : kExitFlagged;
}

int run_synth(const std::string& spec_path, const std::string& out) {
  const auto spec = aaguard::synth::load_population_spec(spec_path);
  const aaguard::UserMetricMatrix matrix = aaguard::synth::generate(spec);
  aaguard::ingest::write_events_csv(matrix, std::filesystem::path(out));
  std::uint64_t total = 0;
  for (auto c : matrix.observation_counts) total += c;
  std::printf("wrote %llu records for %zu users x %zu events to %s\n",
              static_cast<unsigned long long>(total), matrix.user_count(),
              matrix.event_count(), out.c_str());
  return kExitOk;
}

int run_diagnose(const std::string& report_path) {
  const auto rep = aaguard::report::parse_report_json(report_path);
  std::printf("spearman(frequency, D) = %s\n",
              aaguard::format10(rep.spearman_frequency_vs_d).c_str());
  std::printf("spearman(skewness, D)  = %s\n",
              aaguard::format10(rep.spearman_skewness_vs_d).c_str());
  if (rep.flagged_events.empty()) {
    std::printf("no flagged events\n");
    return kExitOk;
  }
  std::printf("flagged events (ascending KS p-value):\n");
  for (const auto& id : rep.flagged_events) {
    for (const auto& ev : rep.events) {
      if (ev.event_id == id) {
        std::printf("  %-24s ks_p=%s ks_p_bonferroni=%s\n", id.c_str(),
                    aaguard::format10(ev.ks_p).c_str(),
                    aaguard::format10(ev.ks_p_bonferroni).c_str());
      }
    }
  }
  return kExitFlagged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aa-guard: audits whether t/z-test normality assumptions hold "
               "per metric, via resampled A/A-tests and a KS uniformity test"};
  app.require_subcommand(1);

  // validate
  auto* validate = app.add_subcommand(
      "validate", "run the A/A audit over an event log and write a report");
  std::string input;
  std::string format = "csv";
  std::optional<std::string> universe_path;
  std::uint64_t iterations = 5000;
  std::uint64_t seed = 42;
  double alpha = 0.05;
  double split_fraction = 0.5;
  bool exclude_zero_users = false;
  double flag_threshold = 1e-4;
  std::string metric = "count";
  std::string out = "report.json";
  std::string plots_dir;
  unsigned threads = 0;
  validate->add_option("--input", input, "event log file")->required();
  validate->add_option("--format", format, "input format (default csv)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  validate->add_option("--universe", universe_path,
                       "file with one user id per line defining the full "
                       "population (absent users count as all-zero)");
  validate->add_option("--iterations", iterations, "A/A comparisons per event");
  validate->add_option("--seed", seed, "master seed");
  validate->add_option("--alpha", alpha, "significance level");
  validate->add_option("--split-fraction", split_fraction,
                       "fraction of users in the first group");
  validate->add_flag("--exclude-zero-users", exclude_zero_users,
                     "drop zero-outcome users from each comparison instead of "
                     "keeping them in the denominator");
  validate->add_option("--flag-threshold", flag_threshold,
                       "flag events with Bonferroni-corrected KS p below this");
  validate->add_option("--metric", metric,
                       "count: sum record values per user (default); binary: "
                       "0/1 indicator per user")
      ->check(CLI::IsMember({"count", "binary"}));
  validate->add_option("--out", out,
                       "report path (.csv extension switches to CSV)");
  validate->add_option("--plots-dir", plots_dir,
                       "directory for fig1/fig2/fig3 plot data (default: "
                       "alongside the report)");
  validate->add_option("--threads", threads,
                       "worker threads (0 = hardware concurrency)");

  // synth
  auto* synth = app.add_subcommand(
      "synth", "generate a synthetic population and write it as an event log");
  std::string spec_path;
  std::string synth_out = "events.csv";
  synth->add_option("--spec", spec_path, "population spec JSON")->required();
  synth->add_option("--out", synth_out, "output event CSV path");

  // diagnose
  auto* diagnose =
      app.add_subcommand("diagnose", "summarize a previously written report");
  std::string report_path;
  diagnose->add_option("--report", report_path, "report JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      return run_validate(input, format, universe_path, iterations, seed,
                          alpha, split_fraction, exclude_zero_users,
                          flag_threshold, metric, out, plots_dir, threads);
    }
    if (synth->parsed()) {
      return run_synth(spec_path, synth_out);
    }
    return run_diagnose(report_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
}
