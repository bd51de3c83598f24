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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "aaguard/errors.hpp"
#include "aaguard/quantize.hpp"
#include "aaguard/report.hpp"

// The JSON report must be byte-identical across runs and thread counts, so
// it is written by hand with a frozen key order and %.10g number
// formatting. nlohmann/json is used on the read side only.

namespace aaguard::report {

namespace {

constexpr const char* kSchemaTag = "aa-guard-report/1";

class JsonWriter {
 public:
  std::string take() { return std::move(out_); }

  void raw(const char* s) { out_ += s; }
  void raw(const std::string& s) { out_ += s; }

  void string(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\r': out_ += "\\r"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  void number(double v) {
    if (!std::isfinite(v)) {
      throw std::logic_error("report contains a non-finite number");
    }
    out_ += format10(v);
  }

  void number(std::uint64_t v) { out_ += std::to_string(v); }

  void boolean(bool v) { out_ += v ? "true" : "false"; }

  void key(int indent, const char* name) {
    newline(indent);
    out_ += '"';
    out_ += name;
    out_ += "\": ";
  }

  void newline(int indent) {
    out_ += '\n';
    out_.append(static_cast<std::size_t>(indent) * 2, ' ');
  }

 private:
  std::string out_;
};

template <typename T, typename Fn>
void write_inline_array(JsonWriter& w, const std::vector<T>& items, Fn emit) {
  w.raw("[");
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) w.raw(", ");
    emit(items[i]);
  }
  w.raw("]");
}

void write_event(JsonWriter& w, const EventAudit& ev, int indent) {
  w.raw("{");
  w.key(indent + 1, "event_id");
  w.string(ev.event_id);
  w.raw(",");
  w.key(indent + 1, "n_users");
  w.number(ev.n_users);
  w.raw(",");
  w.key(indent + 1, "n_observations");
  w.number(ev.n_observations);
  w.raw(",");
  w.key(indent + 1, "mean_outcome");
  w.number(ev.mean_outcome);
  w.raw(",");
  w.key(indent + 1, "skewness");
  w.number(ev.skewness);
  w.raw(",");
  w.key(indent + 1, "ks_d");
  w.number(ev.ks_d);
  w.raw(",");
  w.key(indent + 1, "ks_p");
  w.number(ev.ks_p);
  w.raw(",");
  w.key(indent + 1, "ks_p_bonferroni");
  w.number(ev.ks_p_bonferroni);
  w.raw(",");
  w.key(indent + 1, "empirical_type1_rate");
  w.number(ev.empirical_type1_rate);
  w.raw(",");
  w.key(indent + 1, "low_data");
  w.boolean(ev.low_data);
  w.raw(",");
  w.key(indent + 1, "ks_small_sample");
  w.boolean(ev.ks_small_sample);
  w.raw(",");
  w.key(indent + 1, "pvalue_histogram");
  write_inline_array(w, ev.pvalue_histogram,
                     [&](std::uint64_t c) { w.number(c); });
  w.raw(",");
  w.key(indent + 1, "outcome_bin_edges");
  write_inline_array(w, ev.outcome_bin_edges, [&](double v) { w.number(v); });
  w.raw(",");
  w.key(indent + 1, "outcome_densities");
  write_inline_array(w, ev.outcome_densities, [&](double v) { w.number(v); });
  w.newline(indent);
  w.raw("}");
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << body;
  out.flush();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

std::string to_csv(const AuditReport& rep) {
  std::string out =
      "event_id,n_users,n_observations,mean_outcome,skewness,ks_d,ks_p,"
      "ks_p_bonferroni,empirical_type1_rate,low_data,ks_small_sample,"
      "flagged\n";
  for (const EventAudit& ev : rep.events) {
    const bool flagged =
        std::find(rep.flagged_events.begin(), rep.flagged_events.end(),
                  ev.event_id) != rep.flagged_events.end();
    out += ev.event_id;
    out += ',';
    out += std::to_string(ev.n_users);
    out += ',';
    out += std::to_string(ev.n_observations);
    out += ',';
    out += format10(ev.mean_outcome);
    out += ',';
    out += format10(ev.skewness);
    out += ',';
    out += format10(ev.ks_d);
    out += ',';
    out += format10(ev.ks_p);
    out += ',';
    out += format10(ev.ks_p_bonferroni);
    out += ',';
    out += format10(ev.empirical_type1_rate);
    out += ',';
    out += ev.low_data ? "1" : "0";
    out += ',';
    out += ev.ks_small_sample ? "1" : "0";
    out += ',';
    out += flagged ? "1" : "0";
    out += '\n';
  }
  return out;
}

void write_plot_data(const AuditReport& rep,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::string fig1 = "event_id,d,ks_p\n";
  std::string fig2 = "n_observations,d\n";
  std::string fig3 = "event_id,bin_low,bin_high,density,skewness\n";
  for (const EventAudit& ev : rep.events) {
    fig1 += ev.event_id;
    fig1 += ',';
    fig1 += format10(ev.ks_d);
    fig1 += ',';
    fig1 += format10(ev.ks_p);
    fig1 += '\n';

    fig2 += std::to_string(ev.n_observations);
    fig2 += ',';
    fig2 += format10(ev.ks_d);
    fig2 += '\n';

    for (std::size_t b = 0; b < ev.outcome_densities.size(); ++b) {
      fig3 += ev.event_id;
      fig3 += ',';
      fig3 += format10(ev.outcome_bin_edges[b]);
      fig3 += ',';
      fig3 += format10(ev.outcome_bin_edges[b + 1]);
      fig3 += ',';
      fig3 += format10(ev.outcome_densities[b]);
      fig3 += ',';
      fig3 += format10(ev.skewness);
      fig3 += '\n';
    }
  }
  write_file(dir / "fig1.csv", fig1);
  write_file(dir / "fig2.csv", fig2);
  write_file(dir / "fig3.csv", fig3);
}

}  // namespace

std::string to_json(const AuditReport& rep) {
  JsonWriter w;
  w.raw("{");
  w.key(1, "schema");
  w.string(kSchemaTag);
  w.raw(",");
  w.key(1, "plan");
  w.raw("{");
  w.key(2, "iterations");
  w.number(rep.plan.iterations);
  w.raw(",");
  w.key(2, "master_seed");
  w.number(rep.plan.master_seed);
  w.raw(",");
  w.key(2, "alpha");
  w.number(rep.plan.alpha);
  w.raw(",");
  w.key(2, "split_fraction");
  w.number(rep.plan.split_fraction);
  w.raw(",");
  w.key(2, "include_zero_users");
  w.boolean(rep.plan.include_zero_users);
  w.newline(1);
  w.raw("},");
  w.key(1, "flag_threshold");
  w.number(rep.flag_threshold);
  w.raw(",");
  w.key(1, "n_users");
  w.number(rep.n_users);
  w.raw(",");
  w.key(1, "n_events");
  w.number(static_cast<std::uint64_t>(rep.events.size()));
  w.raw(",");
  w.key(1, "spearman_frequency_vs_d");
  w.number(rep.spearman_frequency_vs_d);
  w.raw(",");
  w.key(1, "spearman_skewness_vs_d");
  w.number(rep.spearman_skewness_vs_d);
  w.raw(",");
  w.key(1, "flagged_events");
  write_inline_array(w, rep.flagged_events,
                     [&](const std::string& s) { w.string(s); });
  w.raw(",");
  w.key(1, "events");
  if (rep.events.empty()) {
    w.raw("[]");
  } else {
    w.raw("[");
    for (std::size_t e = 0; e < rep.events.size(); ++e) {
      if (e > 0) w.raw(",");
      w.newline(2);
      write_event(w, rep.events[e], 2);
    }
    w.newline(1);
    w.raw("]");
  }
  w.newline(0);
  w.raw("}\n");
  return w.take();
}

void emit_report(const AuditReport& report, ReportFormat format,
                 const std::filesystem::path& destination,
                 const std::filesystem::path& plots_dir) {
  if (destination.has_parent_path()) {
    std::filesystem::create_directories(destination.parent_path());
  }
  write_file(destination, format == ReportFormat::kJson ? to_json(report)
                                                        : to_csv(report));

  const std::filesystem::path dir =
      plots_dir.empty() ? (destination.has_parent_path()
                               ? destination.parent_path()
                               : std::filesystem::path("."))
                        : plots_dir;
  write_plot_data(report, dir);
}

AuditReport parse_report_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("invalid report JSON: " + std::string(e.what()));
  }
  if (!doc.contains("schema") || doc["schema"] != kSchemaTag) {
    throw std::invalid_argument("not an aa-guard report (schema mismatch)");
  }

  AuditReport rep;
  const auto& plan = doc.at("plan");
  rep.plan.iterations = plan.at("iterations").get<std::uint64_t>();
  rep.plan.master_seed = plan.at("master_seed").get<std::uint64_t>();
  rep.plan.alpha = plan.at("alpha").get<double>();
  rep.plan.split_fraction = plan.at("split_fraction").get<double>();
  rep.plan.include_zero_users = plan.at("include_zero_users").get<bool>();
  rep.flag_threshold = doc.at("flag_threshold").get<double>();
  rep.n_users = doc.at("n_users").get<std::uint64_t>();
  rep.spearman_frequency_vs_d = doc.at("spearman_frequency_vs_d").get<double>();
  rep.spearman_skewness_vs_d = doc.at("spearman_skewness_vs_d").get<double>();
  rep.flagged_events =
      doc.at("flagged_events").get<std::vector<std::string>>();

  for (const auto& entry : doc.at("events")) {
    EventAudit ev;
    ev.event_id = entry.at("event_id").get<std::string>();
    ev.n_users = entry.at("n_users").get<std::uint64_t>();
    ev.n_observations = entry.at("n_observations").get<std::uint64_t>();
    ev.mean_outcome = entry.at("mean_outcome").get<double>();
    ev.skewness = entry.at("skewness").get<double>();
    ev.ks_d = entry.at("ks_d").get<double>();
    ev.ks_p = entry.at("ks_p").get<double>();
    ev.ks_p_bonferroni = entry.at("ks_p_bonferroni").get<double>();
    ev.empirical_type1_rate = entry.at("empirical_type1_rate").get<double>();
    ev.low_data = entry.at("low_data").get<bool>();
    ev.ks_small_sample = entry.at("ks_small_sample").get<bool>();
    ev.pvalue_histogram =
        entry.at("pvalue_histogram").get<std::vector<std::uint64_t>>();
    ev.outcome_bin_edges =
        entry.at("outcome_bin_edges").get<std::vector<double>>();
    ev.outcome_densities =
        entry.at("outcome_densities").get<std::vector<double>>();
    rep.events.push_back(std::move(ev));
  }
  return rep;
}

}  // namespace aaguard::report
