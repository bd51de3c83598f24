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

#include "aaguard/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "aaguard/errors.hpp"

namespace aaguard::ingest {

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

double parse_value_field(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line_no, "invalid numeric value '" + std::string(field) +
                                  "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line_no, "non-finite value");
  }
  return value;
}

std::vector<EventLogRecord> load_csv(std::istream& in) {
  std::vector<EventLogRecord> records;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    throw ParseError(1, "missing CSV header");
  }
  ++line_no;
  strip_cr(line);
  if (line != "user_id,event_type,value" && line != "user_id,event_type") {
    throw ParseError(1, "expected header 'user_id,event_type[,value]'");
  }

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;

    const std::size_t c1 = line.find(',');
    if (c1 == std::string::npos) {
      throw ParseError(line_no, "expected 2 or 3 comma-separated fields");
    }
    const std::size_t c2 = line.find(',', c1 + 1);
    const std::string_view view(line);

    EventLogRecord rec;
    rec.user_id = std::string(view.substr(0, c1));
    if (c2 == std::string::npos) {
      rec.event_type = std::string(view.substr(c1 + 1));
    } else {
      if (line.find(',', c2 + 1) != std::string::npos) {
        throw ParseError(line_no, "too many fields");
      }
      rec.event_type = std::string(view.substr(c1 + 1, c2 - c1 - 1));
      const std::string_view value_field = view.substr(c2 + 1);
      rec.value =
          value_field.empty() ? 1.0 : parse_value_field(value_field, line_no);
    }
    if (rec.user_id.empty()) throw ParseError(line_no, "empty user_id");
    if (rec.event_type.empty()) throw ParseError(line_no, "empty event_type");
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<EventLogRecord> load_jsonl(std::istream& in) {
  std::vector<EventLogRecord> records;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) {
      throw ParseError(line_no, "expected a JSON object");
    }

    EventLogRecord rec;
    if (!obj.contains("user_id") || !obj["user_id"].is_string()) {
      throw ParseError(line_no, "missing string field 'user_id'");
    }
    if (!obj.contains("event_type") || !obj["event_type"].is_string()) {
      throw ParseError(line_no, "missing string field 'event_type'");
    }
    rec.user_id = obj["user_id"].get<std::string>();
    rec.event_type = obj["event_type"].get<std::string>();
    if (rec.user_id.empty()) throw ParseError(line_no, "empty user_id");
    if (rec.event_type.empty()) throw ParseError(line_no, "empty event_type");

    if (obj.contains("value")) {
      if (!obj["value"].is_number()) {
        throw ParseError(line_no, "'value' must be a number");
      }
      rec.value = obj["value"].get<double>();
      if (!std::isfinite(rec.value)) {
        throw ParseError(line_no, "non-finite value");
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return in;
}

// Shortest decimal form that parses back to the same double.
void append_round_trip(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, ptr);
}

}  // namespace

std::vector<EventLogRecord> load_events(std::istream& in, LogFormat format) {
  return format == LogFormat::kCsv ? load_csv(in) : load_jsonl(in);
}

std::vector<EventLogRecord> load_events(const std::filesystem::path& path,
                                        LogFormat format) {
  std::ifstream in = open_or_throw(path);
  return load_events(in, format);
}

UserMetricMatrix aggregate(
    const std::vector<EventLogRecord>& records,
    const std::optional<std::vector<std::string>>& universe) {
  UserMetricMatrix matrix;
  std::unordered_map<std::string, std::uint32_t> user_index;
  std::unordered_map<std::string, std::uint32_t> event_index;

  if (universe) {
    matrix.user_ids.reserve(universe->size());
    for (const std::string& id : *universe) {
      if (user_index.emplace(id, matrix.user_ids.size()).second) {
        matrix.user_ids.push_back(id);
      }
    }
  }

  // Accumulate into per-event hash maps, then finalize into sorted columns.
  std::vector<std::unordered_map<std::uint32_t, double>> sums;

  for (const EventLogRecord& rec : records) {
    std::uint32_t uid;
    auto it = user_index.find(rec.user_id);
    if (it != user_index.end()) {
      uid = it->second;
    } else {
      if (universe) {
        throw InconsistencyError("user '" + rec.user_id +
                                 "' not present in the supplied universe");
      }
      uid = static_cast<std::uint32_t>(matrix.user_ids.size());
      user_index.emplace(rec.user_id, uid);
      matrix.user_ids.push_back(rec.user_id);
    }

    std::uint32_t eid;
    auto eit = event_index.find(rec.event_type);
    if (eit != event_index.end()) {
      eid = eit->second;
    } else {
      eid = static_cast<std::uint32_t>(matrix.event_ids.size());
      event_index.emplace(rec.event_type, eid);
      matrix.event_ids.push_back(rec.event_type);
      sums.emplace_back();
      matrix.observation_counts.push_back(0);
    }

    sums[eid][uid] += rec.value;
    ++matrix.observation_counts[eid];
  }

  matrix.columns.resize(matrix.event_ids.size());
  for (std::size_t e = 0; e < sums.size(); ++e) {
    auto& col = matrix.columns[e];
    col.users.reserve(sums[e].size());
    for (const auto& [uid, value] : sums[e]) {
      if (value != 0.0) col.users.push_back(uid);
    }
    std::sort(col.users.begin(), col.users.end());
    col.values.reserve(col.users.size());
    for (std::uint32_t uid : col.users) col.values.push_back(sums[e][uid]);
  }
  return matrix;
}

std::vector<std::string> load_universe(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (!line.empty()) ids.push_back(line);
  }
  return ids;
}

void write_events_csv(const UserMetricMatrix& matrix, std::ostream& out) {
  std::string buf = "user_id,event_type,value\n";
  for (std::size_t e = 0; e < matrix.event_count(); ++e) {
    const auto& col = matrix.columns[e];
    for (std::size_t i = 0; i < col.users.size(); ++i) {
      buf += matrix.user_ids[col.users[i]];
      buf += ',';
      buf += matrix.event_ids[e];
      buf += ',';
      append_round_trip(buf, col.values[i]);
      buf += '\n';
      if (buf.size() > (1u << 20)) {
        out << buf;
        buf.clear();
      }
    }
  }
  out << buf;
}

void write_events_csv(const UserMetricMatrix& matrix,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  write_events_csv(matrix, out);
  out.flush();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

}  // namespace aaguard::ingest
