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

#ifndef AAGUARD_INGEST_HPP_
#define AAGUARD_INGEST_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aaguard/matrix.hpp"

namespace aaguard::ingest {

// One raw logged instance of a user-level event.
struct EventLogRecord {
  std::string user_id;
  std::string event_type;
  double value = 1.0;
};

enum class LogFormat { kCsv, kJsonl };

// Parses a raw event log.
//
// CSV: header `user_id,event_type,value` (the value column is optional),
// comma-separated, no quoting. JSONL: one object per line with keys
// user_id, event_type and optional numeric value. Rows without a value
// default to 1.0. Malformed rows raise ParseError with the line number.
std::vector<EventLogRecord> load_events(std::istream& in, LogFormat format);
std::vector<EventLogRecord> load_events(const std::filesystem::path& path,
                                        LogFormat format);

// Sums record values into a user x event outcome matrix. When a universe
// is given it defines the full user population and its ordering: users
// without any record become all-zero rows, and a record for a user outside
// the universe raises InconsistencyError. Without a universe, users and
// events are indexed in first-appearance order.
UserMetricMatrix aggregate(
    const std::vector<EventLogRecord>& records,
    const std::optional<std::vector<std::string>>& universe = std::nullopt);

// One user id per line; blank lines ignored.
std::vector<std::string> load_universe(const std::filesystem::path& path);

// Writes the matrix back out as an event log, one row per nonzero cell.
// Values are printed with shortest round-trip formatting, so reloading
// reproduces every outcome bit for bit.
void write_events_csv(const UserMetricMatrix& matrix, std::ostream& out);
void write_events_csv(const UserMetricMatrix& matrix,
                      const std::filesystem::path& path);

}  // namespace aaguard::ingest

#endif  // AAGUARD_INGEST_HPP_
