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

#ifndef AAGUARD_MATRIX_HPP_
#define AAGUARD_MATRIX_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace aaguard {

// Per-user aggregated outcome values for each event type: the population
// under audit. Columns are sparse (only nonzero outcomes are stored, in
// ascending user order); absent users implicitly contribute outcome 0.
struct UserMetricMatrix {
  struct Column {
    std::vector<std::uint32_t> users;  // dense user indices, strictly ascending
    std::vector<double> values;        // parallel to `users`, all nonzero
  };

  std::vector<std::string> user_ids;   // dense user index -> identifier
  std::vector<std::string> event_ids;  // event index -> label
  std::vector<Column> columns;         // one per event
  std::vector<std::uint64_t> observation_counts;  // raw record count per event

  std::size_t user_count() const { return user_ids.size(); }
  std::size_t event_count() const { return event_ids.size(); }

  // Dense outcome vector for one event, zeros filled in.
  std::vector<double> dense_column(std::size_t event_index) const;

  // Replace every nonzero outcome with 1.0 (per-user binary indicator).
  void binarize();
};

}  // namespace aaguard

#endif  // AAGUARD_MATRIX_HPP_
