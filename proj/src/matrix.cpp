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

#include "aaguard/matrix.hpp"

#include <stdexcept>

namespace aaguard {

std::vector<double> UserMetricMatrix::dense_column(
    std::size_t event_index) const {
  if (event_index >= columns.size()) {
    throw std::out_of_range("dense_column: event index out of range");
  }
  std::vector<double> out(user_count(), 0.0);
  const Column& col = columns[event_index];
  for (std::size_t i = 0; i < col.users.size(); ++i) {
    out[col.users[i]] = col.values[i];
  }
  return out;
}

void UserMetricMatrix::binarize() {
  for (Column& col : columns) {
    for (double& v : col.values) v = 1.0;
  }
}

}  // namespace aaguard
