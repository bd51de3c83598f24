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

#ifndef AAGUARD_QUANTIZE_HPP_
#define AAGUARD_QUANTIZE_HPP_

#include <cstdio>
#include <cstdlib>
#include <string>

namespace aaguard {

// Report floats are fixed at 10 significant digits. format10 produces the
// canonical text and quantize10 the double it parses back to; applying
// both at report-assembly time makes emit -> parse -> emit an exact
// identity.
inline std::string format10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline double quantize10(double v) {
  return std::strtod(format10(v).c_str(), nullptr);
}

}  // namespace aaguard

#endif  // AAGUARD_QUANTIZE_HPP_
