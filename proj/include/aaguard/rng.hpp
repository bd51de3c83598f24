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

#ifndef AAGUARD_RNG_HPP_
#define AAGUARD_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <string_view>

namespace aaguard {

// splitmix64 finalizer, used as a keyed hash when deriving substream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for the substream identified by `key` under a master seed. Replays
// identically no matter how many streams are derived or in what order,
// which is what makes per-iteration / per-event work embarrassingly
// parallel yet reproducible.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) {
  return mix64(master + 0x9E3779B97F4A7C15ULL * (key + 1));
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Counter-based splitmix64 stream. Output is a pure function of the seed,
// so results never depend on the standard library's distribution
// implementations or on thread scheduling.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ULL; }

  // Unbiased integer in [0, n) via Lemire's multiply-and-reject.
  std::uint64_t bounded(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log/pow argument.
  double uniform_open0() { return 1.0 - uniform01(); }

  // Standard normal via Box-Muller; consumes exactly two raw draws.
  double normal() {
    const double u1 = uniform_open0();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  double lognormal(double mu, double sigma) {
    return std::exp(mu + sigma * normal());
  }

  // Knuth's product method, chunked so exp(-lambda) never underflows.
  std::uint64_t poisson(double lambda) {
    std::uint64_t total = 0;
    while (lambda > 500.0) {
      total += poisson_knuth(500.0);
      lambda -= 500.0;
    }
    return total + poisson_knuth(lambda);
  }

  double pareto(double alpha, double x_min) {
    return x_min * std::pow(uniform_open0(), -1.0 / alpha);
  }

 private:
  std::uint64_t poisson_knuth(double lambda) {
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t state_;
};

}  // namespace aaguard

#endif  // AAGUARD_RNG_HPP_
