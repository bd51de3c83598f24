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

#include "aaguard/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "aaguard/errors.hpp"

namespace aaguard::stats {

namespace {

constexpr double kSqrt1_2 = 0.70710678118654752440;
constexpr double kSqrt2Pi = 2.50662827463100050242;

// Rational approximation of the normal quantile (Acklam), accurate to
// about 1.15e-9 in x before refinement.
double acklam_quantile(double q) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLowBreak = 0.02425;

  if (q < kLowBreak) {
    const double r = std::sqrt(-2.0 * std::log(q));
    return (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r +
            c[5]) /
           ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  const double r = q - 0.5;
  const double t = r * r;
  return (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t +
          a[5]) *
         r /
         (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
}

}  // namespace

double normal_cdf(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("normal_cdf: non-finite input");
  }
  return 0.5 * std::erfc(-x * kSqrt1_2);
}

double inverse_normal_cdf(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("inverse_normal_cdf: q must be in (0, 1)");
  }
  // 1 - q is exact for q >= 0.5, and the reflection makes antisymmetry
  // hold exactly.
  if (q > 0.5) return -inverse_normal_cdf(1.0 - q);

  double x = acklam_quantile(q);
  // One Halley step against the high-accuracy CDF.
  const double err = normal_cdf(x) - q;
  const double u = err * kSqrt2Pi * std::exp(0.5 * x * x);
  if (std::isfinite(u)) x -= u / (1.0 + 0.5 * x * u);
  return x;
}

SampleSummary summarize(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("summarize: empty input");
  }
  SampleSummary s;
  s.n = values.size();

  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("summarize: non-finite value");
    }
    sum += v;
    if (v != 0.0) ++s.n_nonzero;
  }
  const double n = static_cast<double>(s.n);
  s.mean = sum / n;

  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  s.variance = m2;
  s.skewness = m2 > 0.0 ? m3 / (m2 * std::sqrt(m2)) : 0.0;
  return s;
}

AteEstimate ate_estimate(const SampleSummary& control,
                         const SampleSummary& treatment, double alpha) {
  if (control.n < 2 || treatment.n < 2) {
    throw InsufficientDataError("ate_estimate: both groups need n >= 2");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ate_estimate: alpha must be in (0, 1)");
  }

  AteEstimate est;
  est.alpha = alpha;
  est.ate = treatment.mean - control.mean;
  est.se = std::sqrt(control.variance / static_cast<double>(control.n) +
                     treatment.variance / static_cast<double>(treatment.n));

  const double crit = inverse_normal_cdf(1.0 - alpha / 2.0);
  est.ci_low = est.ate - crit * est.se;
  est.ci_high = est.ate + crit * est.se;

  if (est.se == 0.0) {
    // Both groups constant: a zero difference carries no evidence at all,
    // a nonzero one is exact.
    if (est.ate == 0.0) {
      est.z = 0.0;
      est.p = 1.0;
    } else {
      est.z = std::copysign(std::numeric_limits<double>::infinity(), est.ate);
      est.p = 0.0;
    }
    return est;
  }

  est.z = est.ate / est.se;
  est.p = 2.0 * (1.0 - normal_cdf(std::fabs(est.z)));
  return est;
}

KsResult ks_uniform_test(std::span<const double> pvalues) {
  if (pvalues.empty()) {
    throw std::invalid_argument("ks_uniform_test: empty input");
  }
  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  for (double v : sorted) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("ks_uniform_test: value outside [0, 1]");
    }
  }
  std::sort(sorted.begin(), sorted.end());

  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double lo = static_cast<double>(i) / n;        // eCDF left limit
    const double hi = static_cast<double>(i + 1) / n;    // eCDF at sample
    d = std::max(d, std::max(hi - sorted[i], sorted[i] - lo));
  }

  KsResult res;
  res.d = d;
  res.n = sorted.size();
  res.small_sample = sorted.size() < 100;
  res.p = kolmogorov_sf(std::sqrt(n) * d);
  return res;
}

double kolmogorov_sf(double lambda) {
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("kolmogorov_sf: lambda must be >= 0");
  }
  if (lambda == 0.0) return 1.0;

  // The alternating series converges too slowly below lambda ~ 0.18; use
  // the complementary theta expansion there so the result stays monotone
  // down to Q(0) = 1. pi^2 / 8 = 1.2337...
  if (lambda < 0.18) {
    const double c = 1.2337005501361697 / (lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double odd = static_cast<double>(2 * k - 1);
      const double term = std::exp(-odd * odd * c);
      cdf += term;
      if (term < 1e-12) break;
    }
    cdf *= kSqrt2Pi / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }

  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double kd = static_cast<double>(k);
    const double term = std::exp(-2.0 * kd * kd * lambda * lambda);
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Mean of 1-based ranks i+1 .. j+1.
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("spearman_rho: length mismatch");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("spearman_rho: need at least 2 pairs");
  }
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);

  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;  // rank mean is fixed
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> bonferroni_adjust(std::span<const double> pvalues) {
  const double m = static_cast<double>(pvalues.size());
  std::vector<double> adjusted;
  adjusted.reserve(pvalues.size());
  for (double p : pvalues) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("bonferroni_adjust: value outside [0, 1]");
    }
    adjusted.push_back(std::min(1.0, p * m));
  }
  return adjusted;
}

}  // namespace aaguard::stats
