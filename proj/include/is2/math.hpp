// Copyright 2026 The is2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IS2_MATH_HPP
#define IS2_MATH_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace is2 {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// log(sum_i exp(x_i)) with a max shift. Entries equal to -inf contribute
/// nothing; if every entry is -inf (or the span is empty) the result is -inf.
inline double log_sum_exp(std::span<const double> xs) {
  double m = neg_inf;
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;  // all -inf, empty, or a NaN max propagates
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

/// log((1/n) sum_i exp(x_i)).
inline double log_mean_exp(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("log_mean_exp: empty input");
  double lse = log_sum_exp(xs);
  return lse - std::log(static_cast<double>(xs.size()));
}

inline double log_add_exp(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

/// log(1 - exp(x)) for x < 0, stable near both ends.
inline double log1m_exp(double x) {
  if (x >= 0.0) return std::numeric_limits<double>::quiet_NaN();
  constexpr double log_half = -0.6931471805599453;
  return x < log_half ? std::log1p(-std::exp(x)) : std::log(-std::expm1(x));
}

inline double log_normal_pdf(double x, double mean, double var) {
  constexpr double log_2pi = 1.8378770664093454836;
  double d = x - mean;
  return -0.5 * (log_2pi + std::log(var) + d * d / var);
}

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty input");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Unbiased (n-1 divisor) sample variance.
inline double sample_variance(std::span<const double> xs) {
  std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("sample_variance: need at least 2 values");
  double mu = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - mu) * (x - mu);
  return s / static_cast<double>(n - 1);
}

inline double sample_sd(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, n-1 divisor
  double skewness = 0.0;  // standardized third moment, 1/n central moments
  double kurtosis = 0.0;  // standardized fourth moment, 1/n central moments
};

inline Moments sample_moments(std::span<const double> xs) {
  std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("sample_moments: need at least 2 values");
  Moments out;
  out.mean = mean(xs);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : xs) {
    double d = x - out.mean;
    double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  double dn = static_cast<double>(n);
  out.variance = m2 / (dn - 1.0);
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  if (m2 > 0.0) {
    out.skewness = m3 / std::pow(m2, 1.5);
    out.kurtosis = m4 / (m2 * m2);
  } else {
    out.skewness = 0.0;
    out.kurtosis = 0.0;
  }
  return out;
}

/// Central moments under normalized weights (sum w = 1 is not required; the
/// weights are normalized internally). Skewness/kurtosis follow the same
/// standardized-moment convention as sample_moments.
inline Moments weighted_moments(std::span<const double> xs, std::span<const double> ws) {
  if (xs.size() != ws.size() || xs.empty())
    throw std::invalid_argument("weighted_moments: size mismatch or empty");
  double wsum = std::accumulate(ws.begin(), ws.end(), 0.0);
  if (!(wsum > 0.0)) throw std::invalid_argument("weighted_moments: weights sum to zero");
  Moments out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.mean += ws[i] * xs[i];
  out.mean /= wsum;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double d = xs[i] - out.mean;
    double wd2 = ws[i] * d * d;
    m2 += wd2;
    m3 += wd2 * d;
    m4 += wd2 * d * d;
  }
  m2 /= wsum;
  m3 /= wsum;
  m4 /= wsum;
  out.variance = m2;
  if (m2 > 0.0) {
    out.skewness = m3 / std::pow(m2, 1.5);
    out.kurtosis = m4 / (m2 * m2);
  }
  return out;
}

/// Inverse of the step-function weighted empirical CDF: the smallest value v
/// with CDF(v) >= p (lower-value tie rule). Zero-weight points never matter.
inline double weighted_quantile(std::span<const double> xs, std::span<const double> ws, double p) {
  if (xs.size() != ws.size() || xs.empty())
    throw std::invalid_argument("weighted_quantile: size mismatch or empty");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("weighted_quantile: p outside [0,1]");
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  double wsum = std::accumulate(ws.begin(), ws.end(), 0.0);
  if (!(wsum > 0.0)) throw std::invalid_argument("weighted_quantile: weights sum to zero");
  double acc = 0.0;
  double target = p * wsum;
  for (std::size_t k : order) {
    acc += ws[k];
    if (acc >= target * (1.0 - 1e-15)) return xs[k];
  }
  return xs[order.back()];
}

/// Golden-section minimizer for a convex function on [lo, hi].
template <class F>
double golden_section_min(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 400) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

inline double logistic(double s) { return 1.0 / (1.0 + std::exp(-s)); }

/// log(1 + exp(s)) without overflow.
inline double softplus(double s) { return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

/// Bernoulli(logistic(s)) log-pmf at y in {0,1}.
inline double log_bernoulli_logit(int y, double s) {
  return y ? -softplus(-s) : -softplus(s);
}

}  // namespace is2

#endif  // IS2_MATH_HPP
