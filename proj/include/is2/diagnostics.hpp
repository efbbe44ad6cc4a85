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

#ifndef IS2_DIAGNOSTICS_HPP
#define IS2_DIAGNOSTICS_HPP

#include <span>
#include <stdexcept>

#include <is2/math.hpp>

namespace is2 {

/// Normality diagnostics of a sample of log-likelihood estimates. The 5%
/// Jarque-Bera cutoff is the chi-squared(2) 95th percentile.
struct LogLikDiagnostics {
  double variance = 0.0;  // unbiased sample variance
  double skewness = 0.0;
  double kurtosis = 0.0;
  double jb_statistic = 0.0;
  bool jb_reject_5pct = false;
};

inline constexpr double jb_critical_5pct = 5.991;

/// JB = (m/6) (S^2 + (K-3)^2 / 4). A zero-variance sample reports statistic 0
/// and non-reject rather than NaN.
inline LogLikDiagnostics loglik_diagnostics(std::span<const double> samples) {
  if (samples.size() < 20)
    throw std::invalid_argument("loglik_diagnostics: need at least 20 samples");
  auto m = sample_moments(samples);
  LogLikDiagnostics out;
  out.variance = m.variance;
  if (!(m.variance > 0.0)) return out;
  out.skewness = m.skewness;
  out.kurtosis = m.kurtosis;
  double n = static_cast<double>(samples.size());
  double ek = m.kurtosis - 3.0;
  out.jb_statistic = n / 6.0 * (m.skewness * m.skewness + 0.25 * ek * ek);
  out.jb_reject_5pct = out.jb_statistic > jb_critical_5pct;
  return out;
}

}  // namespace is2

#endif  // IS2_DIAGNOSTICS_HPP
