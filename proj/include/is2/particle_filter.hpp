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

#ifndef IS2_PARTICLE_FILTER_HPP
#define IS2_PARTICLE_FILTER_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <vector>

#include <is2/errors.hpp>
#include <is2/likelihood.hpp>
#include <is2/math.hpp>
#include <is2/rng.hpp>

namespace is2 {

/// A univariate state-space model with conditionally Gaussian state noise,
/// exposed as (mean, sd) pairs so process noise can be paired antithetically.
template <class M>
concept StateSpaceModel = requires(const M& m, double x, std::size_t t) {
  { m.num_steps() } -> std::convertible_to<std::size_t>;
  { m.initial_mean_sd() } -> std::convertible_to<std::pair<double, double>>;
  { m.transition_mean_sd(x, t) } -> std::convertible_to<std::pair<double, double>>;
  { m.log_obs_density(t, x) } -> std::convertible_to<double>;
};

namespace detail {

/// Multinomial resampling by inverse-CDF lookup on the cumulative weights.
inline void multinomial_resample(const std::vector<double>& w, double wsum,
                                 std::vector<std::size_t>& ancestors, RngStream& rng) {
  const std::size_t n = w.size();
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += w[j];
    cdf[j] = acc;
  }
  for (std::size_t k = 0; k < n; ++k) {
    double u = rng.uniform() * wsum;
    ancestors[k] = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (ancestors[k] >= n) ancestors[k] = n - 1;
  }
}

}  // namespace detail

/// Standard bootstrap particle filter with multinomial resampling every
/// period. Returns log p_hat(y_{1:T}) = sum_t log((1/n) sum_j p(y_t|x_t^j)),
/// which is unbiased for the likelihood on the natural scale.
///
/// With antithetic = true (n must be even), initial-state draws and process
/// noise come in (z, -z) pairs across the two particle half-blocks; ancestor
/// indices stay independent.
///
/// Throws ParticleCollapseError (with the offending period) if every
/// observation density underflows at some t.
template <StateSpaceModel M>
LikelihoodEstimate bootstrap_particle_filter(const M& model, int n, RngStream& rng,
                                             bool antithetic = false) {
  // n = 1 is allowed and degenerates to prior-path importance sampling.
  if (n < 1) throw std::invalid_argument("bootstrap_particle_filter: n must be >= 1");
  if (antithetic && n % 2 != 0) throw OddCountError();
  const std::size_t T = model.num_steps();
  if (T < 1) throw std::invalid_argument("bootstrap_particle_filter: need T >= 1 observations");

  const std::size_t np = static_cast<std::size_t>(n);
  const std::size_t half = np / 2;
  std::vector<double> x(np), w(np);
  std::vector<std::size_t> anc(np);

  auto [m0, s0] = model.initial_mean_sd();
  if (antithetic) {
    for (std::size_t j = 0; j < half; ++j) {
      double z = rng.normal();
      x[j] = m0 + s0 * z;
      x[j + half] = m0 - s0 * z;
    }
  } else {
    for (std::size_t j = 0; j < np; ++j) x[j] = m0 + s0 * rng.normal();
  }

  double loglik = 0.0;
  std::vector<double> lw(np);
  for (std::size_t t = 0; t < T; ++t) {
    double maxlw = neg_inf;
    for (std::size_t j = 0; j < np; ++j) {
      lw[j] = model.log_obs_density(t, x[j]);
      maxlw = std::max(maxlw, lw[j]);
    }
    if (maxlw == neg_inf || std::isnan(maxlw)) throw ParticleCollapseError(t);
    double wsum = 0.0;
    for (std::size_t j = 0; j < np; ++j) {
      w[j] = lw[j] == neg_inf ? 0.0 : std::exp(lw[j] - maxlw);
      wsum += w[j];
    }
    loglik += maxlw + std::log(wsum / static_cast<double>(np));

    if (t + 1 < T) {
      detail::multinomial_resample(w, wsum, anc, rng);
      if (antithetic) {
        std::vector<double> xn(np);
        for (std::size_t j = 0; j < half; ++j) {
          double z = rng.normal();
          auto [ma, sa] = model.transition_mean_sd(x[anc[j]], t);
          auto [mb, sb] = model.transition_mean_sd(x[anc[j + half]], t);
          xn[j] = ma + sa * z;
          xn[j + half] = mb - sb * z;
        }
        x.swap(xn);
      } else {
        std::vector<double> xn(np);
        for (std::size_t j = 0; j < np; ++j) {
          auto [mt, st] = model.transition_mean_sd(x[anc[j]], t);
          xn[j] = mt + st * rng.normal();
        }
        x.swap(xn);
      }
    }
  }

  LikelihoodEstimate est;
  est.log_value = loglik;
  est.n_particles = n;
  return est;
}

}  // namespace is2

#endif  // IS2_PARTICLE_FILTER_HPP
