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

#ifndef IS2_LIKELIHOOD_HPP
#define IS2_LIKELIHOOD_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <is2/errors.hpp>
#include <is2/math.hpp>
#include <is2/rng.hpp>

namespace is2 {

/// An unbiased natural-scale likelihood estimate carried in log form. When
/// the per-particle log-weights are retained (latent-variable IS), log_value
/// is exactly their log-mean-exp, which is what the jackknife consumes.
struct LikelihoodEstimate {
  double log_value = 0.0;
  int n_particles = 1;
  std::optional<double> loglik_var_hat;
  std::optional<std::vector<double>> particle_log_weights;
};

/// An importance density h(x|y,theta) for the latent variable: a sampler and
/// a log-density. from_standard_normal, when set, reparameterizes a draw as a
/// deterministic map of one standard normal; antithetic pairing needs it.
template <class X = double>
struct LatentProposal {
  std::function<X(RngStream&)> sample;
  std::function<double(const X&)> log_density;
  std::function<X(double)> from_standard_normal;
  /// Whether constructing this proposal costs tau0 > 0 per evaluation.
  bool has_overhead = false;
};

/// The model at a fixed theta, split so the defensive-mixture weight bound
/// can be checked particle by particle.
template <class X = double>
struct LatentTarget {
  std::function<double(const X&)> log_obs;    // log p(y|x,theta)
  std::function<double(const X&)> log_prior;  // log p(x|theta)
};

inline LatentProposal<double> gaussian_latent_proposal(double mean, double sd,
                                                       bool has_overhead = false) {
  if (!(sd > 0.0)) throw std::invalid_argument("gaussian_latent_proposal: sd must be positive");
  LatentProposal<double> p;
  p.sample = [mean, sd](RngStream& rng) { return mean + sd * rng.normal(); };
  p.log_density = [mean, sd](const double& x) { return log_normal_pdf(x, mean, sd * sd); };
  p.from_standard_normal = [mean, sd](double z) { return mean + sd * z; };
  p.has_overhead = has_overhead;
  return p;
}

/// Two-component defensive mixture pi * h_eff + (1-pi) * p(x|theta). Keeping
/// the natural component in the mixture bounds the importance ratio
/// p(x|theta)/h_mix(x) by 1/(1-pi).
template <class X = double>
struct DefensiveMixture {
  LatentProposal<X> efficient_component;
  LatentProposal<X> natural_component;
  double pi = 0.5;

  double log_density(const X& x) const {
    return log_add_exp(std::log(pi) + efficient_component.log_density(x),
                       std::log1p(-pi) + natural_component.log_density(x));
  }
};

struct StratifiedCounts {
  int n_eff = 0;
  int n_nat = 0;
};

/// Deterministic split of n particles across the two mixture components at
/// the exact mixture proportion: n_eff = round-half-up(pi * n), both counts
/// at least 1.
inline StratifiedCounts stratified_allocation(int n, double pi) {
  if (n < 2) throw std::invalid_argument("stratified_allocation: n must be >= 2");
  if (!(pi > 0.0 && pi < 1.0))
    throw std::invalid_argument("stratified_allocation: pi must be in (0,1)");
  int n_eff = static_cast<int>(std::floor(pi * n + 0.5));
  n_eff = std::max(1, std::min(n - 1, n_eff));
  return {n_eff, n - n_eff};
}

/// Expands base standard-normal draws into perfectly negatively correlated
/// pairs (u, -u), interleaved.
inline std::vector<double> antithetic_pairs(const std::vector<double>& base_draws) {
  std::vector<double> out;
  out.reserve(2 * base_draws.size());
  for (double u : base_draws) {
    out.push_back(u);
    out.push_back(-u);
  }
  return out;
}

/// total_count standard normals as (u, -u) pairs. The count must be even.
inline std::vector<double> antithetic_normal_draws(int total_count, RngStream& rng) {
  if (total_count < 0) throw std::invalid_argument("antithetic_normal_draws: negative count");
  if (total_count % 2 != 0) throw OddCountError();
  std::vector<double> base(static_cast<std::size_t>(total_count / 2));
  for (auto& u : base) u = rng.normal();
  return antithetic_pairs(base);
}

namespace detail {

template <class X, class LogDensity>
LikelihoodEstimate finish_is_estimate(const LatentTarget<X>& target, const std::vector<X>& xs,
                                      LogDensity&& log_h) {
  std::vector<double> lw;
  lw.reserve(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double v = target.log_obs(xs[j]) + target.log_prior(xs[j]) - log_h(xs[j]);
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw NonFiniteWeightError(j);
    lw.push_back(v);
  }
  LikelihoodEstimate est;
  est.log_value = log_mean_exp(lw);
  est.n_particles = static_cast<int>(xs.size());
  est.particle_log_weights = std::move(lw);
  return est;
}

/// Draws `count` values from one proposal, in antithetic pairs when requested
/// and the proposal is reparameterizable. An odd count gets (count-1)/2 pairs
/// plus one independent draw.
template <class X>
void sample_component(const LatentProposal<X>& prop, int count, bool antithetic, RngStream& rng,
                      std::vector<X>& out) {
  if (antithetic && prop.from_standard_normal) {
    int pairs = count / 2;
    for (int k = 0; k < pairs; ++k) {
      double z = rng.normal();
      out.push_back(prop.from_standard_normal(z));
      out.push_back(prop.from_standard_normal(-z));
    }
    if (count % 2 != 0) out.push_back(prop.sample(rng));
  } else {
    for (int k = 0; k < count; ++k) out.push_back(prop.sample(rng));
  }
}

}  // namespace detail

/// Unbiased latent-variable IS estimate of the likelihood:
/// log((1/n) sum_j p(y|x_j) p(x_j) / h(x_j)), x_j iid from h. The particle
/// log-weights are retained for the jackknife.
template <class X>
LikelihoodEstimate is_likelihood_estimate(const LatentTarget<X>& target,
                                          const LatentProposal<X>& proposal, int n,
                                          RngStream& rng, bool antithetic = false) {
  if (n < 1) throw std::invalid_argument("is_likelihood_estimate: n must be >= 1");
  std::vector<X> xs;
  xs.reserve(static_cast<std::size_t>(n));
  detail::sample_component(proposal, n, antithetic, rng, xs);
  return detail::finish_is_estimate(target, xs, proposal.log_density);
}

struct MixtureSamplingOptions {
  bool stratified = true;
  bool antithetic = true;
};

/// Defensive-mixture variant. Stratified sampling draws each component at the
/// exact allocated count and weights against the mixture at the realized
/// proportions, which keeps the estimate unbiased for every n (the realized
/// and nominal mixtures coincide whenever pi*n is integral). The weight bound
/// p(x)/h_mix(x) <= 1/(1-pi_realized) is asserted per particle.
template <class X>
LikelihoodEstimate is_likelihood_estimate(const LatentTarget<X>& target,
                                          const DefensiveMixture<X>& mixture, int n,
                                          RngStream& rng, MixtureSamplingOptions opts = {}) {
  if (n < 1) throw std::invalid_argument("is_likelihood_estimate: n must be >= 1");
  if (!(mixture.pi > 0.0 && mixture.pi < 1.0))
    throw std::invalid_argument("is_likelihood_estimate: mixture pi must be in (0,1)");

  int n_eff = 0, n_nat = 0;
  if (opts.stratified && n >= 2) {
    auto counts = stratified_allocation(n, mixture.pi);
    n_eff = counts.n_eff;
    n_nat = counts.n_nat;
  } else {
    for (int j = 0; j < n; ++j) (rng.uniform() < mixture.pi ? n_eff : n_nat) += 1;
  }

  std::vector<X> xs;
  xs.reserve(static_cast<std::size_t>(n));
  detail::sample_component(mixture.efficient_component, n_eff, opts.antithetic, rng, xs);
  detail::sample_component(mixture.natural_component, n_nat, opts.antithetic, rng, xs);

  // Realized proportion for the weight density. Under multinomial component
  // choice the draws are marginally from the nominal mixture instead.
  const bool realized = opts.stratified && n >= 2;
  const double pi_w = realized ? static_cast<double>(n_eff) / n : mixture.pi;
  auto log_h = [&](const X& x) {
    if (pi_w <= 0.0) return mixture.natural_component.log_density(x);
    if (pi_w >= 1.0) return mixture.efficient_component.log_density(x);
    return log_add_exp(std::log(pi_w) + mixture.efficient_component.log_density(x),
                       std::log1p(-pi_w) + mixture.natural_component.log_density(x));
  };

  auto est = detail::finish_is_estimate(target, xs, log_h);

  const double log_bound = -std::log1p(-pi_w);
  const auto& lw = *est.particle_log_weights;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (lw[j] > target.log_obs(xs[j]) + log_bound + 1e-9)
      throw std::logic_error("defensive mixture weight bound violated; inconsistent densities");
  }
  return est;
}

}  // namespace is2

#endif  // IS2_LIKELIHOOD_HPP
