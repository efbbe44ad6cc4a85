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

#ifndef IS2_TUNING_HPP
#define IS2_TUNING_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <is2/errors.hpp>
#include <is2/likelihood.hpp>
#include <is2/math.hpp>
#include <is2/rng.hpp>

#include <json.hpp>

namespace is2 {

/// Timing constants of one likelihood evaluation: tau0 + N * tau1 seconds.
struct CostModel {
  double tau0 = 0.0;  // per-evaluation overhead (proposal construction etc.)
  double tau1 = 0.0;  // per-particle cost, > 0
};

/// Variance of the normalized weights plus the cost constants: everything
/// the marginal-likelihood computing-time curve depends on.
struct MlCostInputs {
  double v = 0.0;  // V_gIS[W_i] > 0
  CostModel cost;
  double gamma_bar2 = 0.0;
};

/// Leave-one-out jackknife over the particle log-weights of the statistic
/// log-mean-exp: V_hat = ((N-1)/N) sum_j (l_(j) - l_bar)^2 where l_(j) is the
/// log-mean of the weights with particle j removed.
///
/// jackknife_loglik_variance enforces the documented N >= 10 floor; the _impl
/// variant computes the same formula for any N >= 2 and backs internal
/// small-N bookkeeping (per-individual allocations can sit at N = 2).
inline double jackknife_loglik_variance_impl(const std::vector<double>& particle_log_weights) {
  const std::size_t n = particle_log_weights.size();
  if (n < 2) throw TooFewParticlesError("jackknife: need at least 2 particle weights");
  double lse = log_sum_exp(particle_log_weights);
  if (lse == neg_inf) return 0.0;
  std::vector<double> loo(n);
  const double log_nm1 = std::log(static_cast<double>(n - 1));
  for (std::size_t j = 0; j < n; ++j) {
    double lr = particle_log_weights[j] - lse;  // <= 0
    // log(sum - w_j) = lse + log(1 - exp(lr))
    loo[j] = lr >= 0.0 ? neg_inf : lse + log1m_exp(lr) - log_nm1;
  }
  double lbar = mean(loo);
  if (!std::isfinite(lbar)) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (double l : loo) s += (l - lbar) * (l - lbar);
  return (static_cast<double>(n - 1) / static_cast<double>(n)) * s;
}

inline double jackknife_loglik_variance(const LikelihoodEstimate& estimate) {
  if (!estimate.particle_log_weights)
    throw TooFewParticlesError("jackknife: estimate carries no particle weights");
  if (estimate.particle_log_weights->size() < 10)
    throw TooFewParticlesError("jackknife: need at least 10 particle weights");
  return jackknife_loglik_variance_impl(*estimate.particle_log_weights);
}

/// gamma_bar^2 estimate from pilot draws at a common particle count N0:
/// (N0/J) sum_j V_hat_j. Practical use wants J >= 5; the arithmetic is defined
/// for J >= 2 and that is what we enforce.
inline double estimate_gamma_bar(const std::vector<double>& pilot_vhat, int n0) {
  if (pilot_vhat.size() < 2)
    throw TooFewPilotsError("estimate_gamma_bar: need at least 2 pilot estimates");
  if (n0 < 1) throw std::invalid_argument("estimate_gamma_bar: n0 must be positive");
  double s = 0.0;
  for (double v : pilot_vhat) {
    if (!(v >= 0.0)) throw std::invalid_argument("estimate_gamma_bar: negative variance");
    s += v;
  }
  return static_cast<double>(n0) * s / static_cast<double>(pilot_vhat.size());
}

/// Computing-time curve for posterior expectations:
/// CT*(sigma2) = exp(sigma2) (tau0 + tau1 gamma_bar2 / sigma2).
inline double ct_star(double sigma2, const CostModel& cost, double gamma_bar2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("ct_star: sigma2 must be positive");
  return std::exp(sigma2) * (cost.tau0 + cost.tau1 * gamma_bar2 / sigma2);
}

/// Closed-form minimizer of ct_star: 1 when tau0 = 0, otherwise
/// (-tau1 + sqrt(tau1^2 + 4 tau0 tau1 / gamma_bar2)) / (2 tau0 / gamma_bar2).
inline double sigma2_opt(const CostModel& cost, double gamma_bar2) {
  if (!(gamma_bar2 > 0.0)) throw std::invalid_argument("sigma2_opt: gamma_bar2 must be positive");
  if (!(cost.tau1 > 0.0)) throw std::invalid_argument("sigma2_opt: tau1 must be positive");
  if (cost.tau0 == 0.0) return 1.0;
  double a = 2.0 * cost.tau0 / gamma_bar2;
  return (-cost.tau1 + std::sqrt(cost.tau1 * cost.tau1 + 2.0 * a * cost.tau1)) / a;
}

/// Variance-inflation factor of IS^2 over exact-likelihood IS: exp(sigma2).
inline double inflation_factor(double sigma2) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("inflation_factor: sigma2 must be >= 0");
  return std::exp(sigma2);
}

/// Relative inefficiency of the IS^2 marginal-likelihood estimator:
/// (exp(sigma2)(v+1) - 1) / v.
inline double ml_inflation_factor(double sigma2, double v) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("ml_inflation_factor: sigma2 must be >= 0");
  if (!(v > 0.0)) throw std::invalid_argument("ml_inflation_factor: v must be positive");
  return (std::exp(sigma2) * (v + 1.0) - 1.0) / v;
}

/// Computing-time curve for the marginal likelihood:
/// (tau0 + tau1 gamma_bar2 / sigma2) (exp(sigma2)(v+1) - 1).
inline double ml_ct_star(double sigma2, const CostModel& cost, double gamma_bar2, double v) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("ml_ct_star: sigma2 must be positive");
  if (!(v > 0.0)) throw std::invalid_argument("ml_ct_star: v must be positive");
  return (cost.tau0 + cost.tau1 * gamma_bar2 / sigma2) * (std::exp(sigma2) * (v + 1.0) - 1.0);
}

/// Numeric minimizer of a convex curve in sigma2, run by golden section on
/// log(sigma2) over [1e-4, 10] and refined to 1e-6 in sigma2.
template <class F>
double minimize_sigma2(F&& f, double lo = 1e-4, double hi = 10.0) {
  auto g = [&](double x) { return f(std::exp(x)); };
  double xstar = golden_section_min(g, std::log(lo), std::log(hi), 1e-13, 500);
  return std::exp(xstar);
}

/// Unique minimizer of ml_ct_star over sigma2 in [1e-4, 10].
inline double sigma2_min_ml(double v, const CostModel& cost, double gamma_bar2) {
  if (!(v > 0.0)) throw std::invalid_argument("sigma2_min_ml: v must be positive");
  return minimize_sigma2([&](double s) { return ml_ct_star(s, cost, gamma_bar2, v); });
}

/// Importance samples needed for precision P*: ceil(sigma2_IS(phi) e^{sigma2} / P*).
inline std::int64_t required_samples(double sigma2_is_phi, double sigma2, double precision) {
  if (!(sigma2_is_phi > 0.0))
    throw std::invalid_argument("required_samples: sigma2_is_phi must be positive");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("required_samples: sigma2 must be >= 0");
  if (!(precision > 0.0)) throw std::invalid_argument("required_samples: precision must be positive");
  return static_cast<std::int64_t>(std::ceil(sigma2_is_phi * std::exp(sigma2) / precision));
}

/// Time-normalized variance: estimator variance times wall-clock seconds.
inline double tnv(double var_hat, double elapsed_seconds) {
  if (!(var_hat >= 0.0)) throw std::invalid_argument("tnv: variance must be >= 0");
  if (!(elapsed_seconds > 0.0)) throw std::invalid_argument("tnv: elapsed time must be positive");
  return var_hat * elapsed_seconds;
}

/// Per-individual particle allocation for a panel likelihood: targeting
/// V(log p_hat(y_i)) ~ sigma2 / I gives N_i = ceil(gamma2_i * I / sigma2),
/// floored at 2 and forced even when antithetics are on.
inline std::vector<int> panel_particle_allocation(const std::vector<double>& per_individual_gamma2,
                                                  std::size_t num_individuals, double sigma2,
                                                  bool force_even = false) {
  if (per_individual_gamma2.size() != num_individuals)
    throw std::invalid_argument("panel_particle_allocation: gamma2 list length must equal I");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("panel_particle_allocation: sigma2 must be positive");
  std::vector<int> out;
  out.reserve(num_individuals);
  const double scale = static_cast<double>(num_individuals) / sigma2;
  for (double g2 : per_individual_gamma2) {
    if (!(g2 >= 0.0)) throw std::invalid_argument("panel_particle_allocation: negative gamma2");
    int n = std::max(2, static_cast<int>(std::ceil(g2 * scale)));
    if (force_even && n % 2 != 0) n += 1;
    out.push_back(n);
  }
  return out;
}

struct TuneResult {
  int n = 0;
  double v_hat = 0.0;
  bool capped = false;  // warning flag: n_max reached with V_hat above target
};

inline constexpr int default_tune_cap = 1'000'000;

/// Geometric search for the smallest tried particle count whose estimated
/// V(log p_hat) is at or below the target: n_init, ceil(growth n), ... capped
/// at n_max. vhat_at must estimate V(log p_hat) at a given n from fresh
/// randomness (jackknife or replicates); anything drawn here is pilot-only
/// and the reported likelihood estimate must use fresh particles.
template <class VhatFn>
TuneResult tune_particles(VhatFn&& vhat_at, double target_sigma2, int n_init, double growth,
                          RngStream& rng, int n_max = default_tune_cap) {
  if (!(target_sigma2 > 0.0)) throw std::invalid_argument("tune_particles: target must be positive");
  if (n_init < 1) throw std::invalid_argument("tune_particles: n_init must be >= 1");
  if (!(growth > 1.0)) throw std::invalid_argument("tune_particles: growth must exceed 1");
  int n = n_init;
  for (;;) {
    double v = vhat_at(n, rng);
    if (v <= target_sigma2) return {n, v, false};
    if (n >= n_max) return {n, v, true};
    n = std::min(n_max, static_cast<int>(std::ceil(growth * n)));
  }
}

/// The (tau0, tau1) timing constants, gamma_bar2, and derived sigma2_opt.
struct TuningProfile {
  double gamma_bar2 = 0.0;
  double sigma2_opt = 0.0;
  CostModel cost;
  int pilot_n0 = 0;
  std::optional<std::map<std::size_t, double>> per_theta_gamma2;
};

inline nlohmann::json to_json(const TuningProfile& p) {
  nlohmann::json j{{"gamma_bar2", p.gamma_bar2},
                   {"sigma2_opt", p.sigma2_opt},
                   {"tau0", p.cost.tau0},
                   {"tau1", p.cost.tau1},
                   {"pilot_n0", p.pilot_n0}};
  if (p.per_theta_gamma2) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [k, v] : *p.per_theta_gamma2) m[std::to_string(k)] = v;
    j["per_theta_gamma2"] = m;
  }
  return j;
}

inline TuningProfile tuning_profile_from_json(const nlohmann::json& j) {
  TuningProfile p;
  p.gamma_bar2 = j.at("gamma_bar2").get<double>();
  p.sigma2_opt = j.at("sigma2_opt").get<double>();
  p.cost.tau0 = j.at("tau0").get<double>();
  p.cost.tau1 = j.at("tau1").get<double>();
  p.pilot_n0 = j.value("pilot_n0", 0);
  if (j.contains("per_theta_gamma2")) {
    std::map<std::size_t, double> m;
    for (const auto& [k, v] : j.at("per_theta_gamma2").items())
      m[std::stoull(k)] = v.get<double>();
    p.per_theta_gamma2 = std::move(m);
  }
  return p;
}

}  // namespace is2

#endif  // IS2_TUNING_HPP
