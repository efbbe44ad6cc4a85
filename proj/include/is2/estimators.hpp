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

#ifndef IS2_ESTIMATORS_HPP
#define IS2_ESTIMATORS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <is2/errors.hpp>
#include <is2/math.hpp>
#include <is2/rng.hpp>
#include <is2/weights.hpp>

namespace is2 {

/// A test function phi mapping a parameter vector to a real. Evaluation must
/// be deterministic and pure.
using TestFunction = std::function<double(const std::vector<double>&)>;

struct PosteriorEstimate {
  double value = 0.0;
  double asym_var_hat = 0.0;  // sigma2_IS2(phi) estimate
  double mc_se = 0.0;         // sqrt(asym_var_hat / M)
  double ess = 0.0;
};

struct MarginalLikelihoodEstimate {
  double log_value = 0.0;
  double mc_se_of_log = 0.0;
};

namespace detail {

/// Log-weights shifted by their finite maximum so all natural-scale work
/// happens on values in [0, 1]. Weight arithmetic everywhere in this module
/// goes through this shift; natural-scale weights can span hundreds of log
/// units in realistic runs.
struct ShiftedWeights {
  double max_log_w = neg_inf;
  std::vector<double> w;  // exp(lw - max), exactly 0 for lw = -inf
  double sum = 0.0;
  double sum_sq = 0.0;

  std::size_t size() const { return w.size(); }
};

inline ShiftedWeights shift_weights(const std::vector<double>& log_w) {
  ShiftedWeights s;
  for (double lw : log_w) s.max_log_w = std::max(s.max_log_w, lw);
  s.w.reserve(log_w.size());
  if (s.max_log_w == neg_inf) {
    s.w.assign(log_w.size(), 0.0);
    return s;
  }
  for (double lw : log_w) {
    double v = lw == neg_inf ? 0.0 : std::exp(lw - s.max_log_w);
    s.w.push_back(v);
    s.sum += v;
    s.sum_sq += v * v;
  }
  return s;
}

inline void require_some_weight(const ShiftedWeights& s) {
  if (s.size() == 0 || s.max_log_w == neg_inf || !(s.sum > 0.0)) throw AllWeightsZeroError();
}

template <class Phi>
std::vector<double> evaluate_phi(const DrawSet& draws, Phi&& phi) {
  std::vector<double> vals;
  vals.reserve(draws.size());
  for (const auto& d : draws.draws) vals.push_back(phi(d.theta));
  return vals;
}

inline double self_normalized_value(const ShiftedWeights& s, const std::vector<double>& phis) {
  double num = 0.0;
  for (std::size_t i = 0; i < phis.size(); ++i) num += phis[i] * s.w[i];
  return num / s.sum;
}

inline double asym_var_value(const ShiftedWeights& s, const std::vector<double>& phis,
                             double phi_hat) {
  double num = 0.0;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    double d = phis[i] - phi_hat;
    num += d * d * s.w[i] * s.w[i];
  }
  return static_cast<double>(phis.size()) * num / (s.sum * s.sum);
}

}  // namespace detail

/// Effective sample size (sum w)^2 / sum w^2, always in [1, M].
inline double ess(const DrawSet& draws) {
  auto s = detail::shift_weights(draws.log_weights());
  detail::require_some_weight(s);
  return s.sum * s.sum / s.sum_sq;
}

/// ESS the proposal would attain if likelihoods were exact: exp(sigma2) * ess.
inline double adjusted_ess(double ess_is2, double sigma2) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("adjusted_ess: sigma2 must be >= 0");
  return std::exp(sigma2) * ess_is2;
}

/// Self-normalized estimate of E_pi[phi]: sum phi_i w_i / sum w_i, with the
/// asymptotic-variance estimate and ESS filled in.
template <class Phi>
PosteriorEstimate self_normalized_estimate(const DrawSet& draws, Phi&& phi) {
  auto s = detail::shift_weights(draws.log_weights());
  detail::require_some_weight(s);
  auto phis = detail::evaluate_phi(draws, phi);
  PosteriorEstimate out;
  out.value = detail::self_normalized_value(s, phis);
  out.asym_var_hat = detail::asym_var_value(s, phis, out.value);
  out.mc_se = std::sqrt(out.asym_var_hat / static_cast<double>(draws.size()));
  out.ess = s.sum * s.sum / s.sum_sq;
  return out;
}

/// M * sum (phi_i - phi_hat)^2 w_i^2 / (sum w_i)^2.
template <class Phi>
double asymptotic_variance_estimate(const DrawSet& draws, Phi&& phi) {
  auto s = detail::shift_weights(draws.log_weights());
  detail::require_some_weight(s);
  auto phis = detail::evaluate_phi(draws, phi);
  return detail::asym_var_value(s, phis, detail::self_normalized_value(s, phis));
}

/// log of the arithmetic mean of natural-scale weights (the marginal
/// likelihood estimate), with a delta-method standard error of the log:
/// sd(w) / (sqrt(M) * mean(w)). The shift cancels from the SE.
inline MarginalLikelihoodEstimate marginal_likelihood_estimate(const DrawSet& draws) {
  if (draws.size() < 2)
    throw TooFewDrawsError("marginal_likelihood_estimate: need at least 2 draws");
  auto s = detail::shift_weights(draws.log_weights());
  detail::require_some_weight(s);
  const double m = static_cast<double>(draws.size());
  MarginalLikelihoodEstimate out;
  out.log_value = s.max_log_w + std::log(s.sum) - std::log(m);
  double wbar = s.sum / m;
  double ssq = 0.0;
  for (double w : s.w) ssq += (w - wbar) * (w - wbar);
  double sd = std::sqrt(ssq / (m - 1.0));
  out.mc_se_of_log = sd / (std::sqrt(m) * wbar);
  return out;
}

/// Removes the single largest-weight draw (ties broken by lowest index) and,
/// if present, its antithetic partner; partner links into the removed draws
/// are dropped and the rest remapped.
inline DrawSet trim_max_weight_draw(const DrawSet& draws) {
  if (draws.size() < 3) throw TooFewDrawsError("trimmed_estimate: need at least 3 draws");
  auto lw = draws.log_weights();
  std::size_t imax = 0;
  for (std::size_t i = 1; i < lw.size(); ++i)
    if (lw[i] > lw[imax]) imax = i;
  std::vector<bool> removed(draws.size(), false);
  removed[imax] = true;
  if (auto p = draws.draws[imax].antithetic_partner; p && *p < draws.size()) removed[*p] = true;

  std::size_t remaining = draws.size();
  for (bool r : removed) remaining -= r ? 1 : 0;
  if (remaining < 2) throw TooFewDrawsError("trimmed_estimate: fewer than 2 draws would remain");

  std::vector<std::size_t> new_index(draws.size());
  DrawSet out;
  out.master_seed = draws.master_seed;
  out.model_id = draws.model_id;
  out.proposal_id = draws.proposal_id;
  out.draws.reserve(remaining);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    if (removed[i]) continue;
    new_index[i] = out.draws.size();
    out.draws.push_back(draws.draws[i]);
  }
  for (auto& d : out.draws) {
    if (d.antithetic_partner) {
      std::size_t p = *d.antithetic_partner;
      if (p >= draws.size() || removed[p])
        d.antithetic_partner.reset();
      else
        d.antithetic_partner = new_index[p];
    }
  }
  return out;
}

template <class Phi>
PosteriorEstimate trimmed_estimate(const DrawSet& draws, Phi&& phi) {
  return self_normalized_estimate(trim_max_weight_draw(draws), phi);
}

/// Standard deviation of the self-normalized estimate over n_boot
/// with-replacement resamples of the M draws. Deterministic given the seed.
template <class Phi>
double bootstrap_mc_se(const DrawSet& draws, Phi&& phi, int n_boot, std::uint64_t seed) {
  if (draws.size() < 2) throw TooFewDrawsError("bootstrap_mc_se: need at least 2 draws");
  if (n_boot < 100) throw std::invalid_argument("bootstrap_mc_se: n_boot must be >= 100");
  auto s = detail::shift_weights(draws.log_weights());
  detail::require_some_weight(s);
  auto phis = detail::evaluate_phi(draws, phi);
  const std::size_t m = draws.size();

  std::vector<double> estimates;
  estimates.reserve(static_cast<std::size_t>(n_boot));
  for (int b = 0; b < n_boot; ++b) {
    auto rng = RngStream::derive(seed, static_cast<std::uint64_t>(b), 0xB007);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t k = rng.uniform_index(m);
      num += phis[k] * s.w[k];
      den += s.w[k];
    }
    if (!(den > 0.0)) throw AllWeightsZeroError();
    estimates.push_back(num / den);
  }
  return sample_sd(estimates);
}

}  // namespace is2

#endif  // IS2_ESTIMATORS_HPP
