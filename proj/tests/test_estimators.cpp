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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <is2/estimators.hpp>
#include <is2/rng.hpp>
#include <is2/weights.hpp>

using namespace is2;
using Catch::Approx;

namespace {

// Synthetic draw set: 1-D thetas carrying given phi values, with the weight
// routed through log_lik_hat so log w = log(weight).
DrawSet make_draws(const std::vector<double>& weights, const std::vector<double>& phis) {
  DrawSet ds;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    WeightedDraw d;
    d.theta = {phis[i]};
    d.log_prior = 0.0;
    d.log_proposal = 0.0;
    d.log_lik_hat = weights[i] > 0.0 ? std::log(weights[i]) : neg_inf;
    ds.draws.push_back(d);
  }
  return ds;
}

double first_coord(const std::vector<double>& th) { return th[0]; }

}  // namespace

TEST_CASE("self-normalized estimate: single draw returns phi") {
  auto ds = make_draws({0.8}, {7.3});
  CHECK(self_normalized_estimate(ds, first_coord).value == Approx(7.3));
}

TEST_CASE("self-normalized estimate: equal weights reduce to the mean") {
  auto ds = make_draws({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0});
  CHECK(self_normalized_estimate(ds, first_coord).value == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("self-normalized estimate: hand-evaluated weighted mean") {
  // weights {1,2,1}, phi {0,1,2} -> (0*1 + 1*2 + 2*1)/4 = 1
  auto ds = make_draws({1.0, 2.0, 1.0}, {0.0, 1.0, 2.0});
  CHECK(self_normalized_estimate(ds, first_coord).value == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("self-normalized estimate: all weights zero raises") {
  auto ds = make_draws({0.0, 0.0}, {1.0, 2.0});
  CHECK_THROWS_AS(self_normalized_estimate(ds, first_coord), AllWeightsZeroError);
}

TEST_CASE("asymptotic variance: equal weights collapse to population variance") {
  auto ds = make_draws({5.0, 5.0, 5.0}, {1.0, 2.0, 3.0});
  CHECK(asymptotic_variance_estimate(ds, first_coord) == Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("asymptotic variance: one positive weight gives zero") {
  auto ds = make_draws({0.0, 3.0, 0.0}, {5.0, 1.0, -2.0});
  CHECK(asymptotic_variance_estimate(ds, first_coord) == Approx(0.0).margin(1e-14));
}

TEST_CASE("asymptotic variance: hand evaluation with weights {3,1}") {
  // phi_hat = 1; 2 * [(0-1)^2 * 9 + (4-1)^2 * 1] / 16 = 2.25
  auto ds = make_draws({3.0, 1.0}, {0.0, 4.0});
  CHECK(asymptotic_variance_estimate(ds, first_coord) == Approx(2.25).epsilon(1e-13));
}

TEST_CASE("ESS: uniform, degenerate and hand-evaluated cases") {
  CHECK(ess(make_draws({1, 1, 1, 1}, {0, 0, 0, 0})) == Approx(4.0).epsilon(1e-14));
  CHECK(ess(make_draws({1, 0, 0}, {0, 0, 0})) == Approx(1.0).epsilon(1e-14));
  CHECK(ess(make_draws({3, 1}, {0, 0})) == Approx(1.6).epsilon(1e-14));
  CHECK_THROWS_AS(ess(make_draws({0, 0}, {0, 0})), AllWeightsZeroError);
}

TEST_CASE("ESS bounds 1 <= ESS <= M on random weights") {
  RngStream rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t m = 1 + rng.uniform_index(50);
    std::vector<double> w(m), p(m, 0.0);
    for (auto& x : w) x = std::exp(3.0 * rng.normal());
    auto ds = make_draws(w, p);
    double e = ess(ds);
    CHECK(e >= 1.0 - 1e-9);
    CHECK(e <= static_cast<double>(m) + 1e-9);
  }
}

TEST_CASE("adjusted ESS") {
  CHECK(adjusted_ess(1000.0, 0.0) == Approx(1000.0));
  CHECK(adjusted_ess(1000.0, 1.0) == Approx(1000.0 * std::exp(1.0)).epsilon(1e-13));
}

TEST_CASE("adjusted ESS law on synthetic z-injected weights") {
  // With z ~ N(-s2/2, s2) multiplied into exact weights, ESS_IS/ESS_IS2
  // should approach exp(s2).
  const double s2 = 0.8;
  const std::size_t m = 20000;
  const int reps = 25;
  RngStream rng(77);
  double ratio_sum = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> w(m), wz(m), p(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      w[i] = std::exp(0.8 * rng.normal());
      double z = -0.5 * s2 + std::sqrt(s2) * rng.normal();
      wz[i] = w[i] * std::exp(z);
    }
    ratio_sum += ess(make_draws(w, p)) / ess(make_draws(wz, p));
  }
  CHECK(ratio_sum / reps == Approx(std::exp(s2)).epsilon(0.05));
}

TEST_CASE("marginal likelihood: constants and hand log-sum-exp") {
  auto ds = make_draws({2.5, 2.5, 2.5}, {0, 0, 0});
  CHECK(marginal_likelihood_estimate(ds).log_value == Approx(std::log(2.5)).epsilon(1e-14));
  CHECK(marginal_likelihood_estimate(ds).mc_se_of_log == Approx(0.0).margin(1e-12));

  // weights {e^0, e^2} -> log((1 + e^2)/2)
  auto ds2 = make_draws({1.0, std::exp(2.0)}, {0, 0});
  CHECK(marginal_likelihood_estimate(ds2).log_value ==
        Approx(std::log((1.0 + std::exp(2.0)) / 2.0)).epsilon(1e-14));
}

TEST_CASE("marginal likelihood delta SE matches the direct formula") {
  RngStream rng(4);
  std::vector<double> w(200), p(200, 0.0);
  for (auto& x : w) x = std::exp(rng.normal());
  auto ds = make_draws(w, p);
  double wbar = 0.0;
  for (double x : w) wbar += x;
  wbar /= w.size();
  double s2 = 0.0;
  for (double x : w) s2 += (x - wbar) * (x - wbar);
  double sd = std::sqrt(s2 / (w.size() - 1.0));
  CHECK(marginal_likelihood_estimate(ds).mc_se_of_log ==
        Approx(sd / (std::sqrt(200.0) * wbar)).epsilon(1e-12));
}

TEST_CASE("trimmed estimate removes the max-weight draw") {
  auto ds = make_draws({10.0, 1.0, 1.0}, {5.0, 0.0, 2.0});
  CHECK(trimmed_estimate(ds, first_coord).value == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("trimmed estimate: ties broken by lowest index") {
  auto ds = make_draws({1.0, 1.0, 1.0, 1.0}, {9.0, 1.0, 2.0, 3.0});
  CHECK(trimmed_estimate(ds, first_coord).value == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("trimmed estimate removes the antithetic partner too") {
  auto ds = make_draws({10.0, 1.0, 1.0, 1.0}, {5.0, 4.0, 1.0, 3.0});
  ds.draws[0].antithetic_partner = 1;
  ds.draws[1].antithetic_partner = 0;
  CHECK(trimmed_estimate(ds, first_coord).value == Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(trimmed_estimate(make_draws({3, 1}, {0, 0}), first_coord), TooFewDrawsError);
  // Removing max + partner from a 3-draw set leaves one draw.
  auto ds3 = make_draws({10.0, 1.0, 1.0}, {0, 0, 0});
  ds3.draws[0].antithetic_partner = 1;
  CHECK_THROWS_AS(trimmed_estimate(ds3, first_coord), TooFewDrawsError);
}

TEST_CASE("trimming reduces MC variance on heavy-tailed weights") {
  // Heavy-tailed synthetic weights correlated with phi: the max weight draw
  // drags the plain estimator around; trimming stabilizes it.
  RngStream rng(2024);
  const int reps = 200;
  const std::size_t m = 300;
  std::vector<double> plain, trimmed;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> w(m), p(m);
    for (std::size_t i = 0; i < m; ++i) {
      double t = rng.normal();
      p[i] = t;
      // lognormal weights with heavy tails, heavier in the right phi tail
      w[i] = std::exp(2.2 * t * t * 0.5 + 0.3 * rng.normal());
    }
    auto ds = make_draws(w, p);
    plain.push_back(self_normalized_estimate(ds, first_coord).value);
    trimmed.push_back(trimmed_estimate(ds, first_coord).value);
  }
  CHECK(sample_variance(trimmed) < sample_variance(plain));
}

TEST_CASE("bootstrap MC SE: constant statistic gives zero") {
  auto ds = make_draws({1.0, 2.0, 0.5, 1.5}, {3.3, 3.3, 3.3, 3.3});
  CHECK(bootstrap_mc_se(ds, first_coord, 200, 11) == Approx(0.0).margin(1e-12));
}

TEST_CASE("bootstrap MC SE is deterministic given the seed") {
  RngStream rng(8);
  std::vector<double> w(50), p(50);
  for (std::size_t i = 0; i < 50; ++i) {
    w[i] = std::exp(rng.normal());
    p[i] = rng.normal();
  }
  auto ds = make_draws(w, p);
  CHECK(bootstrap_mc_se(ds, first_coord, 300, 5) == bootstrap_mc_se(ds, first_coord, 300, 5));
  CHECK(bootstrap_mc_se(ds, first_coord, 300, 5) != bootstrap_mc_se(ds, first_coord, 300, 6));
}

TEST_CASE("bootstrap MC SE approaches 1/sqrt(M) for iid standard normal phi") {
  RngStream rng(17);
  const std::size_t m = 4000;
  std::vector<double> w(m, 1.0), p(m);
  for (auto& x : p) x = rng.normal();
  auto ds = make_draws(w, p);
  double se = bootstrap_mc_se(ds, first_coord, 400, 3);
  CHECK(se == Approx(1.0 / std::sqrt(static_cast<double>(m))).epsilon(0.15));
}

TEST_CASE("shift invariance: adding a constant to all log-weights") {
  RngStream rng(55);
  const std::size_t m = 60;
  DrawSet a, b;
  const double shift = 123.456;
  for (std::size_t i = 0; i < m; ++i) {
    WeightedDraw d;
    d.theta = {rng.normal()};
    d.log_prior = rng.normal();
    d.log_lik_hat = 5.0 * rng.normal();
    d.log_proposal = rng.normal();
    a.draws.push_back(d);
    d.log_lik_hat += shift;
    b.draws.push_back(d);
  }
  auto ea = self_normalized_estimate(a, first_coord);
  auto eb = self_normalized_estimate(b, first_coord);
  CHECK(ea.value == eb.value);
  CHECK(ea.ess == eb.ess);
  CHECK(trimmed_estimate(a, first_coord).value == trimmed_estimate(b, first_coord).value);
  CHECK(marginal_likelihood_estimate(b).log_value - marginal_likelihood_estimate(a).log_value ==
        Approx(shift).epsilon(1e-13));
}

TEST_CASE("exact-likelihood degeneracy: IS2 on exact logliks is standard IS bit for bit") {
  // With log_lik_hat set to the exact log-likelihood the IS2 weights are the
  // standard IS weights; the whole estimator stack must agree bit for bit.
  RngStream rng(14);
  DrawSet is2_set, is_set;
  for (std::size_t i = 0; i < 40; ++i) {
    WeightedDraw d;
    d.theta = {rng.normal()};
    d.log_prior = -0.5 * d.theta[0] * d.theta[0];
    d.log_proposal = -0.3 * d.theta[0] * d.theta[0];
    double exact_loglik = -0.25 * (d.theta[0] - 1.0) * (d.theta[0] - 1.0);
    d.log_lik_hat = exact_loglik;
    is2_set.draws.push_back(d);
    is_set.draws.push_back(d);
  }
  auto r1 = self_normalized_estimate(is2_set, first_coord);
  auto r2 = self_normalized_estimate(is_set, first_coord);
  CHECK(r1.value == r2.value);
  CHECK(r1.asym_var_hat == r2.asym_var_hat);
  CHECK(r1.ess == r2.ess);
}

TEST_CASE("zero-weight draws are retained and affect M") {
  // Eq. 11 multiplies by M, so a retained zero-weight draw changes the
  // asymptotic-variance estimate even though it drops out of the sums.
  auto with_zero = make_draws({3.0, 1.0, 0.0}, {0.0, 4.0, 99.0});
  auto without = make_draws({3.0, 1.0}, {0.0, 4.0});
  CHECK(asymptotic_variance_estimate(with_zero, first_coord) ==
        Approx(1.5 * asymptotic_variance_estimate(without, first_coord)).epsilon(1e-13));
  CHECK(self_normalized_estimate(with_zero, first_coord).value ==
        Approx(self_normalized_estimate(without, first_coord).value).epsilon(1e-14));
}

TEST_CASE("posterior estimate mc_se consistency") {
  RngStream rng(21);
  std::vector<double> w(500), p(500);
  for (std::size_t i = 0; i < 500; ++i) {
    w[i] = std::exp(rng.normal());
    p[i] = rng.normal();
  }
  auto ds = make_draws(w, p);
  auto est = self_normalized_estimate(ds, first_coord);
  CHECK(est.mc_se == Approx(std::sqrt(est.asym_var_hat / 500.0)).epsilon(1e-13));
}
