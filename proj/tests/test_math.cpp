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

#include <is2/math.hpp>
#include <is2/quadrature.hpp>
#include <is2/rng.hpp>

using namespace is2;
using Catch::Approx;

TEST_CASE("log_sum_exp basics") {
  std::vector<double> xs{0.0, 2.0};
  CHECK(log_sum_exp(xs) == Approx(std::log(1.0 + std::exp(2.0))).epsilon(1e-14));

  std::vector<double> shifted{1000.0, 1002.0};
  CHECK(log_sum_exp(shifted) == Approx(1000.0 + std::log(1.0 + std::exp(2.0))).epsilon(1e-14));

  std::vector<double> with_zero{neg_inf, 0.0};
  CHECK(log_sum_exp(with_zero) == Approx(0.0).margin(1e-15));

  std::vector<double> all_zero{neg_inf, neg_inf};
  CHECK(log_sum_exp(all_zero) == neg_inf);
}

TEST_CASE("log_mean_exp of equal values is the value") {
  std::vector<double> xs(17, -3.25);
  CHECK(log_mean_exp(xs) == Approx(-3.25).epsilon(1e-14));
}

TEST_CASE("log1m_exp against direct evaluation") {
  for (double x : {-1e-8, -0.1, -0.7, -5.0}) {
    CHECK(log1m_exp(x) == Approx(std::log(1.0 - std::exp(x))).epsilon(1e-10));
  }
  // Far tail where the naive formula collapses to log(1) = 0: the accurate
  // value is -exp(x) to first order.
  CHECK(log1m_exp(-40.0) == Approx(-std::exp(-40.0)).epsilon(1e-10));
}

TEST_CASE("sample moments on a known triple") {
  std::vector<double> xs{1.0, 2.0, 3.0};
  auto m = sample_moments(xs);
  CHECK(m.mean == Approx(2.0));
  CHECK(m.variance == Approx(1.0));  // unbiased
  CHECK(m.skewness == Approx(0.0).margin(1e-14));
}

TEST_CASE("weighted moments reduce to unweighted under equal weights") {
  std::vector<double> xs{0.5, -1.0, 2.0, 4.0, -0.25};
  std::vector<double> ws(xs.size(), 0.37);
  auto wm = weighted_moments(xs, ws);
  auto m = sample_moments(xs);
  CHECK(wm.mean == Approx(m.mean).epsilon(1e-13));
  CHECK(wm.skewness == Approx(m.skewness).epsilon(1e-12));
  CHECK(wm.kurtosis == Approx(m.kurtosis).epsilon(1e-12));
}

TEST_CASE("kurtosis >= 1 + skewness^2 for random samples") {
  RngStream rng(99);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> xs(40);
    for (auto& x : xs) x = std::exp(rng.normal());  // skewed
    auto m = sample_moments(xs);
    CHECK(m.kurtosis >= 1.0 + m.skewness * m.skewness - 1e-9);
  }
}

TEST_CASE("weighted quantile: equal weights give order statistics") {
  std::vector<double> xs{5.0, 1.0, 3.0, 2.0, 4.0};
  std::vector<double> ws(5, 1.0);
  // CDF steps at 0.2, 0.4, ...: q(p) is the smallest value with CDF >= p.
  CHECK(weighted_quantile(xs, ws, 0.2) == 1.0);
  CHECK(weighted_quantile(xs, ws, 0.5) == 3.0);
  CHECK(weighted_quantile(xs, ws, 0.05) == 1.0);
  CHECK(weighted_quantile(xs, ws, 0.95) == 5.0);
  CHECK(weighted_quantile(xs, ws, 1.0) == 5.0);
}

TEST_CASE("weighted quantile respects weights") {
  std::vector<double> xs{1.0, 2.0, 3.0};
  std::vector<double> ws{8.0, 1.0, 1.0};
  CHECK(weighted_quantile(xs, ws, 0.5) == 1.0);
  CHECK(weighted_quantile(xs, ws, 0.85) == 2.0);
  CHECK(weighted_quantile(xs, ws, 0.95) == 3.0);
}

TEST_CASE("golden section finds the minimum of a shifted parabola") {
  auto f = [](double x) { return (x - 1.7) * (x - 1.7) + 3.0; };
  double x = golden_section_min(f, -10.0, 10.0, 1e-12);
  CHECK(x == Approx(1.7).margin(1e-9));
}

TEST_CASE("gauss_hermite integrates polynomials exactly") {
  auto rule = gauss_hermite(20);
  double s0 = 0.0, s2 = 0.0, s4 = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    double t = rule.nodes[k], w = rule.weights[k];
    s0 += w;
    s2 += w * t * t;
    s4 += w * t * t * t * t;
  }
  // integrals of t^{2m} e^{-t^2}: sqrt(pi), sqrt(pi)/2, 3 sqrt(pi)/4
  CHECK(s0 == Approx(std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(s2 == Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(s4 == Approx(0.75 * std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("gh_log_gaussian_integral: Gaussian times Gaussian closed form") {
  // integral N(x; m, s^2) N(y - x; 0, r) dx = N(y; m, s^2 + r)
  const double m = 0.4, s = 1.3, y = -0.8, r = 0.5;
  auto rule = gauss_hermite(40);
  double lv = gh_log_gaussian_integral(
      [&](double x) { return log_normal_pdf(y, x, r); }, m, s, rule);
  CHECK(lv == Approx(log_normal_pdf(y, m, s * s + r)).epsilon(1e-10));
}
