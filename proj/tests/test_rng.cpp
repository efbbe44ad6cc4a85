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
#include <is2/rng.hpp>

using namespace is2;
using Catch::Approx;

TEST_CASE("normal_quantile hits reference values") {
  CHECK(detail::normal_quantile(0.5) == Approx(0.0).margin(1e-15));
  CHECK(detail::normal_quantile(0.975) == Approx(1.959963984540054).epsilon(1e-12));
  CHECK(detail::normal_quantile(0.025) == Approx(-1.959963984540054).epsilon(1e-12));
  CHECK(detail::normal_quantile(0.999) == Approx(3.090232306167813).epsilon(1e-12));
  CHECK(detail::normal_quantile(1e-10) == Approx(-6.361340902404056).epsilon(1e-9));
}

TEST_CASE("streams are deterministic and purpose-separated") {
  auto a = RngStream::derive(42, 7, 1);
  auto b = RngStream::derive(42, 7, 1);
  auto c = RngStream::derive(42, 7, 2);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 64; ++i) {
    double ua = a.uniform(), ub = b.uniform(), uc = c.uniform();
    all_equal = all_equal && (ua == ub);
    any_diff = any_diff || (ua != uc);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("normal draws have standard moments") {
  RngStream rng(123);
  const int n = 200000;
  std::vector<double> zs(n);
  for (auto& z : zs) z = rng.normal();
  auto m = sample_moments(zs);
  CHECK(m.mean == Approx(0.0).margin(0.01));
  CHECK(m.variance == Approx(1.0).epsilon(0.01));
  CHECK(m.skewness == Approx(0.0).margin(0.03));
  CHECK(m.kurtosis == Approx(3.0).margin(0.06));
}

TEST_CASE("gamma sampler matches mean and variance") {
  RngStream rng(5);
  for (double shape : {0.7, 2.5, 8.0}) {
    const int n = 100000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.gamma(shape);
    auto m = sample_moments(xs);
    CHECK(m.mean == Approx(shape).epsilon(0.02));
    CHECK(m.variance == Approx(shape).epsilon(0.05));
  }
}

TEST_CASE("uniform_index covers the range") {
  RngStream rng(9);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) counts[rng.uniform_index(5)] += 1;
  for (int c : counts) CHECK(c > 9000);
}
