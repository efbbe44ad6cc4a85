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

#ifndef IS2_RNG_HPP
#define IS2_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace is2 {

namespace detail {

inline std::uint64_t splitmix64_hash(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline double horner8(const double (&c)[8], double r) {
  double v = c[7];
  for (int i = 6; i >= 0; --i) v = v * r + c[i];
  return v;
}

/// Wichura's AS 241 (PPND16) inverse standard-normal CDF. Absolute error is
/// around 1e-16 over (0,1), which keeps inverse-CDF sampling exact for
/// practical purposes and makes antithetic pairing a pure sign flip.
inline double normal_quantile(double p) {
  static constexpr double a[8] = {3.3871328727963666080e0,  1.3314166789178437745e2,
                                  1.9715909503065514427e3,  1.3731693765509461125e4,
                                  4.5921953931549871457e4,  6.7265770927008700853e4,
                                  3.3430575583588128105e4,  2.5090809287301226727e3};
  static constexpr double b[8] = {1.0,                      4.2313330701600911252e1,
                                  6.8718700749205790830e2,  5.3941960214247511077e3,
                                  2.1213794301586595867e4,  3.9307895800092710610e4,
                                  2.8729085735721942674e4,  5.2264952788528545610e3};
  static constexpr double c[8] = {1.42343711074968357734e0,  4.63033784615654529590e0,
                                  5.76949722146069140550e0,  3.64784832476320460504e0,
                                  1.27045825245236838258e0,  2.41780725177450611770e-1,
                                  2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[8] = {1.0,                       2.05319162663775882187e0,
                                  1.67638483018380384940e0,  6.89767334985100004550e-1,
                                  1.48103976427480074590e-1, 1.51986665636164571966e-2,
                                  5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static constexpr double e[8] = {6.65790464350110377720e0,  5.46378491116411436990e0,
                                  1.78482653991729133580e0,  2.96560571828504891230e-1,
                                  2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                  2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[8] = {1.0,                       5.99832206555887937690e-1,
                                  1.36929880922735805310e-1, 1.48753612908506148525e-2,
                                  7.86869131145613259100e-4, 1.84631831751005468180e-5,
                                  1.42151175831644588870e-7, 2.04426310338993978564e-15};
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    double r = 0.180625 - q * q;
    return q * horner8(a, r) / horner8(b, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  if (!(r > 0.0)) throw std::invalid_argument("normal_quantile: p outside (0,1)");
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = horner8(c, r) / horner8(d, r);
  } else {
    r -= 5.0;
    val = horner8(e, r) / horner8(f, r);
  }
  return q < 0.0 ? -val : val;
}

}  // namespace detail

/// A self-contained random stream. Streams are cheap to derive from a
/// (master seed, index, purpose) triple, which is how all parallel draw
/// evaluation stays bit-identical regardless of scheduling: every unit of
/// work owns a stream keyed only by its logical position.
///
/// All variate generation is built on mt19937_64 plus fully specified
/// arithmetic (no std::*_distribution), so sequences are identical across
/// standard-library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(detail::splitmix64_hash(seed)) {}

  static RngStream derive(std::uint64_t master, std::uint64_t index, std::uint64_t purpose = 0) {
    std::uint64_t h = detail::splitmix64_hash(master);
    h = detail::splitmix64_hash(h ^ (index + 0x9E3779B97F4A7C15ull));
    h = detail::splitmix64_hash(h ^ (purpose + 0xD1B54A32D192ED03ull));
    return RngStream(h);
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the inverse CDF (one uniform per variate).
  double normal() { return detail::normal_quantile(uniform()); }

  /// Integer uniform on [0, n).
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  /// Gamma(shape, scale 1) via Marsaglia-Tsang squeeze.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
    if (shape < 1.0) {
      double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double chi_squared(double df) { return 2.0 * gamma(0.5 * df); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace is2

#endif  // IS2_RNG_HPP
