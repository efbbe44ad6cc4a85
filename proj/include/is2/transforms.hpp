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

#ifndef IS2_TRANSFORMS_HPP
#define IS2_TRANSFORMS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <is2/math.hpp>

namespace is2 {

/// Per-coordinate map from an unconstrained proposal scale to the natural
/// parameter scale. Bounded parameters are proposed on transformed scales so
/// the proposal keeps full support; the log-Jacobian folds into the prior.
struct Transform {
  enum class Kind { Identity, Log, Logit } kind = Kind::Identity;
  double lo = 0.0;  // Logit bounds
  double hi = 1.0;

  static Transform identity() { return {Kind::Identity, 0.0, 0.0}; }
  static Transform log_scale() { return {Kind::Log, 0.0, 0.0}; }
  static Transform logit(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("Transform::logit: hi must exceed lo");
    return {Kind::Logit, lo, hi};
  }

  double to_natural(double u) const {
    switch (kind) {
      case Kind::Identity: return u;
      case Kind::Log: return std::exp(u);
      case Kind::Logit: return lo + (hi - lo) * logistic(u);
    }
    return u;
  }

  double from_natural(double x) const {
    switch (kind) {
      case Kind::Identity: return x;
      case Kind::Log: return std::log(x);
      case Kind::Logit: {
        double p = (x - lo) / (hi - lo);
        return std::log(p) - std::log1p(-p);
      }
    }
    return x;
  }

  /// log |d natural / d u|.
  double log_jacobian(double u) const {
    switch (kind) {
      case Kind::Identity: return 0.0;
      case Kind::Log: return u;
      case Kind::Logit: return std::log(hi - lo) - softplus(u) - softplus(-u);
    }
    return 0.0;
  }
};

inline std::vector<double> to_natural(const std::vector<Transform>& ts,
                                      const std::vector<double>& u) {
  if (ts.size() != u.size()) throw std::invalid_argument("to_natural: dimension mismatch");
  std::vector<double> x(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) x[k] = ts[k].to_natural(u[k]);
  return x;
}

inline std::vector<double> from_natural(const std::vector<Transform>& ts,
                                        const std::vector<double>& x) {
  if (ts.size() != x.size()) throw std::invalid_argument("from_natural: dimension mismatch");
  std::vector<double> u(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) u[k] = ts[k].from_natural(x[k]);
  return u;
}

inline double log_jacobian(const std::vector<Transform>& ts, const std::vector<double>& u) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += ts[k].log_jacobian(u[k]);
  return s;
}

}  // namespace is2

#endif  // IS2_TRANSFORMS_HPP
