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

#ifndef IS2_QUADRATURE_HPP
#define IS2_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <is2/math.hpp>

namespace is2 {

struct GaussHermiteRule {
  std::vector<double> nodes;    // roots of the physicists' Hermite polynomial
  std::vector<double> weights;  // sum = sqrt(pi)
};

/// Gauss-Hermite nodes and weights (weight function e^{-t^2}) by Golub-Welsch
/// on the Jacobi matrix: off-diagonals sqrt(k/2), weights from the first
/// eigenvector components scaled by mu0 = sqrt(pi).
inline GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = std::sqrt(0.5 * k);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_hermite: eigensolve failed");
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mu0 = std::sqrt(M_PI);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    double v = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v * v;
  }
  return rule;
}

/// log of integral f(x) N(x; mean, sd^2) dx given log f, by Gauss-Hermite.
template <class LogF>
double gh_log_gaussian_integral(LogF&& log_f, double mean, double sd, const GaussHermiteRule& rule) {
  const double root2 = std::sqrt(2.0);
  const double log_sqrt_pi = 0.5 * std::log(M_PI);
  std::vector<double> terms(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    double x = mean + root2 * sd * rule.nodes[k];
    terms[k] = std::log(rule.weights[k]) - log_sqrt_pi + log_f(x);
  }
  return log_sum_exp(terms);
}

}  // namespace is2

#endif  // IS2_QUADRATURE_HPP
