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

#ifndef IS2_PROPOSALS_HPP
#define IS2_PROPOSALS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <is2/errors.hpp>
#include <is2/estimators.hpp>
#include <is2/math.hpp>
#include <is2/rng.hpp>
#include <is2/weights.hpp>

#include <json.hpp>

namespace is2 {

/// The parameter importance density g_IS(theta): sampleable and
/// log-evaluable. Gaussian, multivariate Student-t, or a finite mixture of
/// those. The scale matrix is stored through its lower-triangular factor L
/// (scale = L L^T); a zero factor is the point-mass limit and degenerates to
/// the location.
class ParameterProposal {
 public:
  enum class Kind { Gaussian, StudentT, Mixture };

  static ParameterProposal gaussian(std::vector<double> location, Eigen::MatrixXd scale_chol) {
    return ParameterProposal(Kind::Gaussian, std::move(location), std::move(scale_chol), 0.0);
  }

  static ParameterProposal student_t(std::vector<double> location, Eigen::MatrixXd scale_chol,
                                     double df) {
    if (!(df > 2.0)) throw std::invalid_argument("student_t proposal: df must exceed 2");
    return ParameterProposal(Kind::StudentT, std::move(location), std::move(scale_chol), df);
  }

  static ParameterProposal mixture(std::vector<ParameterProposal> components,
                                   std::vector<double> weights) {
    if (components.empty() || components.size() != weights.size())
      throw std::invalid_argument("mixture proposal: component/weight mismatch");
    double s = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("mixture proposal: negative weight");
      s += w;
    }
    if (!(s > 0.0)) throw std::invalid_argument("mixture proposal: weights sum to zero");
    for (auto& w : weights) w /= s;
    ParameterProposal p;
    p.kind_ = Kind::Mixture;
    p.dim_ = components.front().dim();
    for (const auto& c : components)
      if (c.dim() != p.dim_) throw std::invalid_argument("mixture proposal: dimension mismatch");
    p.components_ = std::move(components);
    p.weights_ = std::move(weights);
    return p;
  }

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  double df() const { return df_; }
  const std::vector<double>& location() const { return location_; }
  const Eigen::MatrixXd& scale_chol() const { return chol_; }
  const std::vector<ParameterProposal>& components() const { return components_; }
  const std::vector<double>& mixture_weights() const { return weights_; }

  std::vector<double> sample_one(RngStream& rng) const {
    switch (kind_) {
      case Kind::Gaussian:
        return affine_draw(rng, 1.0);
      case Kind::StudentT: {
        double chi2 = rng.chi_squared(df_);
        return affine_draw(rng, std::sqrt(df_ / chi2));
      }
      case Kind::Mixture: {
        double u = rng.uniform();
        double acc = 0.0;
        for (std::size_t k = 0; k < components_.size(); ++k) {
          acc += weights_[k];
          if (u <= acc || k + 1 == components_.size()) return components_[k].sample_one(rng);
        }
        return components_.back().sample_one(rng);
      }
    }
    throw std::logic_error("unreachable");
  }

  std::vector<std::vector<double>> sample(std::size_t m, RngStream& rng) const {
    std::vector<std::vector<double>> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.push_back(sample_one(rng));
    return out;
  }

  double log_density(const std::vector<double>& theta) const {
    if (theta.size() != dim_) throw std::invalid_argument("log_density: dimension mismatch");
    switch (kind_) {
      case Kind::Gaussian: {
        if (degenerate_) return point_mass_log_density(theta);
        double quad = squared_mahalanobis(theta);
        constexpr double log_2pi = 1.8378770664093454836;
        return -0.5 * (static_cast<double>(dim_) * log_2pi + quad) - log_det_chol_;
      }
      case Kind::StudentT: {
        if (degenerate_) return point_mass_log_density(theta);
        double quad = squared_mahalanobis(theta);
        double d = static_cast<double>(dim_);
        return std::lgamma(0.5 * (df_ + d)) - std::lgamma(0.5 * df_) -
               0.5 * d * std::log(df_ * M_PI) - log_det_chol_ -
               0.5 * (df_ + d) * std::log1p(quad / df_);
      }
      case Kind::Mixture: {
        std::vector<double> terms;
        terms.reserve(components_.size());
        for (std::size_t k = 0; k < components_.size(); ++k) {
          terms.push_back(weights_[k] > 0.0
                              ? std::log(weights_[k]) + components_[k].log_density(theta)
                              : neg_inf);
        }
        return log_sum_exp(terms);
      }
    }
    throw std::logic_error("unreachable");
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    switch (kind_) {
      case Kind::Gaussian:
      case Kind::StudentT: {
        j["kind"] = kind_ == Kind::Gaussian ? "gaussian" : "student_t";
        j["location"] = location_;
        std::vector<std::vector<double>> rows;
        for (std::size_t r = 0; r < dim_; ++r) {
          std::vector<double> row;
          for (std::size_t c = 0; c <= r; ++c) row.push_back(chol_(r, c));
          rows.push_back(std::move(row));
        }
        j["scale_chol"] = rows;
        if (kind_ == Kind::StudentT) j["df"] = df_;
        break;
      }
      case Kind::Mixture: {
        j["kind"] = "mixture";
        j["weights"] = weights_;
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : components_) comps.push_back(c.to_json());
        j["components"] = comps;
        break;
      }
    }
    return j;
  }

  static ParameterProposal from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "mixture") {
      std::vector<ParameterProposal> comps;
      for (const auto& c : j.at("components")) comps.push_back(from_json(c));
      return mixture(std::move(comps), j.at("weights").get<std::vector<double>>());
    }
    auto loc = j.at("location").get<std::vector<double>>();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(loc.size(), loc.size());
    if (j.contains("scale_chol")) {
      auto rows = j.at("scale_chol").get<std::vector<std::vector<double>>>();
      if (rows.size() != loc.size())
        throw std::invalid_argument("proposal json: scale_chol row count mismatch");
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size() && c <= r; ++c) L(r, c) = rows[r][c];
    } else if (j.contains("scale_diag")) {
      auto d = j.at("scale_diag").get<std::vector<double>>();
      if (d.size() != loc.size())
        throw std::invalid_argument("proposal json: scale_diag length mismatch");
      for (std::size_t r = 0; r < d.size(); ++r) L(r, r) = d[r];
    } else {
      throw std::invalid_argument("proposal json: missing scale_chol or scale_diag");
    }
    if (kind == "gaussian") return gaussian(std::move(loc), std::move(L));
    if (kind == "student_t") return student_t(std::move(loc), std::move(L), j.at("df").get<double>());
    throw std::invalid_argument("proposal json: unknown kind '" + kind + "'");
  }

 private:
  ParameterProposal() = default;
  ParameterProposal(Kind kind, std::vector<double> location, Eigen::MatrixXd chol, double df)
      : kind_(kind), location_(std::move(location)), chol_(std::move(chol)), df_(df) {
    dim_ = location_.size();
    if (chol_.rows() != static_cast<Eigen::Index>(dim_) ||
        chol_.cols() != static_cast<Eigen::Index>(dim_))
      throw std::invalid_argument("proposal: scale factor shape mismatch");
    log_det_chol_ = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      double l = chol_(k, k);
      if (l < 0.0) throw std::invalid_argument("proposal: negative Cholesky diagonal");
      if (l == 0.0) degenerate_ = true;
      else log_det_chol_ += std::log(l);
    }
  }

  std::vector<double> affine_draw(RngStream& rng, double radial) const {
    Eigen::VectorXd z(dim_);
    for (std::size_t k = 0; k < dim_; ++k) z(k) = rng.normal();
    Eigen::VectorXd x = chol_.template triangularView<Eigen::Lower>() * z * radial;
    std::vector<double> out(dim_);
    for (std::size_t k = 0; k < dim_; ++k) out[k] = location_[k] + x(k);
    return out;
  }

  double squared_mahalanobis(const std::vector<double>& theta) const {
    Eigen::VectorXd d(dim_);
    for (std::size_t k = 0; k < dim_; ++k) d(k) = theta[k] - location_[k];
    Eigen::VectorXd s = chol_.template triangularView<Eigen::Lower>().solve(d);
    return s.squaredNorm();
  }

  // Zero-scale limit: all mass at the location.
  double point_mass_log_density(const std::vector<double>& theta) const {
    for (std::size_t k = 0; k < dim_; ++k)
      if (theta[k] != location_[k]) return neg_inf;
    return 0.0;
  }

  Kind kind_ = Kind::Gaussian;
  std::size_t dim_ = 0;
  std::vector<double> location_;
  Eigen::MatrixXd chol_;
  double df_ = 0.0;
  double log_det_chol_ = 0.0;
  bool degenerate_ = false;
  std::vector<ParameterProposal> components_;
  std::vector<double> weights_;
};

/// Importance-weighted moment-matched Student-t refit: location at the
/// weighted mean, scale from the weighted covariance inflated by 1.2. If the
/// inflated covariance is not positive definite the scale falls back to its
/// diagonal (floored away from zero).
inline ParameterProposal fit_from_weighted_draws(const DrawSet& draws, double df) {
  if (!(df > 2.0)) throw std::invalid_argument("fit_from_weighted_draws: df must exceed 2");
  const std::size_t d = draws.dim();
  if (d == 0) throw std::invalid_argument("fit_from_weighted_draws: empty draw set");
  if (ess(draws) < static_cast<double>(d) + 2.0)
    throw std::invalid_argument("fit_from_weighted_draws: ESS below d + 2");

  auto s = detail::shift_weights(draws.log_weights());
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) mu(k) += s.w[i] * draws.draws[i].theta[k];
  }
  mu /= s.sum;

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd diff(d);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    if (s.w[i] == 0.0) continue;
    for (std::size_t k = 0; k < d; ++k) diff(k) = draws.draws[i].theta[k] - mu(k);
    cov.noalias() += s.w[i] * diff * diff.transpose();
  }
  cov /= s.sum;
  cov *= 1.2;

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  Eigen::MatrixXd L;
  if (llt.info() == Eigen::Success) {
    L = llt.matrixL();
  } else {
    // DegenerateCovariance fallback: keep the diagonal only.
    L = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t k = 0; k < d; ++k) L(k, k) = std::sqrt(std::max(cov(k, k), 1e-8));
  }
  std::vector<double> loc(d);
  for (std::size_t k = 0; k < d; ++k) loc[k] = mu(k);
  return ParameterProposal::student_t(std::move(loc), std::move(L), df);
}

}  // namespace is2

#endif  // IS2_PROPOSALS_HPP
