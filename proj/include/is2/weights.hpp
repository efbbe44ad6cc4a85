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

#ifndef IS2_WEIGHTS_HPP
#define IS2_WEIGHTS_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <is2/math.hpp>

#include <json.hpp>

namespace is2 {

/// One parameter draw with everything needed to form its importance weight:
/// the log-prior, the log of the unbiased likelihood estimate, the
/// log-proposal density, and tuning metadata (particle count and the
/// estimated variance of the log-likelihood estimate).
struct WeightedDraw {
  std::vector<double> theta;
  double log_prior = 0.0;
  double log_lik_hat = 0.0;
  double log_proposal = 0.0;
  int n_particles = 1;
  /// Estimated V(log p_hat) for this draw; NaN when no estimate was formed.
  double loglik_var_hat = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::size_t> antithetic_partner;

  /// log w = log_prior + log_lik_hat - log_proposal. A draw outside the prior
  /// support (log_prior = -inf) carries exactly zero weight.
  double log_weight() const {
    if (log_prior == neg_inf) return neg_inf;
    return log_prior + log_lik_hat - log_proposal;
  }
};

struct DrawSet {
  std::vector<WeightedDraw> draws;
  std::uint64_t master_seed = 0;
  std::string model_id;
  std::string proposal_id;

  std::size_t size() const { return draws.size(); }
  std::size_t dim() const { return draws.empty() ? 0 : draws.front().theta.size(); }

  std::vector<double> log_weights() const {
    std::vector<double> lw;
    lw.reserve(draws.size());
    for (const auto& d : draws) lw.push_back(d.log_weight());
    return lw;
  }
};

namespace detail {

inline std::string format_g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& tok) {
  if (tok == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return neg_inf;
  return std::strtod(tok.c_str(), nullptr);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

/// Columnar CSV of the draws plus a JSON header with the seed and ids.
/// Doubles are printed at 17 significant digits so the round trip is
/// bit-lossless.
inline void save_drawset(const DrawSet& ds, const std::string& csv_path,
                         const std::string& json_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path + " for writing");
  const std::size_t d = ds.dim();
  for (std::size_t k = 0; k < d; ++k) csv << "theta_" << k << ",";
  csv << "log_prior,log_lik_hat,log_proposal,n_particles,loglik_var_hat,antithetic_partner\n";
  for (const auto& w : ds.draws) {
    for (std::size_t k = 0; k < d; ++k) csv << detail::format_g17(w.theta[k]) << ",";
    csv << detail::format_g17(w.log_prior) << "," << detail::format_g17(w.log_lik_hat) << ","
        << detail::format_g17(w.log_proposal) << "," << w.n_particles << ","
        << detail::format_g17(w.loglik_var_hat) << ",";
    if (w.antithetic_partner) csv << *w.antithetic_partner;
    csv << "\n";
  }
  nlohmann::json meta{{"master_seed", ds.master_seed},
                      {"model_id", ds.model_id},
                      {"proposal_id", ds.proposal_id},
                      {"num_draws", ds.draws.size()},
                      {"dim", d}};
  std::ofstream js(json_path);
  if (!js) throw std::runtime_error("cannot open " + json_path + " for writing");
  js << meta.dump(2) << "\n";
}

inline DrawSet load_drawset(const std::string& csv_path, const std::string& json_path) {
  std::ifstream js(json_path);
  if (!js) throw std::runtime_error("cannot open " + json_path);
  nlohmann::json meta = nlohmann::json::parse(js);
  DrawSet ds;
  ds.master_seed = meta.at("master_seed").get<std::uint64_t>();
  ds.model_id = meta.at("model_id").get<std::string>();
  ds.proposal_id = meta.at("proposal_id").get<std::string>();
  const auto dim = meta.at("dim").get<std::size_t>();

  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path);
  std::string line;
  if (!std::getline(csv, line)) throw std::runtime_error("empty drawset csv: " + csv_path);
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    auto toks = detail::split_csv_line(line);
    if (toks.size() != dim + 6)
      throw std::runtime_error("malformed drawset row in " + csv_path);
    WeightedDraw w;
    w.theta.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) w.theta[k] = detail::parse_double(toks[k]);
    w.log_prior = detail::parse_double(toks[dim]);
    w.log_lik_hat = detail::parse_double(toks[dim + 1]);
    w.log_proposal = detail::parse_double(toks[dim + 2]);
    w.n_particles = std::atoi(toks[dim + 3].c_str());
    w.loglik_var_hat = detail::parse_double(toks[dim + 4]);
    if (!toks[dim + 5].empty())
      w.antithetic_partner = static_cast<std::size_t>(std::strtoull(toks[dim + 5].c_str(), nullptr, 10));
    ds.draws.push_back(std::move(w));
  }
  return ds;
}

}  // namespace is2

#endif  // IS2_WEIGHTS_HPP
