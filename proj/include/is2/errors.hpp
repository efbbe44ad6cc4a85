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

#ifndef IS2_ERRORS_HPP
#define IS2_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace is2 {

/// Every importance weight in the set underflowed to zero. This signals a
/// severe mismatch between the proposal and the posterior rather than a
/// recoverable numerical hiccup.
class AllWeightsZeroError : public std::runtime_error {
 public:
  AllWeightsZeroError() : std::runtime_error("all importance weights are zero") {}
};

class TooFewDrawsError : public std::runtime_error {
 public:
  explicit TooFewDrawsError(const std::string& what) : std::runtime_error(what) {}
};

/// A latent-variable importance weight evaluated to NaN or +inf. A weight of
/// exactly zero (log-weight -inf) is legitimate; anything else non-finite is
/// a proposal/support bug and is never silently dropped.
class NonFiniteWeightError : public std::runtime_error {
 public:
  explicit NonFiniteWeightError(std::size_t particle_index)
      : std::runtime_error("non-finite importance weight at particle " +
                           std::to_string(particle_index)),
        particle_index_(particle_index) {}
  std::size_t particle_index() const { return particle_index_; }

 private:
  std::size_t particle_index_;
};

/// All particle observation densities underflowed at one filtering period.
class ParticleCollapseError : public std::runtime_error {
 public:
  explicit ParticleCollapseError(std::size_t period)
      : std::runtime_error("particle filter collapsed at period " + std::to_string(period)),
        period_(period) {}
  std::size_t period() const { return period_; }

 private:
  std::size_t period_;
};

class OddCountError : public std::runtime_error {
 public:
  OddCountError() : std::runtime_error("antithetic sampling requires an even draw count") {}
};

class TooFewParticlesError : public std::runtime_error {
 public:
  explicit TooFewParticlesError(const std::string& what) : std::runtime_error(what) {}
};

class TooFewPilotsError : public std::runtime_error {
 public:
  explicit TooFewPilotsError(const std::string& what) : std::runtime_error(what) {}
};

class NotConvergedError : public std::runtime_error {
 public:
  explicit NotConvergedError(const std::string& what) : std::runtime_error(what) {}
};

/// No usable starting point was found for an MCMC chain.
class InitFailureError : public std::runtime_error {
 public:
  explicit InitFailureError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace is2

#endif  // IS2_ERRORS_HPP
