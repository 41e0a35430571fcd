#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace soundscape {

struct SamplerConfig {
  long iterations = 25000;
  long burn_in = 5000;
  long thin = 1;
  int chains = 3;
  uint64_t seed = 0;
  bool store_random_effects = false;
  // Testing hook: freeze the process variance instead of sampling it.
  std::optional<double> fixed_sigma2 = std::nullopt;

  long retained_per_chain() const { return (iterations - burn_in) / thin; }

  void validate() const {
    if (iterations < 1) throw ConfigError("iterations must be >= 1");
    if (burn_in < 0 || burn_in >= iterations)
      throw ConfigError("burn_in must be in [0, iterations)");
    if (thin < 1) throw ConfigError("thin must be >= 1");
    if (chains < 1) throw ConfigError("chains must be >= 1");
    if (retained_per_chain() < 1) throw ConfigError("no retained draws");
    if (fixed_sigma2 && *fixed_sigma2 <= 0.0)
      throw ConfigError("fixed_sigma2 must be positive");
  }
};

// Retained draws from one or more chains, stacked chain-major, plus the
// per-draw per-observation log densities that WAIC consumes.
struct PosteriorDraws {
  std::vector<std::string> names;  // draw matrix columns
  Eigen::MatrixXd draws;           // (chains * retained) x names.size()
  Eigen::MatrixXd loglik;          // (chains * retained) x n_obs
  int n_chains = 1;
  long retained_per_chain = 0;
  SamplerConfig config;

  long n_retained() const { return draws.rows(); }

  auto chain(int c) const {
    return draws.middleRows(static_cast<Eigen::Index>(c) * retained_per_chain,
                            retained_per_chain);
  }

  Eigen::Index column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<Eigen::Index>(i);
    throw ConfigError("no parameter named '" + name + "'");
  }
};

}  // namespace soundscape
