#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/mcmc.hpp"
#include "core/rng.hpp"

namespace soundscape {

struct UniPriors {
  double alpha_variance = 10000.0;  // N(0, v I) on the coefficients
  double sigma2_shape = 2.0, sigma2_scale = 1.0;
  double tau2_shape = 2.0, tau2_scale = 1.0;
};

struct UniModelSpec {
  std::string response = "NDSI";  // dataset response column to model
  ModelToggles toggles;
  UniPriors priors;
};

// Per-individual pieces plus the sufficient statistics that stay constant
// across sweeps.
struct UniData {
  std::vector<Eigen::MatrixXd> x;  // t_i x p, active columns only
  std::vector<Eigen::VectorXd> y;  // t_i
  Eigen::MatrixXd xtx;             // sum_i X_i' X_i
  Eigen::VectorXd xty;             // sum_i X_i' y_i
  Eigen::MatrixXd xsum;            // p x n, column i = X_i' 1
  Eigen::VectorXd ysum;            // n, entry i = 1' y_i
  long n_obs = 0;                  // sum_i t_i
  std::vector<std::string> col_names;

  int n() const { return static_cast<int>(x.size()); }
  int p() const { return static_cast<int>(xtx.rows()); }
};

UniData prepare_uni(const AssembledDataset& data, const UniModelSpec& spec);

struct UniState {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;  // zeros when random effects are off
  double sigma2 = 1.0;
  double tau2 = 1.0;
};

// alpha from a ridge-stabilized least-squares solve, beta = 0,
// sigma2 = tau2 = 1. Deterministic.
UniState initial_state_uni(const UniData& data, const UniModelSpec& spec);

// Conjugate full-conditional draws. Derivations (likelihood times prior,
// complete the square):
//   alpha | .  ~ N(V m, V),  V = (sum X'X / s2 + I/v)^{-1},
//                            m = sum X'(y - 1 b) / s2
//   beta_i | . ~ N(v_i m_i, v_i),  v_i = (t_i/s2 + 1/t2)^{-1},
//                                  m_i = 1'(y_i - X_i a) / s2
//   s2 | .     ~ InvGamma(shape + N/2, scale + rss/2)
//   t2 | .     ~ InvGamma(shape + n/2, scale + sum b_i^2 / 2)
void update_alpha(UniState& state, const UniData& data, const UniPriors& priors,
                  Rng& rng);
void update_beta(UniState& state, const UniData& data, Rng& rng);
void update_sigma2(UniState& state, const UniData& data,
                   const UniPriors& priors, Rng& rng);
void update_tau2(UniState& state, const UniData& data, const UniPriors& priors,
                 Rng& rng);

// One systematic scan honoring the toggles and any fixed sigma2.
void sweep_uni(UniState& state, const UniData& data, const UniModelSpec& spec,
               const SamplerConfig& cfg, Rng& rng);

// Log density of every recording given the state, stacking order.
Eigen::VectorXd loglik_uni(const UniState& state, const UniData& data);

// Draw-matrix layout for this spec: active alpha columns, then tau2 (when
// random effects are on), then sigma2, then optionally per-individual betas.
std::vector<std::string> param_names_uni(const UniData& data,
                                         const UniModelSpec& spec,
                                         const SamplerConfig& cfg);

PosteriorDraws run_chain_uni(const AssembledDataset& data,
                             const UniModelSpec& spec, const SamplerConfig& cfg,
                             int chain_index);
// All configured chains (threaded), draws stacked chain-major.
PosteriorDraws run_chains_uni(const AssembledDataset& data,
                              const UniModelSpec& spec,
                              const SamplerConfig& cfg);

}  // namespace soundscape
