#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "core/dataset.hpp"
#include "core/rng.hpp"

namespace soundscape {

// Synthetic study layout: which individuals exist, which years they were
// recorded, treatment membership, and per-recording rain flags.
struct SimLayout {
  int n_individuals = 100;
  double treatment_fraction = 0.3;
  int min_years = 1;
  int max_years = 6;
  double rain_prob = 0.3;
  DesignSpec design;
};

// Truth for the univariate generating process; alpha spans the full design
// (length design.n_cols_full()).
struct UniTruth {
  Eigen::VectorXd alpha;
  double sigma2 = 1.0;
  double tau2 = 1.0;
};

// Truth for the multivariate process; alpha is p x K (column per index),
// lambda the K x K random-effect covariance.
struct MultiTruth {
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd lambda;
  double sigma2 = 1.0;
};

// Individuals with keys, years, treatment and rain flags but no responses.
std::vector<IndividualSoundscape> simulate_layout(const SimLayout& layout,
                                                  Rng& rng);

// Overwrite responses in place from the model's data-generating process
// with the given parameter values (beta entries per individual). Draw
// order is fixed: individuals in stacking order, years ascending, index
// fastest for the multivariate case.
void fill_responses_uni(std::vector<IndividualSoundscape>& individuals,
                        const DesignSpec& design, const Eigen::VectorXd& alpha,
                        const Eigen::VectorXd& beta, double sigma2, Rng& rng);
void fill_responses_multi(std::vector<IndividualSoundscape>& individuals,
                          const DesignSpec& design,
                          const Eigen::MatrixXd& alpha,
                          const Eigen::MatrixXd& beta, double sigma2,
                          Rng& rng);

// Full generative draw: layout, beta ~ N(0, tau2) (or N(0, lambda)), then
// responses. Reproducible under seed.
AssembledDataset simulate_uni(const UniTruth& truth, const SimLayout& layout,
                              uint64_t seed);
AssembledDataset simulate_multi(const MultiTruth& truth,
                                const SimLayout& layout, uint64_t seed);

}  // namespace soundscape
