#include "core/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "core/errors.hpp"
#include "core/indices.hpp"

namespace soundscape {

std::vector<IndividualSoundscape> simulate_layout(const SimLayout& layout,
                                                  Rng& rng) {
  if (layout.n_individuals < 1) throw ConfigError("n_individuals must be >= 1");
  if (layout.min_years < 1 || layout.max_years < layout.min_years)
    throw ConfigError("bad min/max years");
  const int span = layout.design.year_max - layout.design.year_min + 1;
  if (layout.max_years > span)
    throw ConfigError("max_years exceeds the study span");

  std::vector<int> span_years(static_cast<std::size_t>(span));
  for (int i = 0; i < span; ++i) span_years[static_cast<std::size_t>(i)] = layout.design.year_min + i;

  std::vector<IndividualSoundscape> out;
  out.reserve(static_cast<std::size_t>(layout.n_individuals));
  for (int i = 0; i < layout.n_individuals; ++i) {
    IndividualSoundscape ind;
    ind.treatment = rng.bernoulli(layout.treatment_fraction);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%04d", ind.treatment ? "T" : "C", i);
    ind.site_id = buf;
    ind.month = 6;
    ind.day = i % 30 + 1;
    ind.minutes = 330 + 30 * ((i / 30) % 5);  // 05:30 .. 07:30

    const long t_i = rng.uniform_int(layout.min_years, layout.max_years);
    // Partial Fisher-Yates: first t_i entries are a uniform subset.
    std::vector<int> years = span_years;
    for (long j = 0; j < t_i; ++j) {
      const long pick = rng.uniform_int(j, span - 1);
      std::swap(years[static_cast<std::size_t>(j)], years[static_cast<std::size_t>(pick)]);
    }
    years.resize(static_cast<std::size_t>(t_i));
    std::sort(years.begin(), years.end());
    for (int y : years) {
      YearObservation obs;
      obs.year = y;
      obs.rain = rng.bernoulli(layout.rain_prob);
      ind.obs.push_back(obs);
    }
    out.push_back(std::move(ind));
  }
  return out;
}

void fill_responses_uni(std::vector<IndividualSoundscape>& individuals,
                        const DesignSpec& design, const Eigen::VectorXd& alpha,
                        const Eigen::VectorXd& beta, double sigma2, Rng& rng) {
  if (alpha.size() != design.n_cols_full())
    throw ConfigError("alpha length does not match the full design");
  if (beta.size() != static_cast<Eigen::Index>(individuals.size()))
    throw ConfigError("beta length does not match individual count");
  const double sd = std::sqrt(sigma2);
  const ModelToggles full;
  for (std::size_t i = 0; i < individuals.size(); ++i) {
    auto& ind = individuals[i];
    const Eigen::MatrixXd x = build_design_uni(ind, design, full);
    const Eigen::VectorXd mean = x * alpha;
    for (int r = 0; r < ind.t(); ++r) {
      auto& obs = ind.obs[static_cast<std::size_t>(r)];
      obs.y.resize(1);
      obs.y[0] = mean[r] + beta[static_cast<Eigen::Index>(i)] + sd * rng.normal();
    }
  }
}

void fill_responses_multi(std::vector<IndividualSoundscape>& individuals,
                          const DesignSpec& design,
                          const Eigen::MatrixXd& alpha,
                          const Eigen::MatrixXd& beta, double sigma2,
                          Rng& rng) {
  if (alpha.rows() != design.n_cols_full())
    throw ConfigError("alpha rows do not match the full design");
  const Eigen::Index k = alpha.cols();
  if (beta.rows() != static_cast<Eigen::Index>(individuals.size()) ||
      beta.cols() != k)
    throw ConfigError("beta shape does not match (n, K)");
  const double sd = std::sqrt(sigma2);
  const ModelToggles full;
  for (std::size_t i = 0; i < individuals.size(); ++i) {
    auto& ind = individuals[i];
    const Eigen::MatrixXd x = build_design_uni(ind, design, full);
    const Eigen::MatrixXd mean = x * alpha;  // t x K
    for (int r = 0; r < ind.t(); ++r) {
      auto& obs = ind.obs[static_cast<std::size_t>(r)];
      obs.y.resize(k);
      for (Eigen::Index j = 0; j < k; ++j)
        obs.y[j] = mean(r, j) + beta(static_cast<Eigen::Index>(i), j) +
                   sd * rng.normal();
    }
  }
}

AssembledDataset simulate_uni(const UniTruth& truth, const SimLayout& layout,
                              uint64_t seed) {
  if (truth.sigma2 <= 0.0 || truth.tau2 < 0.0)
    throw ConfigError("variances must be positive");
  Rng rng(seed);
  AssembledDataset data;
  data.design = layout.design;
  data.response_names = {"NDSI"};
  data.individuals = simulate_layout(layout, rng);

  const auto n = static_cast<Eigen::Index>(data.individuals.size());
  const double tau = std::sqrt(truth.tau2);
  Eigen::VectorXd beta(n);
  for (Eigen::Index i = 0; i < n; ++i) beta[i] = tau * rng.normal();
  fill_responses_uni(data.individuals, data.design, truth.alpha, beta,
                     truth.sigma2, rng);
  return data;
}

AssembledDataset simulate_multi(const MultiTruth& truth,
                                const SimLayout& layout, uint64_t seed) {
  if (truth.sigma2 <= 0.0) throw ConfigError("sigma2 must be positive");
  const Eigen::Index k = truth.lambda.rows();
  if (truth.lambda.cols() != k || truth.alpha.cols() != k)
    throw ConfigError("lambda/alpha dimensions disagree");
  Eigen::LLT<Eigen::MatrixXd> llt(truth.lambda);
  if (llt.info() != Eigen::Success)
    throw CovarianceError("lambda is not positive definite");

  Rng rng(seed);
  AssembledDataset data;
  data.design = layout.design;
  if (k == kNumIndices) {
    data.response_names = index_names();
  } else {
    for (Eigen::Index j = 0; j < k; ++j)
      data.response_names.push_back("y" + std::to_string(j + 1));
  }
  data.individuals = simulate_layout(layout, rng);

  const auto n = static_cast<Eigen::Index>(data.individuals.size());
  Eigen::MatrixXd beta(n, k);
  const Eigen::MatrixXd l = llt.matrixL();
  for (Eigen::Index i = 0; i < n; ++i)
    beta.row(i) = (l * rng.normal_vector(k)).transpose();
  fill_responses_multi(data.individuals, data.design, truth.alpha, beta,
                       truth.sigma2, rng);
  return data;
}

}  // namespace soundscape
