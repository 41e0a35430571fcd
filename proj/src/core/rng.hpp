#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "core/errors.hpp"

namespace soundscape {

// Seeded random stream. Chains get independent streams derived from
// (seed, stream index); identical seeds reproduce draws bit-for-bit on a
// given platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  static Rng stream(uint64_t seed, uint64_t index) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32)};
    Rng r(0);
    r.gen_.seed(seq);
    return r;
  }

  double uniform() { return std::uniform_real_distribution<>(0.0, 1.0)(gen_); }
  double normal() { return std::normal_distribution<>(0.0, 1.0)(gen_); }

  // Shape/scale parameterization: density x^{a-1} e^{-x/theta}.
  double gamma(double shape, double scale) {
    return std::gamma_distribution<>(shape, scale)(gen_);
  }

  double chi_squared(double df) { return gamma(df / 2.0, 2.0); }

  // Shape/scale with density x^{-shape-1} e^{-scale/x}: the reciprocal of a
  // Gamma(shape, rate = scale) draw. Stated explicitly because inverse-gamma
  // conventions vary.
  double inverse_gamma(double shape, double scale) {
    return 1.0 / gamma(shape, 1.0 / scale);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [lo, hi].
  long uniform_int(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(gen_);
  }

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = normal();
    return z;
  }

  // N(mu, covariance) given the Cholesky factor L of the covariance.
  Eigen::VectorXd mvn_from_cov_chol(const Eigen::VectorXd& mu,
                                    const Eigen::MatrixXd& cov_l) {
    return mu + cov_l * normal_vector(mu.size());
  }

  // N(mu, P^{-1}) given the LLT of the precision P: mu + L^{-T} z.
  Eigen::VectorXd mvn_from_precision(const Eigen::VectorXd& mu,
                                     const Eigen::LLT<Eigen::MatrixXd>& llt) {
    Eigen::VectorXd z = normal_vector(mu.size());
    return mu + llt.matrixU().solve(z);
  }

  // Wishart(scale, df) via Bartlett decomposition; density
  // |X|^{(df-p-1)/2} exp(-tr(scale^{-1} X)/2), E[X] = df * scale.
  Eigen::MatrixXd wishart(double df, const Eigen::MatrixXd& scale) {
    const Eigen::Index p = scale.rows();
    if (df < static_cast<double>(p))
      throw ConfigError("Wishart df below dimension");
    Eigen::LLT<Eigen::MatrixXd> llt(scale);
    if (llt.info() != Eigen::Success)
      throw CovarianceError("Wishart scale not positive definite");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
      a(i, i) = std::sqrt(chi_squared(df - static_cast<double>(i)));
      for (Eigen::Index j = 0; j < i; ++j) a(i, j) = normal();
    }
    Eigen::MatrixXd la = llt.matrixL() * a;
    return la * la.transpose();
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace soundscape
