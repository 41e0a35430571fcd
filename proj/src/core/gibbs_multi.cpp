#include "core/gibbs_multi.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <thread>

namespace soundscape {

MultiData prepare_multi(const AssembledDataset& data,
                        const MultiModelSpec& spec) {
  if (data.individuals.empty()) throw ConfigError("empty dataset");
  MultiData out;
  out.k = data.response_dim();
  out.response_names = data.response_names;
  out.col_names = design_column_names(data.design, spec.toggles);
  const auto n = static_cast<Eigen::Index>(data.individuals.size());
  const auto p = static_cast<Eigen::Index>(out.col_names.size());
  out.xtx = Eigen::MatrixXd::Zero(p, p);
  out.xty = Eigen::MatrixXd::Zero(p, out.k);
  out.xsum = Eigen::MatrixXd::Zero(p, n);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& ind = data.individuals[static_cast<std::size_t>(i)];
    Eigen::MatrixXd x = build_design_uni(ind, data.design, spec.toggles);
    Eigen::MatrixXd y(ind.t(), out.k);
    for (int r = 0; r < ind.t(); ++r) {
      const auto& obs = ind.obs[static_cast<std::size_t>(r)];
      if (obs.y.size() != out.k)
        throw MissingResponseError("incomplete response vector for " +
                                   ind.site_id);
      y.row(r) = obs.y.transpose();
    }
    out.xtx.noalias() += x.transpose() * x;
    out.xty.noalias() += x.transpose() * y;
    out.xsum.col(i) = x.colwise().sum().transpose();
    out.n_obs += ind.t();
    out.x.push_back(std::move(x));
    out.y.push_back(std::move(y));
  }
  return out;
}

namespace {

double wishart_df_of(const MultiPriors& priors, int k) {
  return priors.wishart_df > 0.0 ? priors.wishart_df
                                 : static_cast<double>(k);
}

}  // namespace

MultiState initial_state_multi(const MultiData& data,
                               const MultiModelSpec& spec) {
  MultiState state;
  Eigen::MatrixXd ridge = data.xtx;
  ridge.diagonal().array() += 1.0 / spec.priors.alpha_variance;
  state.alpha = ridge.llt().solve(data.xty);
  state.beta = Eigen::MatrixXd::Zero(data.n(), data.k);
  state.sigma2 = 1.0;
  state.lambda = Eigen::MatrixXd::Identity(data.k, data.k);
  return state;
}

void update_alpha2(MultiState& state, const MultiData& data,
                   const MultiPriors& priors, Rng& rng) {
  Eigen::MatrixXd precision = data.xtx / state.sigma2;
  precision.diagonal().array() += 1.0 / priors.alpha_variance;
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success)
    throw NumericalError("alpha full-conditional factorization failed");
  // One factorization serves all K index blocks; only the mean differs.
  const Eigen::MatrixXd m =
      (data.xty - data.xsum * state.beta) / state.sigma2;
  for (int j = 0; j < data.k; ++j)
    state.alpha.col(j) = rng.mvn_from_precision(llt.solve(m.col(j)), llt);
}

void update_beta2(MultiState& state, const MultiData& data, Rng& rng) {
  Eigen::LLT<Eigen::MatrixXd> lambda_llt(state.lambda);
  if (lambda_llt.info() != Eigen::Success)
    throw CovarianceError("lambda lost positive definiteness");
  const Eigen::MatrixXd lambda_inv =
      lambda_llt.solve(Eigen::MatrixXd::Identity(data.k, data.k));

  // W_i' W_i = t_i I, so individuals sharing t_i share the posterior
  // covariance factorization.
  std::map<Eigen::Index, Eigen::LLT<Eigen::MatrixXd>> by_t;
  for (int i = 0; i < data.n(); ++i) {
    const Eigen::Index t_i = data.y[static_cast<std::size_t>(i)].rows();
    auto it = by_t.find(t_i);
    if (it == by_t.end()) {
      Eigen::MatrixXd precision = lambda_inv;
      precision.diagonal().array() += static_cast<double>(t_i) / state.sigma2;
      it = by_t.emplace(t_i, Eigen::LLT<Eigen::MatrixXd>(precision)).first;
      if (it->second.info() != Eigen::Success)
        throw NumericalError("beta full-conditional factorization failed");
    }
    const Eigen::VectorXd s =
        (data.y[static_cast<std::size_t>(i)] -
         data.x[static_cast<std::size_t>(i)] * state.alpha)
            .colwise()
            .sum()
            .transpose();
    state.beta.row(i) =
        rng.mvn_from_precision(it->second.solve(s / state.sigma2), it->second)
            .transpose();
  }
}

void update_lambda(MultiState& state, const MultiData& data,
                   const MultiPriors& priors, Rng& rng) {
  const double r = wishart_df_of(priors, data.k);
  Eigen::MatrixXd s = r * priors.wishart_r_diag *
                      Eigen::MatrixXd::Identity(data.k, data.k);
  s.noalias() += state.beta.transpose() * state.beta;
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success)
    throw NumericalError("Wishart scale factorization failed");
  const Eigen::MatrixXd s_inv =
      llt.solve(Eigen::MatrixXd::Identity(data.k, data.k));
  const Eigen::MatrixXd lambda_inv = rng.wishart(r + data.n(), s_inv);
  Eigen::LLT<Eigen::MatrixXd> inv_llt(lambda_inv);
  if (inv_llt.info() != Eigen::Success)
    throw NumericalError("lambda inversion failed");
  Eigen::MatrixXd lambda =
      inv_llt.solve(Eigen::MatrixXd::Identity(data.k, data.k));
  // Symmetrize to suppress round-off drift.
  state.lambda = 0.5 * (lambda + lambda.transpose());
}

void update_sigma2_multi(MultiState& state, const MultiData& data,
                         const MultiPriors& priors, Rng& rng) {
  double rss = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    const auto& y = data.y[static_cast<std::size_t>(i)];
    Eigen::MatrixXd resid = y - data.x[static_cast<std::size_t>(i)] * state.alpha;
    resid.rowwise() -= state.beta.row(i);
    rss += resid.squaredNorm();
  }
  const double total = static_cast<double>(data.n_obs) * data.k;
  state.sigma2 = rng.inverse_gamma(priors.sigma2_shape + total / 2.0,
                                   priors.sigma2_scale + rss / 2.0);
}

void sweep_multi(MultiState& state, const MultiData& data,
                 const MultiModelSpec& spec, const SamplerConfig& cfg,
                 Rng& rng) {
  update_alpha2(state, data, spec.priors, rng);
  if (spec.toggles.random_effects) {
    update_beta2(state, data, rng);
    update_lambda(state, data, spec.priors, rng);
  }
  if (!cfg.fixed_sigma2) update_sigma2_multi(state, data, spec.priors, rng);
}

Eigen::VectorXd loglik_multi(const MultiState& state, const MultiData& data) {
  Eigen::VectorXd ll(data.n_obs);
  const double log_norm =
      -0.5 * data.k * std::log(2.0 * std::numbers::pi * state.sigma2);
  Eigen::Index pos = 0;
  for (int i = 0; i < data.n(); ++i) {
    const auto& y = data.y[static_cast<std::size_t>(i)];
    Eigen::MatrixXd resid = y - data.x[static_cast<std::size_t>(i)] * state.alpha;
    resid.rowwise() -= state.beta.row(i);
    for (Eigen::Index r = 0; r < resid.rows(); ++r)
      ll[pos++] =
          log_norm - resid.row(r).squaredNorm() / (2.0 * state.sigma2);
  }
  return ll;
}

std::vector<std::string> param_names_multi(const MultiData& data,
                                           const MultiModelSpec& spec,
                                           const SamplerConfig& cfg) {
  std::vector<std::string> names;
  for (int j = 0; j < data.k; ++j)
    for (const auto& col : data.col_names)
      names.push_back(data.response_names[static_cast<std::size_t>(j)] + ":" +
                      col);
  names.emplace_back("sigma2");
  if (spec.toggles.random_effects)
    for (int i = 0; i < data.k; ++i)
      for (int j = 0; j <= i; ++j)
        names.push_back("lambda_" + std::to_string(i + 1) + "_" +
                        std::to_string(j + 1));
  if (cfg.store_random_effects && spec.toggles.random_effects)
    for (int i = 0; i < data.n(); ++i)
      for (int j = 0; j < data.k; ++j)
        names.push_back("beta_" + std::to_string(i + 1) + "_" +
                        data.response_names[static_cast<std::size_t>(j)]);
  return names;
}

namespace {

void run_one_chain_multi(const MultiData& data, const MultiModelSpec& spec,
                         const SamplerConfig& cfg, int chain_index,
                         Eigen::Ref<Eigen::MatrixXd> draws,
                         Eigen::Ref<Eigen::MatrixXd> loglik) {
  Rng rng = Rng::stream(cfg.seed, static_cast<uint64_t>(chain_index));
  MultiState state = initial_state_multi(data, spec);
  if (cfg.fixed_sigma2) state.sigma2 = *cfg.fixed_sigma2;

  const auto p = static_cast<Eigen::Index>(data.col_names.size());
  long row = 0;
  for (long iter = 0; iter < cfg.iterations; ++iter) {
    sweep_multi(state, data, spec, cfg, rng);
    if (iter < cfg.burn_in || (iter - cfg.burn_in) % cfg.thin != 0) continue;

    Eigen::Index c = 0;
    for (int j = 0; j < data.k; ++j, c += p)
      draws.block(row, c, 1, p) = state.alpha.col(j).transpose();
    draws(row, c++) = state.sigma2;
    if (spec.toggles.random_effects)
      for (int i = 0; i < data.k; ++i)
        for (int j = 0; j <= i; ++j) draws(row, c++) = state.lambda(i, j);
    if (cfg.store_random_effects && spec.toggles.random_effects)
      for (int i = 0; i < data.n(); ++i)
        for (int j = 0; j < data.k; ++j) draws(row, c++) = state.beta(i, j);

    loglik.row(row) = loglik_multi(state, data).transpose();
    if (!loglik.row(row).allFinite())
      throw ChainDivergenceError("non-finite log-likelihood", iter);
    ++row;
  }
}

}  // namespace

PosteriorDraws run_chain_multi(const AssembledDataset& data,
                               const MultiModelSpec& spec,
                               const SamplerConfig& cfg, int chain_index) {
  cfg.validate();
  const MultiData prepared = prepare_multi(data, spec);
  PosteriorDraws out;
  out.config = cfg;
  out.n_chains = 1;
  out.retained_per_chain = cfg.retained_per_chain();
  out.names = param_names_multi(prepared, spec, cfg);
  out.draws.resize(out.retained_per_chain,
                   static_cast<Eigen::Index>(out.names.size()));
  out.loglik.resize(out.retained_per_chain, prepared.n_obs);
  run_one_chain_multi(prepared, spec, cfg, chain_index, out.draws, out.loglik);
  return out;
}

PosteriorDraws run_chains_multi(const AssembledDataset& data,
                                const MultiModelSpec& spec,
                                const SamplerConfig& cfg) {
  cfg.validate();
  const MultiData prepared = prepare_multi(data, spec);
  PosteriorDraws out;
  out.config = cfg;
  out.n_chains = cfg.chains;
  out.retained_per_chain = cfg.retained_per_chain();
  out.names = param_names_multi(prepared, spec, cfg);
  const long rows = out.retained_per_chain * cfg.chains;
  out.draws.resize(rows, static_cast<Eigen::Index>(out.names.size()));
  out.loglik.resize(rows, prepared.n_obs);

  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.chains));
  for (int c = 0; c < cfg.chains; ++c) {
    workers.emplace_back([&, c] {
      try {
        run_one_chain_multi(prepared, spec, cfg, c,
                            out.draws.middleRows(c * out.retained_per_chain,
                                                 out.retained_per_chain),
                            out.loglik.middleRows(c * out.retained_per_chain,
                                                  out.retained_per_chain));
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace soundscape
