#include "core/gibbs_uni.hpp"

#include <cmath>
#include <numbers>
#include <thread>

namespace soundscape {

UniData prepare_uni(const AssembledDataset& data, const UniModelSpec& spec) {
  if (data.individuals.empty()) throw ConfigError("empty dataset");
  const int col = data.response_column(spec.response);

  UniData out;
  out.col_names = design_column_names(data.design, spec.toggles);
  const auto n = static_cast<Eigen::Index>(data.individuals.size());
  const auto p = static_cast<Eigen::Index>(out.col_names.size());
  out.xtx = Eigen::MatrixXd::Zero(p, p);
  out.xty = Eigen::VectorXd::Zero(p);
  out.xsum = Eigen::MatrixXd::Zero(p, n);
  out.ysum = Eigen::VectorXd::Zero(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& ind = data.individuals[static_cast<std::size_t>(i)];
    Eigen::MatrixXd x = build_design_uni(ind, data.design, spec.toggles);
    Eigen::VectorXd y(ind.t());
    for (int r = 0; r < ind.t(); ++r) {
      const auto& obs = ind.obs[static_cast<std::size_t>(r)];
      if (obs.y.size() <= col)
        throw MissingResponseError("missing response for " + ind.site_id);
      y[r] = obs.y[col];
    }
    out.xtx.noalias() += x.transpose() * x;
    out.xty.noalias() += x.transpose() * y;
    out.xsum.col(i) = x.colwise().sum().transpose();
    out.ysum[i] = y.sum();
    out.n_obs += ind.t();
    out.x.push_back(std::move(x));
    out.y.push_back(std::move(y));
  }
  return out;
}

UniState initial_state_uni(const UniData& data, const UniModelSpec& spec) {
  UniState state;
  Eigen::MatrixXd ridge = data.xtx;
  ridge.diagonal().array() += 1.0 / spec.priors.alpha_variance;
  state.alpha = ridge.llt().solve(data.xty);
  state.beta = Eigen::VectorXd::Zero(data.n());
  state.sigma2 = 1.0;
  state.tau2 = 1.0;
  return state;
}

void update_alpha(UniState& state, const UniData& data, const UniPriors& priors,
                  Rng& rng) {
  Eigen::MatrixXd precision = data.xtx / state.sigma2;
  precision.diagonal().array() += 1.0 / priors.alpha_variance;
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success)
    throw NumericalError("alpha full-conditional factorization failed");
  const Eigen::VectorXd m =
      (data.xty - data.xsum * state.beta) / state.sigma2;
  state.alpha = rng.mvn_from_precision(llt.solve(m), llt);
}

void update_beta(UniState& state, const UniData& data, Rng& rng) {
  for (int i = 0; i < data.n(); ++i) {
    const double t_i = static_cast<double>(data.y[static_cast<std::size_t>(i)].size());
    const double v = 1.0 / (t_i / state.sigma2 + 1.0 / state.tau2);
    const double resid =
        data.ysum[i] - data.xsum.col(i).dot(state.alpha);
    state.beta[i] = v * resid / state.sigma2 + std::sqrt(v) * rng.normal();
  }
}

void update_sigma2(UniState& state, const UniData& data,
                   const UniPriors& priors, Rng& rng) {
  double rss = 0.0;
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const Eigen::VectorXd r = data.y[i] - data.x[i] * state.alpha -
                              Eigen::VectorXd::Constant(data.y[i].size(),
                                                        state.beta[static_cast<Eigen::Index>(i)]);
    rss += r.squaredNorm();
  }
  state.sigma2 = rng.inverse_gamma(priors.sigma2_shape + data.n_obs / 2.0,
                                   priors.sigma2_scale + rss / 2.0);
}

void update_tau2(UniState& state, const UniData& data, const UniPriors& priors,
                 Rng& rng) {
  state.tau2 = rng.inverse_gamma(priors.tau2_shape + data.n() / 2.0,
                                 priors.tau2_scale + state.beta.squaredNorm() / 2.0);
}

void sweep_uni(UniState& state, const UniData& data, const UniModelSpec& spec,
               const SamplerConfig& cfg, Rng& rng) {
  update_alpha(state, data, spec.priors, rng);
  if (spec.toggles.random_effects) {
    update_beta(state, data, rng);
    update_tau2(state, data, spec.priors, rng);
  }
  if (!cfg.fixed_sigma2) update_sigma2(state, data, spec.priors, rng);
}

Eigen::VectorXd loglik_uni(const UniState& state, const UniData& data) {
  Eigen::VectorXd ll(data.n_obs);
  const double log_norm =
      -0.5 * std::log(2.0 * std::numbers::pi * state.sigma2);
  Eigen::Index pos = 0;
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const Eigen::VectorXd mean =
        data.x[i] * state.alpha +
        Eigen::VectorXd::Constant(data.y[i].size(), state.beta[static_cast<Eigen::Index>(i)]);
    for (Eigen::Index r = 0; r < data.y[i].size(); ++r) {
      const double d = data.y[i][r] - mean[r];
      ll[pos++] = log_norm - d * d / (2.0 * state.sigma2);
    }
  }
  return ll;
}

std::vector<std::string> param_names_uni(const UniData& data,
                                         const UniModelSpec& spec,
                                         const SamplerConfig& cfg) {
  std::vector<std::string> names = data.col_names;
  if (spec.toggles.random_effects) names.emplace_back("tau2");
  names.emplace_back("sigma2");
  if (cfg.store_random_effects && spec.toggles.random_effects)
    for (int i = 0; i < data.n(); ++i)
      names.push_back("beta_" + std::to_string(i + 1));
  return names;
}

namespace {

void run_one_chain_uni(const UniData& data, const UniModelSpec& spec,
                       const SamplerConfig& cfg, int chain_index,
                       Eigen::Ref<Eigen::MatrixXd> draws,
                       Eigen::Ref<Eigen::MatrixXd> loglik) {
  Rng rng = Rng::stream(cfg.seed, static_cast<uint64_t>(chain_index));
  UniState state = initial_state_uni(data, spec);
  if (cfg.fixed_sigma2) state.sigma2 = *cfg.fixed_sigma2;

  const auto p = static_cast<Eigen::Index>(data.col_names.size());
  long row = 0;
  for (long iter = 0; iter < cfg.iterations; ++iter) {
    sweep_uni(state, data, spec, cfg, rng);
    if (iter < cfg.burn_in || (iter - cfg.burn_in) % cfg.thin != 0) continue;

    Eigen::Index c = 0;
    draws.block(row, c, 1, p) = state.alpha.transpose();
    c += p;
    if (spec.toggles.random_effects) draws(row, c++) = state.tau2;
    draws(row, c++) = state.sigma2;
    if (cfg.store_random_effects && spec.toggles.random_effects)
      draws.block(row, c, 1, state.beta.size()) = state.beta.transpose();

    loglik.row(row) = loglik_uni(state, data).transpose();
    if (!loglik.row(row).allFinite())
      throw ChainDivergenceError("non-finite log-likelihood", iter);
    ++row;
  }
}

}  // namespace

PosteriorDraws run_chain_uni(const AssembledDataset& data,
                             const UniModelSpec& spec, const SamplerConfig& cfg,
                             int chain_index) {
  cfg.validate();
  const UniData prepared = prepare_uni(data, spec);
  PosteriorDraws out;
  out.config = cfg;
  out.n_chains = 1;
  out.retained_per_chain = cfg.retained_per_chain();
  out.names = param_names_uni(prepared, spec, cfg);
  out.draws.resize(out.retained_per_chain,
                   static_cast<Eigen::Index>(out.names.size()));
  out.loglik.resize(out.retained_per_chain, prepared.n_obs);
  run_one_chain_uni(prepared, spec, cfg, chain_index, out.draws, out.loglik);
  return out;
}

PosteriorDraws run_chains_uni(const AssembledDataset& data,
                              const UniModelSpec& spec,
                              const SamplerConfig& cfg) {
  cfg.validate();
  const UniData prepared = prepare_uni(data, spec);
  PosteriorDraws out;
  out.config = cfg;
  out.n_chains = cfg.chains;
  out.retained_per_chain = cfg.retained_per_chain();
  out.names = param_names_uni(prepared, spec, cfg);
  const long rows = out.retained_per_chain * cfg.chains;
  out.draws.resize(rows, static_cast<Eigen::Index>(out.names.size()));
  out.loglik.resize(rows, prepared.n_obs);

  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.chains));
  for (int c = 0; c < cfg.chains; ++c) {
    workers.emplace_back([&, c] {
      try {
        run_one_chain_uni(prepared, spec, cfg, c,
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
