#include "core/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace soundscape {

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw InsufficientDrawsError("no values for quantile");
  if (p < 0.0 || p > 1.0) throw ConfigError("quantile p outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::vector<SummaryRow> summarize(const PosteriorDraws& draws) {
  if (draws.n_retained() < 100)
    throw InsufficientDrawsError("need at least 100 retained draws, have " +
                                 std::to_string(draws.n_retained()));
  std::vector<SummaryRow> rows;
  rows.reserve(draws.names.size());
  for (std::size_t j = 0; j < draws.names.size(); ++j) {
    const auto col = draws.draws.col(static_cast<Eigen::Index>(j));
    std::vector<double> v(col.data(), col.data() + col.size());
    SummaryRow row;
    row.name = draws.names[j];
    row.median = quantile_type7(v, 0.5);
    row.ci_low = quantile_type7(v, 0.025);
    row.ci_high = quantile_type7(std::move(v), 0.975);
    row.significant = row.ci_low > 0.0 || row.ci_high < 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

WaicResult waic(const Eigen::MatrixXd& loglik) {
  const Eigen::Index s = loglik.rows(), n = loglik.cols();
  if (s < 2) throw InsufficientDrawsError("WAIC needs at least 2 draws");
  if (!loglik.allFinite())
    throw NumericalError("non-finite log-likelihood entries");

  WaicResult out;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto col = loglik.col(i);
    const double m = col.maxCoeff();
    // log mean exp with the max factored out
    const double lse = m + std::log((col.array() - m).exp().sum() /
                                    static_cast<double>(s));
    const double mean = col.mean();
    const double var =
        (col.array() - mean).square().sum() / static_cast<double>(s - 1);
    out.lppd += lse;
    out.p_waic += var;
  }
  out.waic = -2.0 * (out.lppd - out.p_waic);
  if (!std::isfinite(out.waic))
    throw NumericalError("WAIC is not finite");
  return out;
}

CorrelationReport correlations(const Eigen::MatrixXd& lambda_lower,
                               const std::vector<std::string>& names) {
  const auto k = static_cast<Eigen::Index>(names.size());
  if (lambda_lower.cols() != k * (k + 1) / 2)
    throw ConfigError("lambda draw width does not match K(K+1)/2");
  const Eigen::Index s = lambda_lower.rows();
  if (s < 1) throw InsufficientDrawsError("no lambda draws");

  // Per-pair correlation paths across draws.
  std::vector<std::vector<double>> paths(
      static_cast<std::size_t>(k * (k + 1) / 2));
  for (auto& p : paths) p.resize(static_cast<std::size_t>(s));

  for (Eigen::Index d = 0; d < s; ++d) {
    Eigen::VectorXd diag(k);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j <= i; ++j, ++c)
        if (i == j) diag[i] = lambda_lower(d, c);
    c = 0;
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j <= i; ++j, ++c) {
        const double denom = std::sqrt(diag[i] * diag[j]);
        if (!(denom > 0.0))
          throw NumericalError("non-positive variance in lambda draw");
        paths[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)] =
            lambda_lower(d, c) / denom;
      }
  }

  CorrelationReport rep;
  rep.names = names;
  rep.median = Eigen::MatrixXd::Identity(k, k);
  rep.ci_low = Eigen::MatrixXd::Identity(k, k);
  rep.ci_high = Eigen::MatrixXd::Identity(k, k);
  rep.significant.setConstant(k, k, true);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j <= i; ++j, ++c) {
      if (i == j) continue;  // exactly one by construction
      auto& path = paths[static_cast<std::size_t>(c)];
      const double med = quantile_type7(path, 0.5);
      const double lo = quantile_type7(path, 0.025);
      const double hi = quantile_type7(path, 0.975);
      rep.median(i, j) = rep.median(j, i) = med;
      rep.ci_low(i, j) = rep.ci_low(j, i) = lo;
      rep.ci_high(i, j) = rep.ci_high(j, i) = hi;
      rep.significant(i, j) = rep.significant(j, i) = lo > 0.0 || hi < 0.0;
    }
  return rep;
}

namespace {

struct SplitChains {
  // Each column is one split half-chain.
  Eigen::MatrixXd values;  // length x m
};

SplitChains split_chains(const PosteriorDraws& draws, Eigen::Index param) {
  const long len = draws.retained_per_chain;
  const long half = len / 2;
  const int m = draws.n_chains * 2;
  SplitChains out;
  out.values.resize(half, m);
  for (int c = 0; c < draws.n_chains; ++c) {
    const auto chain = draws.chain(c).col(param);
    out.values.col(2 * c) = chain.head(half);
    out.values.col(2 * c + 1) = chain.tail(half);
  }
  return out;
}

// Mean autocovariance across chains at the given lag (biased, divisor n).
double mean_autocovariance(const Eigen::MatrixXd& chains, Eigen::Index lag) {
  const Eigen::Index n = chains.rows();
  double total = 0.0;
  for (Eigen::Index c = 0; c < chains.cols(); ++c) {
    const auto col = chains.col(c);
    const double mean = col.mean();
    double acc = 0.0;
    for (Eigen::Index t = 0; t + lag < n; ++t)
      acc += (col[t] - mean) * (col[t + lag] - mean);
    total += acc / static_cast<double>(n);
  }
  return total / static_cast<double>(chains.cols());
}

// Geweke-style z on one chain: batch-means standard errors for the first
// 10% against the last 50%.
double geweke_z(const Eigen::VectorXd& chain) {
  const Eigen::Index n = chain.size();
  const Eigen::Index n_a = std::max<Eigen::Index>(n / 10, 2);
  const Eigen::Index n_b = std::max<Eigen::Index>(n / 2, 2);
  const auto a = chain.head(n_a);
  const auto b = chain.tail(n_b);
  auto batch_se2 = [](const auto& seg) {
    const Eigen::Index batches =
        std::clamp<Eigen::Index>(seg.size() / 10, 2, 20);
    const Eigen::Index per = seg.size() / batches;
    Eigen::VectorXd means(batches);
    for (Eigen::Index i = 0; i < batches; ++i)
      means[i] = seg.segment(i * per, per).mean();
    const double grand = means.mean();
    const double var = (means.array() - grand).square().sum() /
                       static_cast<double>(batches - 1);
    return var / static_cast<double>(batches);
  };
  const double se2 = batch_se2(a) + batch_se2(b);
  if (se2 <= 0.0) return 0.0;
  return (a.mean() - b.mean()) / std::sqrt(se2);
}

}  // namespace

std::vector<DiagnosticRow> diagnostics(const PosteriorDraws& draws) {
  if (draws.retained_per_chain < 4)
    throw InsufficientDrawsError("diagnostics need at least 4 draws per chain");
  std::vector<DiagnosticRow> rows;
  rows.reserve(draws.names.size());

  for (std::size_t jj = 0; jj < draws.names.size(); ++jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    DiagnosticRow row;
    row.name = draws.names[jj];

    const SplitChains sc = split_chains(draws, j);
    const Eigen::Index n = sc.values.rows();
    const Eigen::Index m = sc.values.cols();

    Eigen::VectorXd means(m), vars(m);
    for (Eigen::Index c = 0; c < m; ++c) {
      means[c] = sc.values.col(c).mean();
      vars[c] = (sc.values.col(c).array() - means[c]).square().sum() /
                static_cast<double>(n - 1);
    }
    const double w = vars.mean();
    const double grand = means.mean();
    const double b = static_cast<double>(n) *
                     (means.array() - grand).square().sum() /
                     static_cast<double>(m - 1);

    if (w == 0.0 && b == 0.0) {
      row.degenerate = true;
      row.rhat = 1.0;
      row.ess = 0.0;
      rows.push_back(row);
      continue;
    }
    const double v_hat =
        (static_cast<double>(n - 1) / n) * w + b / static_cast<double>(n);
    row.rhat = w > 0.0 ? std::sqrt(v_hat / w)
                       : std::numeric_limits<double>::infinity();

    if (w > 0.0 && v_hat > 0.0) {
      // Initial-positive-sequence truncation of the lag sum.
      double rho_sum = 0.0;
      const Eigen::Index max_lag = std::min<Eigen::Index>(n - 1, 1000);
      double prev_pair = std::numeric_limits<double>::infinity();
      for (Eigen::Index lag = 1; lag + 1 <= max_lag; lag += 2) {
        const double rho_a =
            1.0 - (w - mean_autocovariance(sc.values, lag)) / v_hat;
        const double rho_b =
            1.0 - (w - mean_autocovariance(sc.values, lag + 1)) / v_hat;
        double pair = rho_a + rho_b;
        if (pair < 0.0) break;
        pair = std::min(pair, prev_pair);  // enforce monotone decrease
        prev_pair = pair;
        rho_sum += pair;
      }
      row.ess = static_cast<double>(m) * static_cast<double>(n) /
                (1.0 + 2.0 * rho_sum);
      row.ess = std::min(row.ess,
                         static_cast<double>(m) * static_cast<double>(n));
    }

    double worst = 0.0;
    for (int c = 0; c < draws.n_chains; ++c) {
      const Eigen::VectorXd chain = draws.chain(c).col(j);
      const double z = geweke_z(chain);
      if (std::fabs(z) > std::fabs(worst)) worst = z;
    }
    row.geweke_z = worst;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace soundscape
