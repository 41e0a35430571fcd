#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/mcmc.hpp"

namespace soundscape {

// Type-7 empirical quantile (linear interpolation of order statistics);
// fixed so credible intervals are bit-reproducible.
double quantile_type7(std::vector<double> values, double p);

struct SummaryRow {
  std::string name;
  double median = 0, ci_low = 0, ci_high = 0;
  bool significant = false;  // the 95% interval excludes zero
};

// Median and central 95% interval per parameter, draw-matrix column order.
// Requires at least 100 retained draws.
std::vector<SummaryRow> summarize(const PosteriorDraws& draws);

struct WaicResult {
  double lppd = 0;
  double p_waic = 0;  // effective parameter count
  double waic = 0;    // -2 (lppd - p_waic); lower is better
};

// Computed from the draws x observations log-density matrix with
// log-sum-exp stabilization; p_waic is the posterior variance of the log
// density per observation.
WaicResult waic(const Eigen::MatrixXd& loglik);

struct CorrelationReport {
  std::vector<std::string> names;  // K index names
  Eigen::MatrixXd median, ci_low, ci_high;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> significant;
};

// Per-draw conversion of the random-effect covariance to a correlation
// matrix, then per-pair medians and 95% intervals. lambda_lower holds the
// lower triangle row by row (the draw-file layout).
CorrelationReport correlations(const Eigen::MatrixXd& lambda_lower,
                               const std::vector<std::string>& names);

struct DiagnosticRow {
  std::string name;
  double rhat = 0;       // split potential scale reduction
  double ess = 0;        // combined effective sample size
  double geweke_z = 0;   // first-10% vs last-50% mean comparison
  bool degenerate = false;  // zero-variance draws
};

// Split R-hat, effective sample size and a Geweke-style z score per
// parameter. Needs at least two chains of equal retained length for R-hat
// (single chains are split in two).
std::vector<DiagnosticRow> diagnostics(const PosteriorDraws& draws);

}  // namespace soundscape
