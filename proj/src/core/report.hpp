#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/mcmc.hpp"
#include "core/posterior.hpp"

namespace soundscape {

// Everything the paper-style tables need: medians and intervals for every
// parameter, WAIC, convergence diagnostics, and (for the multivariate
// model) the random-effect correlation report.
struct ModelReport {
  std::string model;     // "uni" or "multi"
  std::string variant;   // full / no-inherent / no-rain / no-random / basic
  std::string response;  // modeled response (univariate)
  uint64_t data_hash = 0;
  long n_obs = 0;
  long n_individuals = 0;
  std::vector<SummaryRow> summary;
  WaicResult waic;
  std::vector<DiagnosticRow> diag;
  std::optional<CorrelationReport> correlations;
};

void save_report_json(const ModelReport& report, const std::string& path);
ModelReport load_report_json(const std::string& path);

// Table layouts as delimited text: the full parameter summary, the
// per-index effect extractions (rain, inherent differences), the long-form
// correlation table, and per-parameter diagnostics.
void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path);
void write_effect_csv(const ModelReport& report, const std::string& column,
                      const std::string& path);
void write_correlations_csv(const CorrelationReport& rep,
                            const std::string& path);
void write_diagnostics_csv(const std::vector<DiagnosticRow>& rows,
                           const std::string& path);

// One file per chain, one row per retained draw, labeled columns,
// shortest-round-trip doubles (byte-stable under a fixed seed).
void write_draws_csv(const PosteriorDraws& draws, int chain,
                     const std::string& path);
// Merge chain files back into a draws object (equal headers and lengths).
PosteriorDraws load_draws_csv(const std::vector<std::string>& paths);

struct ComparisonRow {
  std::string label;
  WaicResult waic;
  bool preferred = false;
};

// Ascending WAIC; the lowest is flagged. Refuses reports whose data hashes
// differ (comparison across datasets is meaningless).
std::vector<ComparisonRow> compare_reports(
    const std::vector<ModelReport>& reports);
void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          const std::string& path);

}  // namespace soundscape
