#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/indices.hpp"
#include "core/mcmc.hpp"

namespace soundscape {

// File-level operations behind the CLI subcommands and the C API. Every
// run writes a manifest (config echo, seed, input hashes, timings) next to
// its outputs so results can be reproduced exactly.

struct IndicesRunStats {
  long n_ok = 0;
  long n_failed = 0;
};

// Compute the index table for every recording in the metadata file.
// wav paths resolve against audio_root when relative. Failures (decode,
// silent, boundary) are logged with their reason and skipped; output rows
// keep metadata order regardless of worker scheduling.
IndicesRunStats run_indices_batch(const std::string& metadata_csv,
                                  const std::string& audio_root,
                                  const std::string& out_csv,
                                  const std::string& log_path,
                                  const IndexParams& params, int workers);

struct AssembleStats {
  long n_individuals = 0;
  long n_recordings = 0;
  long n_excluded = 0;
};

AssembleStats run_assemble(const std::string& metadata_csv,
                           const std::string& indices_csv,
                           const std::string& out_json,
                           const AssembleOptions& options,
                           const std::string& log_path);

struct FitOptions {
  std::string model = "uni";      // "uni" or "multi"
  std::string variant = "full";   // candidate-model name
  std::string response = "NDSI";  // univariate response column
  SamplerConfig sampler;
};

// The five candidate models by name.
ModelToggles toggles_for_variant(const std::string& variant);
std::string variant_name(const ModelToggles& toggles);

struct FitStats {
  double waic = 0;
  long n_obs = 0;
  std::vector<std::string> outputs;
};

// Runs the configured chains, then writes per-chain draw files,
// report.json, summary.csv, diagnostics.csv, manifest.json and, for the
// multivariate model, effect tables and the correlation report.
FitStats run_fit(const std::string& dataset_json, const FitOptions& options,
                 const std::string& out_dir);

// WAIC table across saved reports; all must share the dataset hash.
// Returns the label of the preferred (lowest WAIC) model.
std::string run_compare(const std::vector<std::string>& report_paths,
                        const std::string& out_csv);

// Synthetic dataset from a truth + layout config (JSON), written in the
// dataset schema. A seed override of nullopt uses the config's seed.
void run_simulate(const std::string& config_json, const std::string& out_json,
                  std::optional<uint64_t> seed_override);

// Post-hoc summaries and diagnostics from saved draw files (one per chain).
void run_report(const std::vector<std::string>& draw_files,
                const std::string& out_dir);

// Per-site-per-year recording counts against an expected table.
CountReport run_validate_counts(const std::string& dataset_json,
                                const std::string& expected_csv,
                                const std::string& out_csv);

}  // namespace soundscape
