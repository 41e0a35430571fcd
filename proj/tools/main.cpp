// Command-line front end over the soundscape C API.
//
// Subcommands: indices, assemble, fit, compare, simulate, report.
// Exit codes: 0 success, 1 input error, 2 empty result, 3 numerical or
// chain failure.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "soundscape/soundscape.h"

namespace {

int exit_code_for(int status) {
  switch (status) {
    case SS_OK:
      return 0;
    case SS_E_EMPTY:
      return 2;
    case SS_E_NUMERIC:
    case SS_E_DIVERGENCE:
    case SS_E_COVARIANCE:
      return 3;
    default:
      return 1;
  }
}

int finish(int status) {
  if (status != SS_OK)
    std::fprintf(stderr, "error (%s): %s\n", ss_status_name(status),
                 ss_last_error());
  return exit_code_for(status);
}

// Default log location under the cache dir when --log is not given; the
// cache dir env var is the only environment input this tool reads.
std::string default_log(const std::string& name) {
  const char* cache = std::getenv("SOUNDSCAPE_CACHE_DIR");
  if (cache == nullptr || cache[0] == '\0') return {};
  return std::string(cache) + "/" + name;
}

bool parse_hhmm(const std::string& text, int& minutes) {
  int hh = 0, mm = 0;
  if (std::sscanf(text.c_str(), "%2d:%2d", &hh, &mm) != 2) return false;
  if (hh < 0 || hh > 23 || mm < 0 || mm > 59) return false;
  minutes = hh * 60 + mm;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soundscape: acoustic indices and hierarchical Bayesian "
               "soundscape disturbance models"};
  app.set_config("--config", "", "flat key=value config file; command-line "
                                 "options override config values");
  app.require_subcommand(1);
  app.set_version_flag("--version", ss_version());

  // ---- indices ----------------------------------------------------
  auto* c_idx = app.add_subcommand(
      "indices", "compute the 14 acoustic indices for every recording");
  std::string idx_meta, idx_root, idx_out, idx_log;
  int idx_workers = 0;
  ss_index_params iparams;
  ss_index_params_init(&iparams);
  c_idx->add_option("--metadata", idx_meta, "metadata CSV")->required();
  c_idx->add_option("--audio-root", idx_root,
                    "directory relative wav paths resolve against");
  c_idx->add_option("--out", idx_out, "output index table CSV")->required();
  c_idx->add_option("--log", idx_log, "failure log path");
  c_idx->add_option("--workers", idx_workers,
                    "parallel workers (default: one per core)");
  c_idx->add_option("--welch-segment", iparams.welch_segment_length,
                    "Welch segment length in samples (0 = one second)");
  c_idx->add_option("--welch-overlap", iparams.welch_overlap,
                    "Welch segment overlap fraction");
  c_idx->add_option("--stft-window", iparams.stft_window_length,
                    "spectrogram window length in samples");
  c_idx->add_option("--stft-overlap", iparams.stft_overlap,
                    "spectrogram window overlap fraction");
  c_idx->add_option("--aei-threshold-db", iparams.aei_threshold_db,
                    "AEI occupancy threshold, dB re full scale");
  c_idx->add_option("--aei-max-freq", iparams.aei_max_freq_hz,
                    "AEI band ceiling in Hz");

  // ---- assemble ----------------------------------------------------
  auto* c_asm = app.add_subcommand(
      "assemble", "group recordings into individual soundscapes");
  std::string asm_meta, asm_idx, asm_out, asm_log, asm_window;
  std::string asm_expected, asm_counts_out;
  ss_assemble_options aopts;
  ss_assemble_options_init(&aopts);
  c_asm->add_option("--metadata", asm_meta, "metadata CSV")->required();
  c_asm->add_option("--indices", asm_idx, "index table CSV")->required();
  c_asm->add_option("--out", asm_out, "output dataset JSON")->required();
  c_asm->add_option("--log", asm_log, "exclusion log path");
  c_asm->add_option("--year-min", aopts.year_min, "first study year");
  c_asm->add_option("--year-max", aopts.year_max, "last study year");
  c_asm->add_option("--first-effect-year", aopts.first_effect_year,
                    "first post-treatment year");
  c_asm->add_option("--month", aopts.month, "keep only this month (1-12)");
  c_asm->add_option("--window", asm_window,
                    "keep only recordings inside HH:MM-HH:MM");
  c_asm->add_option("--expected-counts", asm_expected,
                    "expected per-site-per-year counts CSV to validate");
  c_asm->add_option("--counts-out", asm_counts_out,
                    "where to write the count comparison");

  // ---- fit ----------------------------------------------------------
  auto* c_fit = app.add_subcommand(
      "fit", "fit a hierarchical model by Gibbs sampling");
  std::string fit_data, fit_out, fit_model = "uni", fit_variant = "full";
  std::string fit_response = "NDSI";
  ss_fit_options fopts;
  ss_fit_options_init(&fopts);
  bool fit_store_re = false;
  c_fit->add_option("--dataset", fit_data, "dataset JSON")->required();
  c_fit->add_option("--out-dir", fit_out, "output directory")->required();
  c_fit->add_option("--model", fit_model, "uni or multi")
      ->check(CLI::IsMember({"uni", "multi"}));
  c_fit->add_option("--variant", fit_variant,
                    "full, no-inherent, no-rain, no-random, or basic");
  c_fit->add_option("--response", fit_response,
                    "univariate response column (default NDSI)");
  c_fit->add_option("--iterations", fopts.iterations, "MCMC iterations");
  c_fit->add_option("--burn-in", fopts.burn_in, "discarded iterations");
  c_fit->add_option("--thin", fopts.thin, "thinning stride");
  c_fit->add_option("--chains", fopts.chains, "parallel chains");
  c_fit->add_option("--seed", fopts.seed, "RNG seed (mandatory)")->required();
  c_fit->add_flag("--store-random-effects", fit_store_re,
                  "keep per-individual effect draws");

  // ---- compare -------------------------------------------------------
  auto* c_cmp = app.add_subcommand(
      "compare", "rank candidate-model reports by WAIC");
  std::vector<std::string> cmp_reports;
  std::string cmp_out;
  c_cmp->add_option("--reports", cmp_reports, "report.json files")
      ->required()
      ->expected(-1);
  c_cmp->add_option("--out", cmp_out, "comparison table CSV")->required();

  // ---- simulate --------------------------------------------------------
  auto* c_sim = app.add_subcommand(
      "simulate", "draw a synthetic dataset from a truth/layout config");
  std::string sim_config, sim_out;
  int64_t sim_seed = -1;
  c_sim->add_option("--truth", sim_config, "truth + layout JSON")->required();
  c_sim->add_option("--out", sim_out, "output dataset JSON")->required();
  c_sim->add_option("--seed", sim_seed, "seed override");

  // ---- report -------------------------------------------------------
  auto* c_rep = app.add_subcommand(
      "report", "summaries and diagnostics from saved draw files");
  std::vector<std::string> rep_draws;
  std::string rep_out;
  c_rep->add_option("--draws", rep_draws, "per-chain draw CSVs")
      ->required()
      ->expected(-1);
  c_rep->add_option("--out-dir", rep_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (c_idx->parsed()) {
    long ok = 0, failed = 0;
    if (idx_log.empty()) idx_log = default_log("indices.log");
    const int rc = ss_run_indices(
        idx_meta.c_str(), idx_root.empty() ? nullptr : idx_root.c_str(),
        idx_out.c_str(), idx_log.empty() ? nullptr : idx_log.c_str(), &iparams,
        idx_workers, &ok, &failed);
    std::printf("indices: %ld ok, %ld failed\n", ok, failed);
    return finish(rc);
  }

  if (c_asm->parsed()) {
    if (!asm_window.empty()) {
      const auto dash = asm_window.find('-');
      if (dash == std::string::npos ||
          !parse_hhmm(asm_window.substr(0, dash), aopts.window_start_min) ||
          !parse_hhmm(asm_window.substr(dash + 1), aopts.window_end_min)) {
        std::fprintf(stderr, "bad --window (expected HH:MM-HH:MM)\n");
        return 1;
      }
    }
    long individuals = 0, excluded = 0;
    if (asm_log.empty()) asm_log = default_log("assemble.log");
    int rc = ss_assemble(asm_meta.c_str(), asm_idx.c_str(), asm_out.c_str(),
                         &aopts, asm_log.empty() ? nullptr : asm_log.c_str(),
                         &individuals, &excluded);
    std::printf("assemble: %ld individuals, %ld recordings excluded\n",
                individuals, excluded);
    if (rc == SS_OK && !asm_expected.empty()) {
      long mismatches = 0;
      rc = ss_validate_counts(
          asm_out.c_str(), asm_expected.c_str(),
          asm_counts_out.empty() ? nullptr : asm_counts_out.c_str(),
          &mismatches);
      if (rc == SS_OK)
        std::printf("counts: %ld cell(s) differ from the expected table\n",
                    mismatches);
    }
    return finish(rc);
  }

  if (c_fit->parsed()) {
    fopts.model = fit_model.c_str();
    fopts.variant = fit_variant.c_str();
    fopts.response = fit_response.c_str();
    fopts.store_random_effects = fit_store_re ? 1 : 0;
    double waic = 0.0;
    const int rc = ss_fit(fit_data.c_str(), &fopts, fit_out.c_str(), &waic);
    if (rc == SS_OK)
      std::printf("fit: %s/%s WAIC %.2f -> %s\n", fit_model.c_str(),
                  fit_variant.c_str(), waic, fit_out.c_str());
    return finish(rc);
  }

  if (c_cmp->parsed()) {
    std::vector<const char*> paths;
    paths.reserve(cmp_reports.size());
    for (const auto& p : cmp_reports) paths.push_back(p.c_str());
    char preferred[128] = {0};
    const int rc = ss_compare(paths.data(), static_cast<int>(paths.size()),
                              cmp_out.c_str(), preferred, sizeof(preferred));
    if (rc == SS_OK) std::printf("compare: %s preferred\n", preferred);
    return finish(rc);
  }

  if (c_sim->parsed()) {
    const int rc = ss_simulate(sim_config.c_str(), sim_out.c_str(), sim_seed);
    if (rc == SS_OK) std::printf("simulate: wrote %s\n", sim_out.c_str());
    return finish(rc);
  }

  if (c_rep->parsed()) {
    std::vector<const char*> paths;
    paths.reserve(rep_draws.size());
    for (const auto& p : rep_draws) paths.push_back(p.c_str());
    const int rc = ss_report(paths.data(), static_cast<int>(paths.size()),
                             rep_out.c_str());
    if (rc == SS_OK) std::printf("report: wrote %s\n", rep_out.c_str());
    return finish(rc);
  }

  return 0;
}
