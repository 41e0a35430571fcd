#include "soundscape/soundscape.h"

#include <cstring>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "core/audio.hpp"
#include "core/errors.hpp"
#include "core/indices.hpp"
#include "core/pipeline.hpp"

using namespace soundscape;

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
  g_last_error = what;
  return code;
}

// Exception-to-status mapping; the single catch site for the C surface.
int translate() {
  try {
    throw;
  } catch (const IoError& e) {
    return fail(SS_E_IO, e.what());
  } catch (const DecodeError& e) {
    return fail(SS_E_DECODE, e.what());
  } catch (const ChannelError& e) {
    return fail(SS_E_CHANNELS, e.what());
  } catch (const FormatError& e) {
    return fail(SS_E_FORMAT, e.what());
  } catch (const SilentRecordingError& e) {
    return fail(SS_E_SILENT, e.what());
  } catch (const WindowError& e) {
    return fail(SS_E_WINDOW, e.what());
  } catch (const InsufficientFramesError& e) {
    return fail(SS_E_FRAMES, e.what());
  } catch (const BoundaryError& e) {
    return fail(SS_E_BOUNDARY, e.what());
  } catch (const DuplicateRecordingError& e) {
    return fail(SS_E_DUPLICATE, e.what());
  } catch (const YearRangeError& e) {
    return fail(SS_E_YEAR_RANGE, e.what());
  } catch (const MissingResponseError& e) {
    return fail(SS_E_MISSING, e.what());
  } catch (const CovarianceError& e) {
    return fail(SS_E_COVARIANCE, e.what());
  } catch (const ChainDivergenceError& e) {
    return fail(SS_E_DIVERGENCE, e.what());
  } catch (const NumericalError& e) {
    return fail(SS_E_NUMERIC, e.what());
  } catch (const InsufficientDrawsError& e) {
    return fail(SS_E_FEW_DRAWS, e.what());
  } catch (const DataMismatchError& e) {
    return fail(SS_E_DATA_MISMATCH, e.what());
  } catch (const ConfigError& e) {
    return fail(SS_E_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(SS_E_INTERNAL, e.what());
  } catch (...) {
    return fail(SS_E_INTERNAL, "unknown error");
  }
}

IndexParams to_params(const ss_index_params* p) {
  IndexParams out;
  if (p == nullptr) return out;
  out.welch.segment_length = p->welch_segment_length;
  out.welch.overlap = p->welch_overlap;
  out.stft.window_length = p->stft_window_length;
  out.stft.overlap = p->stft_overlap;
  out.aei_threshold_db = p->aei_threshold_db;
  out.aei_max_freq = p->aei_max_freq_hz;
  return out;
}

const char* or_empty(const char* s) { return s == nullptr ? "" : s; }

}  // namespace

struct ss_audio {
  AudioBuffer buffer;
};

extern "C" {

const char* ss_version(void) { return "0.1.0"; }

const char* ss_status_name(int status) {
  switch (status) {
    case SS_OK: return "ok";
    case SS_E_IO: return "io-error";
    case SS_E_DECODE: return "decode-error";
    case SS_E_CHANNELS: return "channel-error";
    case SS_E_FORMAT: return "format-error";
    case SS_E_SILENT: return "silent-recording";
    case SS_E_WINDOW: return "window-error";
    case SS_E_FRAMES: return "insufficient-frames";
    case SS_E_BOUNDARY: return "boundary-error";
    case SS_E_DUPLICATE: return "duplicate-recording";
    case SS_E_YEAR_RANGE: return "year-range-error";
    case SS_E_MISSING: return "missing-response";
    case SS_E_COVARIANCE: return "covariance-error";
    case SS_E_NUMERIC: return "numerical-error";
    case SS_E_DIVERGENCE: return "chain-divergence";
    case SS_E_FEW_DRAWS: return "insufficient-draws";
    case SS_E_CONFIG: return "config-error";
    case SS_E_DATA_MISMATCH: return "data-mismatch";
    case SS_E_EMPTY: return "empty-result";
    default: return "internal-error";
  }
}

const char* ss_last_error(void) { return g_last_error.c_str(); }

int ss_audio_read_wav(const char* path, ss_audio** out) {
  if (path == nullptr || out == nullptr)
    return fail(SS_E_CONFIG, "null argument");
  try {
    *out = new ss_audio{read_wav(path)};
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

int ss_audio_from_samples(const double* samples, int64_t n,
                          int32_t sample_rate, ss_audio** out) {
  if (samples == nullptr || out == nullptr || n <= 0)
    return fail(SS_E_CONFIG, "null or empty sample buffer");
  try {
    *out = new ss_audio{make_buffer({samples, static_cast<size_t>(n)},
                                    sample_rate)};
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

void ss_audio_free(ss_audio* audio) { delete audio; }

int64_t ss_audio_sample_count(const ss_audio* audio) {
  return audio == nullptr ? 0
                          : static_cast<int64_t>(audio->buffer.samples.size());
}

int32_t ss_audio_sample_rate(const ss_audio* audio) {
  return audio == nullptr ? 0 : audio->buffer.sample_rate;
}

double ss_audio_duration_seconds(const ss_audio* audio) {
  return audio == nullptr ? 0.0 : audio->buffer.duration();
}

int ss_audio_write_wav(const char* path, const double* samples, int64_t n,
                       int32_t sample_rate) {
  if (path == nullptr || samples == nullptr || n <= 0)
    return fail(SS_E_CONFIG, "null argument");
  try {
    write_wav(path, {samples, static_cast<size_t>(n)}, sample_rate);
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

void ss_index_params_init(ss_index_params* params) {
  if (params == nullptr) return;
  const IndexParams d;
  params->welch_segment_length = d.welch.segment_length;
  params->welch_overlap = d.welch.overlap;
  params->stft_window_length = d.stft.window_length;
  params->stft_overlap = d.stft.overlap;
  params->aei_threshold_db = d.aei_threshold_db;
  params->aei_max_freq_hz = d.aei_max_freq;
}

int ss_compute_indices(const ss_audio* audio, const ss_index_params* params,
                       ss_index_record* out) {
  if (audio == nullptr || out == nullptr)
    return fail(SS_E_CONFIG, "null argument");
  try {
    const IndexRecord rec = compute_all(audio->buffer, to_params(params));
    out->h = rec.h;
    out->aci = rec.aci;
    out->ndsi = rec.ndsi;
    out->aei = rec.aei;
    std::memcpy(out->psd, rec.psd.data(), sizeof(out->psd));
    out->t_h = rec.t_h;
    out->t_aci = rec.t_aci;
    out->t_ndsi = rec.t_ndsi;
    out->t_aei = rec.t_aei;
    std::memcpy(out->t_psd, rec.t_psd.data(), sizeof(out->t_psd));
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

int ss_run_indices(const char* metadata_csv, const char* audio_root,
                   const char* out_csv, const char* log_path,
                   const ss_index_params* params, int workers, long* n_ok,
                   long* n_failed) {
  if (metadata_csv == nullptr || out_csv == nullptr)
    return fail(SS_E_CONFIG, "null argument");
  try {
    const IndicesRunStats stats =
        run_indices_batch(metadata_csv, or_empty(audio_root), out_csv,
                          or_empty(log_path), to_params(params), workers);
    if (n_ok != nullptr) *n_ok = stats.n_ok;
    if (n_failed != nullptr) *n_failed = stats.n_failed;
    if (stats.n_ok == 0)
      return fail(SS_E_EMPTY, "no recording produced index values");
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

void ss_assemble_options_init(ss_assemble_options* options) {
  if (options == nullptr) return;
  const DesignSpec d;
  options->year_min = d.year_min;
  options->year_max = d.year_max;
  options->first_effect_year = d.first_effect_year;
  options->month = 0;
  options->window_start_min = -1;
  options->window_end_min = -1;
}

int ss_assemble(const char* metadata_csv, const char* indices_csv,
                const char* out_json, const ss_assemble_options* options,
                const char* log_path, long* n_individuals, long* n_excluded) {
  if (metadata_csv == nullptr || indices_csv == nullptr || out_json == nullptr)
    return fail(SS_E_CONFIG, "null argument");
  try {
    AssembleOptions opts;
    if (options != nullptr) {
      opts.design.year_min = options->year_min;
      opts.design.year_max = options->year_max;
      opts.design.first_effect_year = options->first_effect_year;
      if (options->month > 0) opts.month = options->month;
      if (options->window_start_min >= 0 && options->window_end_min >= 0)
        opts.time_window = {options->window_start_min,
                            options->window_end_min};
    }
    const AssembleStats stats = run_assemble(metadata_csv, indices_csv,
                                             out_json, opts,
                                             or_empty(log_path));
    if (n_individuals != nullptr) *n_individuals = stats.n_individuals;
    if (n_excluded != nullptr) *n_excluded = stats.n_excluded;
    if (stats.n_individuals == 0)
      return fail(SS_E_EMPTY, "no individuals assembled");
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

void ss_fit_options_init(ss_fit_options* options) {
  if (options == nullptr) return;
  options->model = "uni";
  options->variant = "full";
  options->response = "NDSI";
  options->iterations = 25000;
  options->burn_in = 5000;
  options->thin = 1;
  options->chains = 3;
  options->seed = 0;
  options->store_random_effects = 0;
}

int ss_fit(const char* dataset_json, const ss_fit_options* options,
           const char* out_dir, double* waic) {
  if (dataset_json == nullptr || options == nullptr || out_dir == nullptr)
    return fail(SS_E_CONFIG, "null argument");
  try {
    FitOptions opts;
    opts.model = or_empty(options->model);
    opts.variant = or_empty(options->variant);
    opts.response = or_empty(options->response);
    opts.sampler.iterations = options->iterations;
    opts.sampler.burn_in = options->burn_in;
    opts.sampler.thin = options->thin;
    opts.sampler.chains = options->chains;
    opts.sampler.seed = options->seed;
    opts.sampler.store_random_effects = options->store_random_effects != 0;
    const FitStats stats = run_fit(dataset_json, opts, out_dir);
    if (waic != nullptr) *waic = stats.waic;
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

int ss_compare(const char* const* report_paths, int n_reports,
               const char* out_csv, char* preferred_label, size_t label_size) {
  if (report_paths == nullptr || n_reports < 1 || out_csv == nullptr)
    return fail(SS_E_CONFIG, "need at least one report");
  try {
    std::vector<std::string> paths(report_paths, report_paths + n_reports);
    const std::string preferred = run_compare(paths, out_csv);
    if (preferred_label != nullptr && label_size > 0) {
      std::strncpy(preferred_label, preferred.c_str(), label_size - 1);
      preferred_label[label_size - 1] = '\0';
    }
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

int ss_simulate(const char* config_json, const char* out_json, int64_t seed) {
  if (config_json == nullptr || out_json == nullptr)
    return fail(SS_E_CONFIG, "null argument");
  try {
    std::optional<uint64_t> override;
    if (seed >= 0) override = static_cast<uint64_t>(seed);
    run_simulate(config_json, out_json, override);
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

int ss_report(const char* const* draw_csvs, int n_files, const char* out_dir) {
  if (draw_csvs == nullptr || n_files < 1 || out_dir == nullptr)
    return fail(SS_E_CONFIG, "need at least one draw file");
  try {
    run_report(std::vector<std::string>(draw_csvs, draw_csvs + n_files),
               out_dir);
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

int ss_validate_counts(const char* dataset_json, const char* expected_csv,
                       const char* out_csv, long* mismatches) {
  if (dataset_json == nullptr || expected_csv == nullptr)
    return fail(SS_E_CONFIG, "null argument");
  try {
    const CountReport report =
        run_validate_counts(dataset_json, expected_csv, or_empty(out_csv));
    if (mismatches != nullptr)
      *mismatches = static_cast<long>(report.mismatches().size());
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

}  // extern "C"
