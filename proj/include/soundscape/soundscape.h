/*
 * soundscape - acoustic indices and hierarchical Bayesian soundscape models
 *
 * C interface to the soundscape shared library. All functions return an
 * ss_status code (SS_OK on success); objects are opaque handles released
 * with their matching *_free function. Error detail for the calling thread
 * is available from ss_last_error().
 */
#ifndef SOUNDSCAPE_H
#define SOUNDSCAPE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SOUNDSCAPE_VERSION_MAJOR 0
#define SOUNDSCAPE_VERSION_MINOR 1
#define SOUNDSCAPE_VERSION_PATCH 0

/* ------------------------------------------------------------------ */
/* status codes                                                        */

typedef enum ss_status {
  SS_OK = 0,
  SS_E_IO = 1,            /* file missing or unreadable */
  SS_E_DECODE = 2,        /* corrupt or truncated WAV container */
  SS_E_CHANNELS = 3,      /* multichannel input (mono required) */
  SS_E_FORMAT = 4,        /* not 16-bit PCM, or sample rate < 22050 Hz */
  SS_E_SILENT = 5,        /* all-zero signal or zero band power */
  SS_E_WINDOW = 6,        /* analysis window longer than the signal */
  SS_E_FRAMES = 7,        /* spectrogram has fewer than two frames */
  SS_E_BOUNDARY = 8,      /* index value outside its transform bounds */
  SS_E_DUPLICATE = 9,     /* duplicate (site, date, time, year) metadata */
  SS_E_YEAR_RANGE = 10,   /* recording year outside the study span */
  SS_E_MISSING = 11,      /* recorded year without full index values */
  SS_E_COVARIANCE = 12,   /* covariance matrix not positive definite */
  SS_E_NUMERIC = 13,      /* factorization failure or non-finite value */
  SS_E_DIVERGENCE = 14,   /* non-finite log-likelihood while sampling */
  SS_E_FEW_DRAWS = 15,    /* not enough retained draws for a summary */
  SS_E_CONFIG = 16,       /* invalid configuration, arguments, or schema */
  SS_E_DATA_MISMATCH = 17,/* reports come from different datasets */
  SS_E_EMPTY = 18,        /* batch produced no successful results */
  SS_E_INTERNAL = 99
} ss_status;

const char* ss_version(void);
const char* ss_status_name(int status);
/* Detail message from the most recent failing call on this thread. */
const char* ss_last_error(void);

/* ------------------------------------------------------------------ */
/* audio                                                               */

typedef struct ss_audio ss_audio;

/* Strict reader: RIFF/WAVE, 16-bit PCM, mono; rate >= 22050 Hz. */
int ss_audio_read_wav(const char* path, ss_audio** out);
int ss_audio_from_samples(const double* samples, int64_t n,
                          int32_t sample_rate, ss_audio** out);
void ss_audio_free(ss_audio* audio);
int64_t ss_audio_sample_count(const ss_audio* audio);
int32_t ss_audio_sample_rate(const ss_audio* audio);
double ss_audio_duration_seconds(const ss_audio* audio);

/* 16-bit PCM writer for synthetic fixtures; samples clamped to [-1, 1]. */
int ss_audio_write_wav(const char* path, const double* samples, int64_t n,
                       int32_t sample_rate);

/* ------------------------------------------------------------------ */
/* acoustic indices                                                    */

typedef struct ss_index_params {
  size_t welch_segment_length; /* 0 = one second of samples */
  double welch_overlap;        /* fraction in [0, 1) */
  size_t stft_window_length;
  double stft_overlap;
  double aei_threshold_db; /* dB re full scale, negative */
  double aei_max_freq_hz;
} ss_index_params;

void ss_index_params_init(ss_index_params* params);

/* Raw and transformed values in canonical order
 * (H, ACI, NDSI, AEI, PSD1..PSD10). */
typedef struct ss_index_record {
  double h, aci, ndsi, aei;
  double psd[10];
  double t_h, t_aci, t_ndsi, t_aei;
  double t_psd[10];
} ss_index_record;

int ss_compute_indices(const ss_audio* audio, const ss_index_params* params,
                       ss_index_record* out);

/* ------------------------------------------------------------------ */
/* pipeline runs (file based)                                          */

/* Index table for every metadata row; failures logged and skipped.
 * n_ok / n_failed may be NULL. workers <= 0 means one per core. */
int ss_run_indices(const char* metadata_csv, const char* audio_root,
                   const char* out_csv, const char* log_path,
                   const ss_index_params* params, int workers, long* n_ok,
                   long* n_failed);

typedef struct ss_assemble_options {
  int year_min;           /* default 2009 */
  int year_max;           /* default 2018 */
  int first_effect_year;  /* default 2014 */
  int month;              /* 0 = no month filter */
  int window_start_min;   /* minutes since midnight; -1 = no window */
  int window_end_min;
} ss_assemble_options;

void ss_assemble_options_init(ss_assemble_options* options);

int ss_assemble(const char* metadata_csv, const char* indices_csv,
                const char* out_json, const ss_assemble_options* options,
                const char* log_path, long* n_individuals, long* n_excluded);

typedef struct ss_fit_options {
  const char* model;    /* "uni" or "multi" */
  const char* variant;  /* full | no-inherent | no-rain | no-random | basic */
  const char* response; /* univariate response column, e.g. "NDSI" */
  long iterations;      /* default 25000 */
  long burn_in;         /* default 5000 */
  long thin;            /* default 1 */
  int chains;           /* default 3 */
  uint64_t seed;        /* mandatory; no wall-clock seeding */
  int store_random_effects; /* nonzero: keep per-individual draws */
} ss_fit_options;

void ss_fit_options_init(ss_fit_options* options);

/* Writes draws_chain<k>.csv, report.json, summary.csv, diagnostics.csv,
 * manifest.json (and effect/correlation tables for the multivariate
 * model) into out_dir. waic may be NULL. */
int ss_fit(const char* dataset_json, const ss_fit_options* options,
           const char* out_dir, double* waic);

/* WAIC table over saved reports, ascending, lowest flagged preferred.
 * All reports must carry the same dataset hash. preferred_label is
 * copied into a caller buffer when non-NULL. */
int ss_compare(const char* const* report_paths, int n_reports,
               const char* out_csv, char* preferred_label, size_t label_size);

/* Synthetic dataset from a truth/layout config; pass seed < 0 to use the
 * seed stored in the config file. */
int ss_simulate(const char* config_json, const char* out_json, int64_t seed);

/* Post-hoc summary + diagnostics from saved per-chain draw files. */
int ss_report(const char* const* draw_csvs, int n_files, const char* out_dir);

/* Per-site-per-year recording counts against an expected table
 * (CSV: site, year, count). mismatches may be NULL. */
int ss_validate_counts(const char* dataset_json, const char* expected_csv,
                       const char* out_csv, long* mismatches);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SOUNDSCAPE_H */
