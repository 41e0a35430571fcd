#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace soundscape {

// One metadata row: site_id, ISO-8601 datetime, treatment {0,1}, rain {0,1},
// wav_path. The wav_path doubles as the recording id and as the join key
// into the index table.
struct RecordingMeta {
  std::string recording_id;
  std::string site_id;
  std::string datetime_text;  // as given, echoed into outputs
  int year = 0, month = 0, day = 0;
  int minutes = 0;  // time of day, minutes since midnight
  bool treatment = false;
  bool rain = false;
};

std::vector<RecordingMeta> read_metadata(const std::string& path);
// "YYYY-MM-DD HH:MM[:SS]" or with 'T' separator.
void parse_datetime(const std::string& text, int& year, int& month, int& day,
                    int& minutes);
std::string minutes_to_hhmm(int minutes);

struct YearObservation {
  int year = 0;
  bool rain = false;
  Eigen::VectorXd y;  // transformed index values, canonical order
};

// The sampling unit: a (site, day, time-of-day) triple observed across
// years. t() is the number of recorded years.
struct IndividualSoundscape {
  std::string site_id;
  int month = 0, day = 0, minutes = 0;
  bool treatment = false;
  std::vector<YearObservation> obs;  // ascending, distinct years

  int t() const { return static_cast<int>(obs.size()); }
};

// Study span and treatment timing. The full design has
// 2 + 2 * n_effect_years + 1 columns; defaults give the 13-column layout
// (intercept, inherent difference, five year effects, five treatment-year
// effects, rain).
struct DesignSpec {
  int year_min = 2009;
  int year_max = 2018;
  int first_effect_year = 2014;

  int n_effect_years() const { return year_max - first_effect_year + 1; }
  int n_cols_full() const { return 3 + 2 * n_effect_years(); }
};

// Candidate-model component switches. Dropping a component removes its
// design columns (or, for random effects, pins the intercepts at zero).
struct ModelToggles {
  bool inherent_difference = true;
  bool rain_effect = true;
  bool random_effects = true;
};

std::vector<std::string> design_column_names(const DesignSpec& spec,
                                             const ModelToggles& toggles);

// t_i x p design matrix for one individual, active columns only.
Eigen::MatrixXd build_design_uni(const IndividualSoundscape& ind,
                                 const DesignSpec& spec,
                                 const ModelToggles& toggles);

// Dense (K t_i) x (p K) block expansion: every index gets its own copy of
// the univariate coefficients. Column (j * p + c) is covariate c of index j;
// rows are stacked year by year, index fastest. The samplers exploit this
// structure implicitly; the dense form exists for auditing and tests.
Eigen::MatrixXd build_design_multi_dense(const IndividualSoundscape& ind,
                                         const DesignSpec& spec,
                                         const ModelToggles& toggles, int k);

// (K t_i) x K stack of t_i identity blocks.
Eigen::MatrixXd random_effects_design(int t_i, int k);

struct AssembledDataset {
  DesignSpec design;
  std::vector<std::string> response_names;      // K entries
  std::vector<IndividualSoundscape> individuals;  // stacking order

  int response_dim() const {
    return static_cast<int>(response_names.size());
  }
  long n_recordings() const;
  // Column of a named response; throws ConfigError when absent.
  int response_column(const std::string& name) const;
};

struct AssembleOptions {
  DesignSpec design;
  std::optional<int> month = std::nullopt;  // keep only this month
  // Keep only recordings with start time inside [first, second] minutes.
  std::optional<std::pair<int, int>> time_window = std::nullopt;
};

struct AssembleResult {
  AssembledDataset dataset;
  std::vector<std::string> exclusions;  // "<recording_id>: <reason>"
};

// Join metadata with the per-recording index table (columns
// recording_id + t_<index> for every canonical index), group recordings
// into individuals, order them site / day / time / year. Recordings
// without index values are excluded and logged, never imputed.
AssembleResult assemble(const std::vector<RecordingMeta>& meta,
                        const std::string& index_table_path,
                        const AssembleOptions& options);

// Grouping only (responses left empty): the unit-forming step.
std::vector<IndividualSoundscape> group_individuals(
    const std::vector<RecordingMeta>& meta);

void save_dataset_json(const AssembledDataset& data, const std::string& path);
AssembledDataset load_dataset_json(const std::string& path);

// FNV-1a 64 over the canonical JSON serialization; used to refuse model
// comparisons across different datasets.
uint64_t dataset_hash(const AssembledDataset& data);
uint64_t fnv1a64(const std::string& bytes);

struct CountCell {
  std::string site;
  int year = 0;
  long expected = 0;
  long actual = 0;
};

struct CountReport {
  std::vector<CountCell> cells;  // every (site, year) seen on either side
  long total_expected = 0;
  long total_actual = 0;

  bool ok() const;
  std::vector<CountCell> mismatches() const;
};

// Compare per-site-per-year recording counts against an expected table
// (CSV columns: site, year, count).
CountReport validate_counts(const AssembledDataset& data,
                            const std::string& expected_csv);
CountReport validate_counts(const AssembledDataset& data,
                            const std::vector<CountCell>& expected);

}  // namespace soundscape
