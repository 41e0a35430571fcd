#include "core/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>
#include <utility>

#include <json.hpp>

#include "core/audio.hpp"
#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/gibbs_multi.hpp"
#include "core/gibbs_uni.hpp"
#include "core/report.hpp"
#include "core/simulate.hpp"

namespace soundscape {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_lines(const std::string& path,
                 const std::vector<std::string>& lines) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  for (const auto& l : lines) out << l << '\n';
}

void write_manifest(const std::string& path, json config, uint64_t seed,
                    const json& inputs, const json& outputs,
                    double wall_seconds) {
  json root;
  root["schema"] = "soundscape-manifest/1";
  root["version"] = "0.1.0";
  root["config"] = std::move(config);
  root["seed"] = seed;
  root["inputs"] = inputs;
  root["outputs"] = outputs;
  root["timings"] = {{"wall_seconds", wall_seconds}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  out << root.dump(2) << '\n';
}

uint64_t file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return fnv1a64(bytes);
}

}  // namespace

IndicesRunStats run_indices_batch(const std::string& metadata_csv,
                                  const std::string& audio_root,
                                  const std::string& out_csv,
                                  const std::string& log_path,
                                  const IndexParams& params, int workers) {
  const std::vector<RecordingMeta> meta = read_metadata(metadata_csv);
  if (workers < 1)
    workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  struct Slot {
    bool ok = false;
    IndexRecord rec;
    std::string error;
  };
  std::vector<Slot> slots(meta.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= meta.size()) return;
      Slot& slot = slots[i];
      try {
        fs::path p(meta[i].recording_id);
        if (p.is_relative() && !audio_root.empty())
          p = fs::path(audio_root) / p;
        const AudioBuffer audio = read_wav(p.string());
        slot.rec = compute_all(audio, params);
        slot.ok = true;
      } catch (const Error& e) {
        slot.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::vector<std::string> header = {"recording_id", "site_id", "timestamp"};
  for (const auto& name : index_names()) header.push_back(name);
  for (const auto& name : index_names()) header.push_back("t_" + name);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> log_lines;
  IndicesRunStats stats;
  for (std::size_t i = 0; i < meta.size(); ++i) {
    if (!slots[i].ok) {
      ++stats.n_failed;
      log_lines.push_back(meta[i].recording_id + ": " + slots[i].error);
      continue;
    }
    ++stats.n_ok;
    std::vector<std::string> row = {meta[i].recording_id, meta[i].site_id,
                                    meta[i].datetime_text};
    for (double v : slots[i].rec.raw()) row.push_back(csv::format(v));
    for (double v : slots[i].rec.transformed()) row.push_back(csv::format(v));
    rows.push_back(std::move(row));
  }
  csv::write_file(out_csv, header, rows);
  write_lines(log_path, log_lines);

  json cfg = {{"metadata", metadata_csv},
              {"audio_root", audio_root},
              {"workers", workers},
              {"welch_segment_length", params.welch.segment_length},
              {"welch_overlap", params.welch.overlap},
              {"stft_window_length", params.stft.window_length},
              {"stft_overlap", params.stft.overlap},
              {"aei_threshold_db", params.aei_threshold_db},
              {"aei_max_freq", params.aei_max_freq}};
  json inputs = {{"metadata_hash", file_hash(metadata_csv)}};
  write_manifest(out_csv + ".manifest.json", std::move(cfg), 0, inputs,
                 json({out_csv}), 0.0);
  return stats;
}

AssembleStats run_assemble(const std::string& metadata_csv,
                           const std::string& indices_csv,
                           const std::string& out_json,
                           const AssembleOptions& options,
                           const std::string& log_path) {
  const std::vector<RecordingMeta> meta = read_metadata(metadata_csv);
  AssembleResult result = assemble(meta, indices_csv, options);
  save_dataset_json(result.dataset, out_json);
  write_lines(log_path, result.exclusions);

  json cfg = {{"metadata", metadata_csv},
              {"indices", indices_csv},
              {"year_min", options.design.year_min},
              {"year_max", options.design.year_max},
              {"first_effect_year", options.design.first_effect_year}};
  json inputs = {{"metadata_hash", file_hash(metadata_csv)},
                 {"indices_hash", file_hash(indices_csv)}};
  write_manifest(out_json + ".manifest.json", std::move(cfg), 0, inputs,
                 json({out_json}), 0.0);

  AssembleStats stats;
  stats.n_individuals = static_cast<long>(result.dataset.individuals.size());
  stats.n_recordings = result.dataset.n_recordings();
  stats.n_excluded = static_cast<long>(result.exclusions.size());
  return stats;
}

ModelToggles toggles_for_variant(const std::string& variant) {
  ModelToggles t;
  if (variant == "full") return t;
  if (variant == "no-inherent") {
    t.inherent_difference = false;
    return t;
  }
  if (variant == "no-rain") {
    t.rain_effect = false;
    return t;
  }
  if (variant == "no-random") {
    t.random_effects = false;
    return t;
  }
  if (variant == "basic") {
    t.inherent_difference = t.rain_effect = t.random_effects = false;
    return t;
  }
  throw ConfigError("unknown model variant '" + variant +
                    "' (full, no-inherent, no-rain, no-random, basic)");
}

std::string variant_name(const ModelToggles& t) {
  const int off = (!t.inherent_difference ? 1 : 0) + (!t.rain_effect ? 1 : 0) +
                  (!t.random_effects ? 1 : 0);
  if (off == 0) return "full";
  if (off == 3) return "basic";
  if (!t.inherent_difference && off == 1) return "no-inherent";
  if (!t.rain_effect && off == 1) return "no-rain";
  if (!t.random_effects && off == 1) return "no-random";
  return "custom";
}

FitStats run_fit(const std::string& dataset_json, const FitOptions& options,
                 const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  const AssembledDataset data = load_dataset_json(dataset_json);
  const uint64_t hash = dataset_hash(data);
  fs::create_directories(out_dir);

  const ModelToggles toggles = toggles_for_variant(options.variant);
  PosteriorDraws draws;
  if (options.model == "uni") {
    UniModelSpec spec;
    spec.response = options.response;
    spec.toggles = toggles;
    draws = run_chains_uni(data, spec, options.sampler);
  } else if (options.model == "multi") {
    MultiModelSpec spec;
    spec.toggles = toggles;
    draws = run_chains_multi(data, spec, options.sampler);
  } else {
    throw ConfigError("model must be 'uni' or 'multi'");
  }

  ModelReport report;
  report.model = options.model;
  report.variant = options.variant;
  report.response = options.model == "uni" ? options.response : "all";
  report.data_hash = hash;
  report.n_obs = draws.loglik.cols();
  report.n_individuals = static_cast<long>(data.individuals.size());
  report.summary = summarize(draws);
  report.waic = waic(draws.loglik);
  report.diag = diagnostics(draws);

  std::vector<std::string> outputs;
  if (options.model == "multi" && toggles.random_effects) {
    // Lower-triangle lambda columns sit after the coefficients and sigma2.
    const int k = data.response_dim();
    const Eigen::Index first = draws.column("lambda_1_1");
    report.correlations = correlations(
        draws.draws.middleCols(first, static_cast<Eigen::Index>(k) * (k + 1) / 2),
        data.response_names);
    const std::string corr_csv = (fs::path(out_dir) / "correlations.csv").string();
    write_correlations_csv(*report.correlations, corr_csv);
    outputs.push_back(corr_csv);
  }

  for (int c = 0; c < draws.n_chains; ++c) {
    const std::string p =
        (fs::path(out_dir) / ("draws_chain" + std::to_string(c + 1) + ".csv"))
            .string();
    write_draws_csv(draws, c, p);
    outputs.push_back(p);
  }
  const std::string report_path = (fs::path(out_dir) / "report.json").string();
  save_report_json(report, report_path);
  outputs.push_back(report_path);
  const std::string summary_path = (fs::path(out_dir) / "summary.csv").string();
  write_summary_csv(report.summary, summary_path);
  outputs.push_back(summary_path);
  const std::string diag_path =
      (fs::path(out_dir) / "diagnostics.csv").string();
  write_diagnostics_csv(report.diag, diag_path);
  outputs.push_back(diag_path);
  if (options.model == "multi") {
    for (const auto& [col, file] :
         {std::pair<std::string, std::string>{"rain", "rain_effects.csv"},
          {"inherent_diff", "inherent_effects.csv"}}) {
      const std::string p = (fs::path(out_dir) / file).string();
      write_effect_csv(report, col, p);
      outputs.push_back(p);
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  json cfg = {{"model", options.model},
              {"variant", options.variant},
              {"response", options.response},
              {"iterations", options.sampler.iterations},
              {"burn_in", options.sampler.burn_in},
              {"thin", options.sampler.thin},
              {"chains", options.sampler.chains}};
  json inputs = {{"dataset", dataset_json}, {"data_hash", hash}};
  write_manifest((fs::path(out_dir) / "manifest.json").string(),
                 std::move(cfg), options.sampler.seed, inputs, json(outputs),
                 wall);

  FitStats stats;
  stats.waic = report.waic.waic;
  stats.n_obs = report.n_obs;
  stats.outputs = std::move(outputs);
  return stats;
}

std::string run_compare(const std::vector<std::string>& report_paths,
                        const std::string& out_csv) {
  std::vector<ModelReport> reports;
  reports.reserve(report_paths.size());
  for (const auto& p : report_paths) reports.push_back(load_report_json(p));
  const std::vector<ComparisonRow> rows = compare_reports(reports);
  write_comparison_csv(rows, out_csv);
  return rows.front().label;
}

namespace {

DesignSpec design_from_json(const json& j) {
  DesignSpec d;
  if (j.contains("year_min")) d.year_min = j.at("year_min").get<int>();
  if (j.contains("year_max")) d.year_max = j.at("year_max").get<int>();
  if (j.contains("first_effect_year"))
    d.first_effect_year = j.at("first_effect_year").get<int>();
  if (d.year_min > d.year_max || d.first_effect_year < d.year_min ||
      d.first_effect_year > d.year_max)
    throw ConfigError("invalid study span");
  return d;
}

SimLayout layout_from_json(const json& j) {
  SimLayout layout;
  layout.design = design_from_json(j);
  if (j.contains("n_individuals"))
    layout.n_individuals = j.at("n_individuals").get<int>();
  if (j.contains("treatment_fraction"))
    layout.treatment_fraction = j.at("treatment_fraction").get<double>();
  if (j.contains("min_years")) layout.min_years = j.at("min_years").get<int>();
  if (j.contains("max_years")) layout.max_years = j.at("max_years").get<int>();
  if (j.contains("rain_prob")) layout.rain_prob = j.at("rain_prob").get<double>();
  return layout;
}

// Coefficients may be given sparsely by design-column name.
Eigen::VectorXd alpha_from_json(const json& j, const DesignSpec& design) {
  const ModelToggles full;
  const std::vector<std::string> cols = design_column_names(design, full);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(design.n_cols_full());
  if (j.is_array()) {
    if (j.size() != cols.size())
      throw ConfigError("alpha array length must be " +
                        std::to_string(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i)
      alpha[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return alpha;
  }
  for (const auto& [key, value] : j.items()) {
    const auto it = std::find(cols.begin(), cols.end(), key);
    if (it == cols.end())
      throw ConfigError("unknown design column '" + key + "'");
    alpha[static_cast<Eigen::Index>(it - cols.begin())] = value.get<double>();
  }
  return alpha;
}

}  // namespace

void run_simulate(const std::string& config_json, const std::string& out_json,
                  std::optional<uint64_t> seed_override) {
  std::ifstream in(config_json);
  if (!in) throw IoError("cannot open " + config_json);
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw ConfigError(config_json + ": " + e.what());
  }

  try {
    uint64_t seed = 0;
    if (seed_override)
      seed = *seed_override;
    else if (root.contains("seed"))
      seed = root.at("seed").get<uint64_t>();
    else
      throw ConfigError("simulate needs a seed (config or --seed)");

    const SimLayout layout = layout_from_json(root.at("layout"));
    const json& truth = root.at("truth");
    const std::string model = root.at("model").get<std::string>();

    AssembledDataset data;
    if (model == "uni") {
      UniTruth t;
      t.alpha = alpha_from_json(truth.at("alpha"), layout.design);
      t.sigma2 = truth.at("sigma2").get<double>();
      t.tau2 = truth.at("tau2").get<double>();
      data = simulate_uni(t, layout, seed);
    } else if (model == "multi") {
      const int k = truth.contains("k") ? truth.at("k").get<int>() : kNumIndices;
      std::vector<std::string> names;
      if (k == kNumIndices) {
        names = index_names();
      } else {
        for (int j = 0; j < k; ++j) names.push_back("y" + std::to_string(j + 1));
      }
      MultiTruth t;
      t.sigma2 = truth.at("sigma2").get<double>();
      t.alpha = Eigen::MatrixXd::Zero(layout.design.n_cols_full(), k);
      if (truth.contains("alpha")) {
        // Keys are "<index>:<column>".
        const ModelToggles full;
        const auto cols = design_column_names(layout.design, full);
        for (const auto& [key, value] : truth.at("alpha").items()) {
          const auto colon = key.find(':');
          if (colon == std::string::npos)
            throw ConfigError("multi alpha keys look like '<index>:<column>'");
          const std::string index = key.substr(0, colon);
          const std::string col = key.substr(colon + 1);
          const auto ji = std::find(names.begin(), names.end(), index);
          const auto ci = std::find(cols.begin(), cols.end(), col);
          if (ji == names.end()) throw ConfigError("unknown index '" + index + "'");
          if (ci == cols.end()) throw ConfigError("unknown column '" + col + "'");
          t.alpha(ci - cols.begin(), ji - names.begin()) = value.get<double>();
        }
      }
      t.lambda = Eigen::MatrixXd::Identity(k, k);
      if (truth.contains("lambda")) {
        const json& lj = truth.at("lambda");
        Eigen::VectorXd sd = Eigen::VectorXd::Ones(k);
        if (lj.contains("variances")) {
          const json& v = lj.at("variances");
          if (v.is_number()) {
            sd.setConstant(std::sqrt(v.get<double>()));
          } else {
            if (v.size() != static_cast<std::size_t>(k))
              throw ConfigError("lambda variances must have K entries");
            for (int i = 0; i < k; ++i)
              sd[i] = std::sqrt(v[static_cast<std::size_t>(i)].get<double>());
          }
        }
        Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(k, k);
        if (lj.contains("correlations")) {
          for (const auto& pair : lj.at("correlations")) {
            const std::string a = pair.at("a").get<std::string>();
            const std::string b = pair.at("b").get<std::string>();
            const double value = pair.at("value").get<double>();
            const auto ia = std::find(names.begin(), names.end(), a);
            const auto ib = std::find(names.begin(), names.end(), b);
            if (ia == names.end() || ib == names.end())
              throw ConfigError("unknown index in lambda correlations");
            corr(ia - names.begin(), ib - names.begin()) = value;
            corr(ib - names.begin(), ia - names.begin()) = value;
          }
        }
        t.lambda = sd.asDiagonal() * corr * sd.asDiagonal();
      }
      data = simulate_multi(t, layout, seed);
    } else {
      throw ConfigError("model must be 'uni' or 'multi'");
    }
    save_dataset_json(data, out_json);

    json cfg = root;
    json inputs = {{"config", config_json}};
    write_manifest(out_json + ".manifest.json", std::move(cfg), seed, inputs,
                   json({out_json}), 0.0);
  } catch (const json::exception& e) {
    throw ConfigError(config_json + ": " + e.what());
  }
}

void run_report(const std::vector<std::string>& draw_files,
                const std::string& out_dir) {
  PosteriorDraws draws = load_draws_csv(draw_files);
  fs::create_directories(out_dir);
  write_summary_csv(summarize(draws),
                    (fs::path(out_dir) / "summary.csv").string());
  write_diagnostics_csv(diagnostics(draws),
                        (fs::path(out_dir) / "diagnostics.csv").string());
}

CountReport run_validate_counts(const std::string& dataset_json,
                                const std::string& expected_csv,
                                const std::string& out_csv) {
  const AssembledDataset data = load_dataset_json(dataset_json);
  const CountReport report = validate_counts(data, expected_csv);
  if (!out_csv.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : report.cells)
      rows.push_back({c.site, std::to_string(c.year),
                      std::to_string(c.expected), std::to_string(c.actual),
                      c.expected == c.actual ? "1" : "0"});
    csv::write_file(out_csv, {"site", "year", "expected", "actual", "match"},
                    rows);
  }
  return report;
}

}  // namespace soundscape
