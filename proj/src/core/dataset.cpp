#include "core/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/indices.hpp"

namespace soundscape {

using nlohmann::json;

void parse_datetime(const std::string& text, int& year, int& month, int& day,
                    int& minutes) {
  int hh = 0, mm = 0, ss = 0;
  char sep = 0;
  int n = std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d", &year, &month,
                      &day, &sep, &hh, &mm, &ss);
  if (n < 6 || (sep != 'T' && sep != ' '))
    throw ConfigError("bad datetime '" + text + "' (expected ISO-8601)");
  if (month < 1 || month > 12 || day < 1 || day > 31 || hh < 0 || hh > 23 ||
      mm < 0 || mm > 59)
    throw ConfigError("out-of-range datetime '" + text + "'");
  minutes = hh * 60 + mm;
}

std::string minutes_to_hhmm(int minutes) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

std::vector<RecordingMeta> read_metadata(const std::string& path) {
  csv::Table t = csv::read_file(path);
  const std::size_t c_site = t.col("site_id");
  const std::size_t c_dt = t.col("datetime");
  const std::size_t c_treat = t.col("treatment");
  const std::size_t c_rain = t.col("rain");
  const std::size_t c_path = t.col("wav_path");

  auto parse_flag = [&](const std::string& v, const std::string& what) {
    if (v == "0") return false;
    if (v == "1") return true;
    throw ConfigError(path + ": " + what + " must be 0 or 1, got '" + v + "'");
  };

  std::vector<RecordingMeta> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    RecordingMeta m;
    m.site_id = row[c_site];
    m.datetime_text = row[c_dt];
    parse_datetime(row[c_dt], m.year, m.month, m.day, m.minutes);
    m.treatment = parse_flag(row[c_treat], "treatment");
    m.rain = parse_flag(row[c_rain], "rain");
    m.recording_id = row[c_path];
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<std::string> design_column_names(const DesignSpec& spec,
                                             const ModelToggles& toggles) {
  std::vector<std::string> names;
  names.emplace_back("intercept");
  if (toggles.inherent_difference) names.emplace_back("inherent_diff");
  for (int y = spec.first_effect_year; y <= spec.year_max; ++y)
    names.push_back("year_" + std::to_string(y));
  for (int y = spec.first_effect_year; y <= spec.year_max; ++y)
    names.push_back("treat_" + std::to_string(y));
  if (toggles.rain_effect) names.emplace_back("rain");
  return names;
}

Eigen::MatrixXd build_design_uni(const IndividualSoundscape& ind,
                                 const DesignSpec& spec,
                                 const ModelToggles& toggles) {
  const int n_effect = spec.n_effect_years();
  const int p = 1 + (toggles.inherent_difference ? 1 : 0) + 2 * n_effect +
                (toggles.rain_effect ? 1 : 0);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(ind.t(), p);
  for (int r = 0; r < ind.t(); ++r) {
    const YearObservation& obs = ind.obs[static_cast<std::size_t>(r)];
    if (obs.year < spec.year_min || obs.year > spec.year_max)
      throw YearRangeError("year " + std::to_string(obs.year) +
                           " outside study span " +
                           std::to_string(spec.year_min) + "-" +
                           std::to_string(spec.year_max));
    int c = 0;
    x(r, c++) = 1.0;
    if (toggles.inherent_difference) x(r, c++) = ind.treatment ? 1.0 : 0.0;
    // Year effects only exist for post-treatment years; pre-treatment rows
    // keep zeros so all effects are read against the pre-treatment state.
    if (obs.year >= spec.first_effect_year) {
      x(r, c + (obs.year - spec.first_effect_year)) = 1.0;
      if (ind.treatment)
        x(r, c + n_effect + (obs.year - spec.first_effect_year)) = 1.0;
    }
    c += 2 * n_effect;
    if (toggles.rain_effect) x(r, c) = obs.rain ? 1.0 : 0.0;
  }
  return x;
}

Eigen::MatrixXd build_design_multi_dense(const IndividualSoundscape& ind,
                                         const DesignSpec& spec,
                                         const ModelToggles& toggles, int k) {
  const Eigen::MatrixXd x1 = build_design_uni(ind, spec, toggles);
  const Eigen::Index p = x1.cols();
  Eigen::MatrixXd x2 = Eigen::MatrixXd::Zero(k * ind.t(), p * k);
  for (int r = 0; r < ind.t(); ++r)
    for (int j = 0; j < k; ++j)
      x2.block(static_cast<Eigen::Index>(r) * k + j, static_cast<Eigen::Index>(j) * p, 1, p) =
          x1.row(r);
  return x2;
}

Eigen::MatrixXd random_effects_design(int t_i, int k) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k) * t_i, k);
  for (int r = 0; r < t_i; ++r)
    w.block(static_cast<Eigen::Index>(r) * k, 0, k, k) =
        Eigen::MatrixXd::Identity(k, k);
  return w;
}

long AssembledDataset::n_recordings() const {
  long n = 0;
  for (const auto& ind : individuals) n += ind.t();
  return n;
}

int AssembledDataset::response_column(const std::string& name) const {
  for (std::size_t i = 0; i < response_names.size(); ++i)
    if (response_names[i] == name) return static_cast<int>(i);
  throw ConfigError("no response named '" + name + "'");
}

namespace {

using IndividualKey = std::tuple<std::string, int, int, int>;

IndividualKey key_of(const RecordingMeta& m) {
  return {m.site_id, m.month, m.day, m.minutes};
}

void sort_individuals(std::vector<IndividualSoundscape>& individuals) {
  std::sort(individuals.begin(), individuals.end(),
            [](const IndividualSoundscape& a, const IndividualSoundscape& b) {
              return std::tie(a.site_id, a.month, a.day, a.minutes) <
                     std::tie(b.site_id, b.month, b.day, b.minutes);
            });
  for (auto& ind : individuals)
    std::sort(ind.obs.begin(), ind.obs.end(),
              [](const YearObservation& a, const YearObservation& b) {
                return a.year < b.year;
              });
}

std::string describe(const RecordingMeta& m) {
  return m.site_id + " " + std::to_string(m.year) + "-" +
         std::to_string(m.month) + "-" + std::to_string(m.day) + " " +
         minutes_to_hhmm(m.minutes);
}

}  // namespace

std::vector<IndividualSoundscape> group_individuals(
    const std::vector<RecordingMeta>& meta) {
  std::map<IndividualKey, IndividualSoundscape> groups;
  std::set<std::pair<IndividualKey, int>> seen;
  std::map<std::string, bool> site_treatment;

  for (const auto& m : meta) {
    if (!seen.insert({key_of(m), m.year}).second)
      throw DuplicateRecordingError("duplicate recording: " + describe(m));
    auto [site_it, fresh] = site_treatment.try_emplace(m.site_id, m.treatment);
    if (!fresh && site_it->second != m.treatment)
      throw ConfigError("site " + m.site_id +
                        " has inconsistent treatment flags");

    auto& ind = groups[key_of(m)];
    if (ind.obs.empty()) {
      ind.site_id = m.site_id;
      ind.month = m.month;
      ind.day = m.day;
      ind.minutes = m.minutes;
      ind.treatment = m.treatment;
    }
    YearObservation obs;
    obs.year = m.year;
    obs.rain = m.rain;
    ind.obs.push_back(std::move(obs));
  }

  std::vector<IndividualSoundscape> out;
  out.reserve(groups.size());
  for (auto& [key, ind] : groups) out.push_back(std::move(ind));
  sort_individuals(out);
  return out;
}

AssembleResult assemble(const std::vector<RecordingMeta>& meta,
                        const std::string& index_table_path,
                        const AssembleOptions& options) {
  csv::Table table = csv::read_file(index_table_path);
  const std::size_t c_id = table.col("recording_id");
  std::vector<std::size_t> value_cols;
  for (const auto& name : index_names())
    value_cols.push_back(table.col("t_" + name));

  std::map<std::string, Eigen::VectorXd> responses;
  for (const auto& row : table.rows) {
    Eigen::VectorXd y(kNumIndices);
    for (int j = 0; j < kNumIndices; ++j)
      y[j] = csv::parse_double(row[value_cols[static_cast<std::size_t>(j)]],
                               index_table_path);
    responses[row[c_id]] = std::move(y);
  }

  AssembleResult result;
  std::vector<RecordingMeta> kept;
  for (const auto& m : meta) {
    if (m.year < options.design.year_min || m.year > options.design.year_max)
      throw YearRangeError("year " + std::to_string(m.year) +
                           " outside study span (" + describe(m) + ")");
    if (options.month && m.month != *options.month) {
      result.exclusions.push_back(m.recording_id + ": outside analysis month");
      continue;
    }
    if (options.time_window && (m.minutes < options.time_window->first ||
                                m.minutes > options.time_window->second)) {
      result.exclusions.push_back(m.recording_id + ": outside analysis window");
      continue;
    }
    if (!responses.contains(m.recording_id)) {
      result.exclusions.push_back(m.recording_id + ": no index values");
      continue;
    }
    kept.push_back(m);
  }

  std::map<std::pair<IndividualKey, int>, const Eigen::VectorXd*> by_key;
  for (const auto& m : kept)
    by_key[{key_of(m), m.year}] = &responses.at(m.recording_id);

  result.dataset.design = options.design;
  result.dataset.response_names = index_names();
  result.dataset.individuals = group_individuals(kept);
  for (auto& ind : result.dataset.individuals) {
    const IndividualKey key{ind.site_id, ind.month, ind.day, ind.minutes};
    for (auto& obs : ind.obs) {
      auto it = by_key.find({key, obs.year});
      if (it == by_key.end())
        throw MissingResponseError("no index values for " + ind.site_id);
      obs.y = *it->second;
    }
  }
  return result;
}

namespace {

json dataset_to_json(const AssembledDataset& data) {
  json root;
  root["schema"] = "soundscape-dataset/1";
  root["design"] = {{"year_min", data.design.year_min},
                    {"year_max", data.design.year_max},
                    {"first_effect_year", data.design.first_effect_year}};
  root["response_names"] = data.response_names;
  ModelToggles full;
  root["design_columns"] = design_column_names(data.design, full);

  json inds = json::array();
  for (const auto& ind : data.individuals) {
    json j;
    j["site"] = ind.site_id;
    j["month"] = ind.month;
    j["day"] = ind.day;
    j["time"] = minutes_to_hhmm(ind.minutes);
    j["treatment"] = ind.treatment;
    json years = json::array(), rain = json::array(), ys = json::array();
    for (const auto& obs : ind.obs) {
      years.push_back(obs.year);
      rain.push_back(obs.rain ? 1 : 0);
      json yrow = json::array();
      for (Eigen::Index k = 0; k < obs.y.size(); ++k) yrow.push_back(obs.y[k]);
      ys.push_back(std::move(yrow));
    }
    j["years"] = std::move(years);
    j["rain"] = std::move(rain);
    j["responses"] = std::move(ys);
    // Audit copy of the full design matrix rows for this individual.
    const Eigen::MatrixXd x = build_design_uni(ind, data.design, full);
    json xrows = json::array();
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < x.cols(); ++c) row.push_back(x(r, c));
      xrows.push_back(std::move(row));
    }
    j["design_uni"] = std::move(xrows);
    inds.push_back(std::move(j));
  }
  root["individuals"] = std::move(inds);
  return root;
}

}  // namespace

void save_dataset_json(const AssembledDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  out << dataset_to_json(data).dump(2) << '\n';
  if (!out) throw IoError("write failure on " + path);
}

AssembledDataset load_dataset_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    if (root.at("schema").get<std::string>() != "soundscape-dataset/1")
      throw ConfigError(path + ": unsupported schema");
    AssembledDataset data;
    const json& d = root.at("design");
    data.design.year_min = d.at("year_min").get<int>();
    data.design.year_max = d.at("year_max").get<int>();
    data.design.first_effect_year = d.at("first_effect_year").get<int>();
    data.response_names =
        root.at("response_names").get<std::vector<std::string>>();
    const int k = data.response_dim();
    for (const json& j : root.at("individuals")) {
      IndividualSoundscape ind;
      ind.site_id = j.at("site").get<std::string>();
      ind.month = j.at("month").get<int>();
      ind.day = j.at("day").get<int>();
      int y_, m_, d_;
      parse_datetime("2000-01-01 " + j.at("time").get<std::string>() + ":00",
                     y_, m_, d_, ind.minutes);
      ind.treatment = j.at("treatment").get<bool>();
      const json& years = j.at("years");
      const json& rain = j.at("rain");
      const json& ys = j.at("responses");
      if (years.size() != rain.size() || years.size() != ys.size())
        throw ConfigError(path + ": inconsistent per-year arrays");
      for (std::size_t r = 0; r < years.size(); ++r) {
        YearObservation obs;
        obs.year = years[r].get<int>();
        obs.rain = rain[r].get<int>() != 0;
        if (ys[r].size() != static_cast<std::size_t>(k))
          throw MissingResponseError(path + ": response row with " +
                                     std::to_string(ys[r].size()) +
                                     " values, expected " + std::to_string(k));
        obs.y.resize(k);
        for (int c = 0; c < k; ++c)
          obs.y[c] = ys[r][static_cast<std::size_t>(c)].get<double>();
        ind.obs.push_back(std::move(obs));
      }
      data.individuals.push_back(std::move(ind));
    }
    sort_individuals(data.individuals);
    return data;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t dataset_hash(const AssembledDataset& data) {
  return fnv1a64(dataset_to_json(data).dump());
}

bool CountReport::ok() const {
  return mismatches().empty() && total_expected == total_actual;
}

std::vector<CountCell> CountReport::mismatches() const {
  std::vector<CountCell> out;
  for (const auto& c : cells)
    if (c.expected != c.actual) out.push_back(c);
  return out;
}

CountReport validate_counts(const AssembledDataset& data,
                            const std::vector<CountCell>& expected) {
  std::map<std::pair<std::string, int>, CountCell> cells;
  for (const auto& e : expected) {
    CountCell c = e;
    c.actual = 0;
    cells[{e.site, e.year}] = c;
  }
  for (const auto& ind : data.individuals)
    for (const auto& obs : ind.obs) {
      auto& c = cells[{ind.site_id, obs.year}];
      c.site = ind.site_id;
      c.year = obs.year;
      ++c.actual;
    }

  CountReport report;
  for (auto& [key, c] : cells) {
    report.total_expected += c.expected;
    report.total_actual += c.actual;
    report.cells.push_back(c);
  }
  return report;
}

CountReport validate_counts(const AssembledDataset& data,
                            const std::string& expected_csv) {
  csv::Table t = csv::read_file(expected_csv);
  const std::size_t c_site = t.col("site");
  const std::size_t c_year = t.col("year");
  const std::size_t c_count = t.col("count");
  std::vector<CountCell> expected;
  for (const auto& row : t.rows) {
    CountCell c;
    c.site = row[c_site];
    c.year = static_cast<int>(csv::parse_long(row[c_year], expected_csv));
    c.expected = csv::parse_long(row[c_count], expected_csv);
    expected.push_back(std::move(c));
  }
  return validate_counts(data, expected);
}

}  // namespace soundscape
