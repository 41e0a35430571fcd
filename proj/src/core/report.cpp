#include "core/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "core/csv.hpp"
#include "core/errors.hpp"

namespace soundscape {

using nlohmann::json;

namespace {

json summary_to_json(const std::vector<SummaryRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"name", r.name},
                   {"median", r.median},
                   {"ci_low", r.ci_low},
                   {"ci_high", r.ci_high},
                   {"significant", r.significant}});
  return arr;
}

std::vector<SummaryRow> summary_from_json(const json& arr) {
  std::vector<SummaryRow> rows;
  for (const auto& j : arr) {
    SummaryRow r;
    r.name = j.at("name").get<std::string>();
    r.median = j.at("median").get<double>();
    r.ci_low = j.at("ci_low").get<double>();
    r.ci_high = j.at("ci_high").get<double>();
    r.significant = j.at("significant").get<bool>();
    rows.push_back(std::move(r));
  }
  return rows;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                    .get<double>();
  return m;
}

}  // namespace

void save_report_json(const ModelReport& report, const std::string& path) {
  json root;
  root["schema"] = "soundscape-report/1";
  root["model"] = report.model;
  root["variant"] = report.variant;
  root["response"] = report.response;
  root["data_hash"] = report.data_hash;
  root["n_obs"] = report.n_obs;
  root["n_individuals"] = report.n_individuals;
  root["summary"] = summary_to_json(report.summary);
  root["waic"] = {{"lppd", report.waic.lppd},
                  {"p_waic", report.waic.p_waic},
                  {"waic", report.waic.waic}};
  json diag = json::array();
  for (const auto& d : report.diag) {
    json j = {{"name", d.name},
              {"ess", d.ess},
              {"geweke_z", d.geweke_z},
              {"degenerate", d.degenerate}};
    // JSON has no Inf literal; R-hat of a stuck pair of chains is encoded
    // as null and read back as infinity.
    if (std::isfinite(d.rhat))
      j["rhat"] = d.rhat;
    else
      j["rhat"] = nullptr;
    diag.push_back(std::move(j));
  }
  root["diagnostics"] = std::move(diag);
  if (report.correlations) {
    const auto& c = *report.correlations;
    json sig = json::array();
    for (Eigen::Index i = 0; i < c.significant.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < c.significant.cols(); ++j)
        row.push_back(static_cast<bool>(c.significant(i, j)));
      sig.push_back(std::move(row));
    }
    root["correlations"] = {{"names", c.names},
                            {"median", matrix_to_json(c.median)},
                            {"ci_low", matrix_to_json(c.ci_low)},
                            {"ci_high", matrix_to_json(c.ci_high)},
                            {"significant", std::move(sig)}};
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  out << root.dump(2) << '\n';
  if (!out) throw IoError("write failure on " + path);
}

ModelReport load_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json root;
  try {
    in >> root;
    if (root.at("schema").get<std::string>() != "soundscape-report/1")
      throw ConfigError(path + ": unsupported schema");
    ModelReport rep;
    rep.model = root.at("model").get<std::string>();
    rep.variant = root.at("variant").get<std::string>();
    rep.response = root.at("response").get<std::string>();
    rep.data_hash = root.at("data_hash").get<uint64_t>();
    rep.n_obs = root.at("n_obs").get<long>();
    rep.n_individuals = root.at("n_individuals").get<long>();
    rep.summary = summary_from_json(root.at("summary"));
    rep.waic.lppd = root.at("waic").at("lppd").get<double>();
    rep.waic.p_waic = root.at("waic").at("p_waic").get<double>();
    rep.waic.waic = root.at("waic").at("waic").get<double>();
    for (const auto& j : root.at("diagnostics")) {
      DiagnosticRow d;
      d.name = j.at("name").get<std::string>();
      d.rhat = j.at("rhat").is_null()
                   ? std::numeric_limits<double>::infinity()
                   : j.at("rhat").get<double>();
      d.ess = j.at("ess").get<double>();
      d.geweke_z = j.at("geweke_z").get<double>();
      d.degenerate = j.at("degenerate").get<bool>();
      rep.diag.push_back(std::move(d));
    }
    if (root.contains("correlations")) {
      const json& c = root.at("correlations");
      CorrelationReport corr;
      corr.names = c.at("names").get<std::vector<std::string>>();
      corr.median = matrix_from_json(c.at("median"));
      corr.ci_low = matrix_from_json(c.at("ci_low"));
      corr.ci_high = matrix_from_json(c.at("ci_high"));
      const json& sig = c.at("significant");
      corr.significant.resize(corr.median.rows(), corr.median.cols());
      for (Eigen::Index i = 0; i < corr.median.rows(); ++i)
        for (Eigen::Index j = 0; j < corr.median.cols(); ++j)
          corr.significant(i, j) =
              sig[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                  .get<bool>();
      rep.correlations = std::move(corr);
    }
    return rep;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows)
    out.push_back({r.name, csv::format(r.median), csv::format(r.ci_low),
                   csv::format(r.ci_high), r.significant ? "1" : "0"});
  csv::write_file(path, {"parameter", "median", "ci_low", "ci_high",
                         "significant"},
                  out);
}

void write_effect_csv(const ModelReport& report, const std::string& column,
                      const std::string& path) {
  std::vector<std::vector<std::string>> out;
  const std::string suffix = ":" + column;
  for (const auto& r : report.summary) {
    if (!r.name.ends_with(suffix)) continue;
    const std::string index = r.name.substr(0, r.name.size() - suffix.size());
    out.push_back({index, csv::format(r.median), csv::format(r.ci_low),
                   csv::format(r.ci_high), r.significant ? "1" : "0"});
  }
  csv::write_file(path, {"index", "median", "ci_low", "ci_high",
                         "significant"},
                  out);
}

void write_correlations_csv(const CorrelationReport& rep,
                            const std::string& path) {
  std::vector<std::vector<std::string>> out;
  const auto k = static_cast<Eigen::Index>(rep.names.size());
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      out.push_back({rep.names[static_cast<std::size_t>(i)],
                     rep.names[static_cast<std::size_t>(j)],
                     csv::format(rep.median(i, j)),
                     csv::format(rep.ci_low(i, j)),
                     csv::format(rep.ci_high(i, j)),
                     rep.significant(i, j) ? "1" : "0"});
  csv::write_file(path, {"index_a", "index_b", "median", "ci_low", "ci_high",
                         "significant"},
                  out);
}

void write_diagnostics_csv(const std::vector<DiagnosticRow>& rows,
                           const std::string& path) {
  std::vector<std::vector<std::string>> out;
  for (const auto& d : rows)
    out.push_back({d.name,
                   std::isfinite(d.rhat) ? csv::format(d.rhat) : "inf",
                   csv::format(d.ess), csv::format(d.geweke_z),
                   d.degenerate ? "1" : "0"});
  csv::write_file(path, {"parameter", "rhat", "ess", "geweke_z",
                         "degenerate"},
                  out);
}

void write_draws_csv(const PosteriorDraws& draws, int chain,
                     const std::string& path) {
  if (chain < 0 || chain >= draws.n_chains)
    throw ConfigError("chain index out of range");
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  for (std::size_t i = 0; i < draws.names.size(); ++i) {
    if (i) out << ',';
    out << draws.names[i];
  }
  out << '\n';
  const auto block = draws.chain(chain);
  for (Eigen::Index r = 0; r < block.rows(); ++r) {
    for (Eigen::Index c = 0; c < block.cols(); ++c) {
      if (c) out << ',';
      out << csv::format(block(r, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failure on " + path);
}

PosteriorDraws load_draws_csv(const std::vector<std::string>& paths) {
  if (paths.empty()) throw ConfigError("no draw files given");
  PosteriorDraws out;
  std::vector<Eigen::MatrixXd> chains;
  for (const auto& path : paths) {
    csv::Table t = csv::read_file(path);
    if (out.names.empty()) {
      out.names = t.header;
    } else if (out.names != t.header) {
      throw ConfigError(path + ": parameter columns differ across chains");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(t.rows.size()),
                      static_cast<Eigen::Index>(t.header.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      for (std::size_t c = 0; c < t.header.size(); ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            csv::parse_double(t.rows[r][c], path);
    chains.push_back(std::move(m));
  }
  const Eigen::Index len = chains.front().rows();
  for (const auto& c : chains)
    if (c.rows() != len)
      throw ConfigError("chains have different retained lengths");
  out.n_chains = static_cast<int>(chains.size());
  out.retained_per_chain = len;
  out.draws.resize(len * out.n_chains,
                   static_cast<Eigen::Index>(out.names.size()));
  for (int c = 0; c < out.n_chains; ++c)
    out.draws.middleRows(static_cast<Eigen::Index>(c) * len, len) =
        chains[static_cast<std::size_t>(c)];
  return out;
}

std::vector<ComparisonRow> compare_reports(
    const std::vector<ModelReport>& reports) {
  if (reports.empty()) throw ConfigError("no reports to compare");
  for (const auto& r : reports)
    if (r.data_hash != reports.front().data_hash)
      throw DataMismatchError(
          "reports were fit to different datasets (hash mismatch)");
  std::vector<ComparisonRow> rows;
  for (const auto& r : reports) {
    ComparisonRow row;
    row.label = r.model + "/" + r.variant;
    row.waic = r.waic;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const ComparisonRow& a, const ComparisonRow& b) {
              return a.waic.waic < b.waic.waic;
            });
  rows.front().preferred = true;
  return rows;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows,
                          const std::string& path) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows)
    out.push_back({r.label, csv::format(r.waic.waic),
                   csv::format(r.waic.lppd), csv::format(r.waic.p_waic),
                   r.preferred ? "1" : "0"});
  csv::write_file(path, {"model", "waic", "lppd", "p_waic", "preferred"},
                  out);
}

}  // namespace soundscape
