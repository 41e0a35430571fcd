#include "core/csv.hpp"

#include <fstream>

#include "core/errors.hpp"

namespace soundscape::csv {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string format(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericalError("double formatting failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& field, const std::string& context) {
  double v = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ConfigError(context + ": bad numeric field '" + field + "'");
  return v;
}

long parse_long(const std::string& field, const std::string& context) {
  long v = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ConfigError(context + ": bad integer field '" + field + "'");
  return v;
}

std::size_t Table::col(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ConfigError("missing column '" + name + "'");
}

Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Table t;
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (first) {
      t.header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != t.header.size())
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected " + std::to_string(t.header.size()) +
                        " fields, got " + std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
  }
  if (first) throw ConfigError(path + ": empty file (no header)");
  return t;
}

void write_file(const std::string& path,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace soundscape::csv
