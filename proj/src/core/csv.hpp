#pragma once

#include <charconv>
#include <string>
#include <vector>

namespace soundscape {

// Minimal comma-separated support: no quoting, '.' decimal separator,
// UTF-8 passthrough. Matches the file formats this toolkit defines.
namespace csv {

std::vector<std::string> split(const std::string& line);

// Shortest round-trip representation (std::to_chars), so written files are
// byte-stable and re-parse to the identical double.
std::string format(double v);

double parse_double(const std::string& field, const std::string& context);
long parse_long(const std::string& field, const std::string& context);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws ConfigError when absent.
  std::size_t col(const std::string& name) const;
};

Table read_file(const std::string& path);
void write_file(const std::string& path,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

}  // namespace csv
}  // namespace soundscape
