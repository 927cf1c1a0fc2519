#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bohmgrav {

/// Numeric CSV with '#'-prefixed comment lines above a header row.
struct CsvTable {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// %.17g formatting; byte-stable for identical inputs.
std::string format_double(double v);

void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);

}  // namespace bohmgrav
