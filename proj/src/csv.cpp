#include "bohmgrav/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bohmgrav {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (const auto& c : table.comments) os << "# " << c << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) os << ",";
    os << table.columns[i];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::domain_error("write_csv: row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      os << format_double(row[i]);
    }
    os << "\n";
  }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t start = 1;
      while (start < line.size() && line[start] == ' ') ++start;
      table.comments.push_back(line.substr(start));
      continue;
    }
    if (!header_seen) {
      table.columns = split(line, ',');
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != table.columns.size())
      throw std::domain_error("read_csv: row width differs from header: " + line);
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      char* end = nullptr;
      row[i] = std::strtod(cells[i].c_str(), &end);
      if (end == cells[i].c_str() || *end != '\0')
        throw std::domain_error("read_csv: non-numeric cell '" + cells[i] + "'");
    }
    table.rows.push_back(std::move(row));
  }
  if (!header_seen) throw std::domain_error("read_csv: missing header row");
  return table;
}

}  // namespace bohmgrav
