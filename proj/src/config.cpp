#include "bohmgrav/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bohmgrav {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw std::domain_error("config: key '" + key + "' has non-numeric value '" + text +
                            "'");
  return v;
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("config: cannot open '" + path + "'");
  RunConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::domain_error("config: line " + std::to_string(lineno) +
                              " is not 'key = value': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::domain_error("config: empty key on line " + std::to_string(lineno));
    cfg.values[key] = value;
  }
  return cfg;
}

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : parse_double(key, it->second);
}

std::size_t RunConfig::get_size(const std::string& key, std::size_t fallback) const {
  const double v = get_double(key, static_cast<double>(fallback));
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw std::domain_error("config: key '" + key + "' must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::uint64_t RunConfig::get_uint64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
  if (end == it->second.c_str() || *end != '\0')
    throw std::domain_error("config: key '" + key + "' must be an unsigned integer");
  return v;
}

void RunConfig::require_known(std::span<const std::string_view> allowed) const {
  for (const auto& [key, value] : values) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::domain_error("config: unknown key '" + key + "'");
  }
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  for (const auto& [key, value] : values) os << key << " = " << value << "\n";
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  const std::string text = canonical();
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, ',')) {
    cur = trim(cur);
    if (cur.empty()) continue;
    out.push_back(parse_double("list entry", cur));
  }
  if (out.empty()) throw std::domain_error("config: empty numeric list '" + text + "'");
  return out;
}

}  // namespace bohmgrav
