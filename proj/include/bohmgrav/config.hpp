#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bohmgrav {

inline constexpr std::string_view kToolVersion = "bohmgrav 0.1.0";

/// key = value run configuration.  '#' starts a comment; unknown keys are
/// rejected against the per-subcommand registry before a run starts.
struct RunConfig {
  std::map<std::string, std::string> values;

  static RunConfig from_file(const std::string& path);

  void set(const std::string& key, const std::string& value) { values[key] = value; }
  bool has(const std::string& key) const { return values.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;

  /// Throws std::domain_error naming the first key not in `allowed`.
  void require_known(std::span<const std::string_view> allowed) const;

  /// Sorted "key = value" lines; the hash input.
  std::string canonical() const;
  std::uint64_t hash() const;  // FNV-1a over canonical()
};

/// "1,2,4,8" -> doubles; raises std::domain_error on malformed entries.
std::vector<double> parse_double_list(const std::string& text);

}  // namespace bohmgrav
