#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace limeout {

// Flat "key = value" configuration file.  '#' starts a comment; blank
// lines are ignored; keys may not repeat.  Values keep their raw text;
// typed accessors convert on demand and throw ConfigError with the key
// name on any problem.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_text(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  // Comma-separated list, items trimmed, empties rejected.
  std::vector<std::string> get_list(const std::string& key) const;

  // Throws ConfigError naming any present key outside the allowed set.
  // Keys matching "<algorithm>.<hyperparameter>" are validated separately.
  void require_known_keys(const std::set<std::string>& allowed) const;

  // Keys of the form "prefix.rest", mapped rest -> numeric value.
  std::map<std::string, double> prefixed_doubles(
      const std::string& prefix) const;

  // All entries sorted by key, for canonical echoing into reports.
  std::vector<std::pair<std::string, std::string>> sorted_entries() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace limeout
