#include "limeout/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "limeout/errors.hpp"

namespace limeout {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

KeyValueConfig KeyValueConfig::parse_text(const std::string& text) {
  KeyValueConfig config;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.resize(comment);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t equals = line.find('=');
    if (equals == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    std::string key = trim(line.substr(0, equals));
    std::string value = trim(line.substr(equals + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    if (value.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty value for key '" + key + "'");
    if (!config.values_.emplace(key, value).second)
      throw ConfigError("config key repeated: " + key);
  }
  return config;
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) > 0;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw ConfigError("missing required config key: " + key);
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& text = it->second;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() ||
      !std::isfinite(v))
    throw ConfigError("config key '" + key + "' needs a finite number, got '" +
                      text + "'");
  return v;
}

long long KeyValueConfig::get_int(const std::string& key,
                                  long long fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& text = it->second;
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError("config key '" + key + "' needs an integer, got '" +
                      text + "'");
  return v;
}

std::uint64_t KeyValueConfig::get_seed(const std::string& key,
                                       std::uint64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& text = it->second;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError("config key '" + key +
                      "' needs a non-negative integer, got '" + text + "'");
  return v;
}

std::vector<std::string> KeyValueConfig::get_list(const std::string& key) const {
  std::vector<std::string> items;
  std::string text = get_string(key);
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t comma = text.find(',', i);
    std::size_t stop = comma == std::string::npos ? text.size() : comma;
    std::string item = trim(text.substr(i, stop - i));
    if (item.empty())
      throw ConfigError("config key '" + key + "' has an empty list item");
    items.push_back(item);
    if (comma == std::string::npos) break;
    i = comma + 1;
  }
  return items;
}

void KeyValueConfig::require_known_keys(
    const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    (void)value;
    if (allowed.count(key)) continue;
    if (key.find('.') != std::string::npos) continue;  // algorithm overrides
    throw ConfigError("unknown config key: " + key);
  }
}

std::map<std::string, double> KeyValueConfig::prefixed_doubles(
    const std::string& prefix) const {
  std::map<std::string, double> out;
  std::string want = prefix + ".";
  for (const auto& [key, value] : values_) {
    (void)value;
    if (key.rfind(want, 0) != 0) continue;
    std::string rest = key.substr(want.size());
    if (rest.empty()) throw ConfigError("malformed config key: " + key);
    out[rest] = get_double(key, 0.0);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>>
KeyValueConfig::sorted_entries() const {
  std::vector<std::pair<std::string, std::string>> entries(values_.begin(),
                                                           values_.end());
  return entries;  // std::map iterates in key order already
}

}  // namespace limeout
