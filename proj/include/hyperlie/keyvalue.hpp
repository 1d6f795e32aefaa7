#pragma once

// Flat "key = value" files: one pair per line, '#' starts a comment, blank
// lines ignored, duplicate keys rejected.

#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperlie {

/// Bad config values or unreadable/unwritable files (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof())
    throw ConfigError("bad value for '" + key + "': '" + text + "'");
  return value;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

}  // namespace detail

inline KeyValues read_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = detail::trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
    if (!kv.emplace(key, detail::trim(line.substr(eq + 1))).second)
      throw ConfigError("duplicate key '" + key + "'");
  }
  return kv;
}

/// Unsigned 64-bit value; rejects signs, which stream extraction would wrap.
namespace detail {
inline std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("'" + key + "' must be an unsigned integer, got '" + text + "'");
  return parse_value<std::uint64_t>(key, text);
}
}  // namespace detail

}  // namespace hyperlie
