#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lsint::cli {

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// `key = value` from a flat config file. Arrays `[a, b]` give several values.
struct ConfigEntry {
  std::string key;
  std::vector<std::string> values;
  int line = 0;
};

/// Flat TOML subset: one `key = value` per line, `#` comments, quoted or bare
/// scalars, single-line arrays. Underscores in keys read as dashes.
/// Section headers and repeated keys are rejected.
std::vector<ConfigEntry> parse_config(std::istream& in, std::string_view source = "config");

} // namespace lsint::cli
