#include "config_file.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <istream>
#include <set>

namespace lsint::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Drops a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view s) {
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == quote)
        quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

std::string scalar(std::string_view s, std::string_view where) {
  s = trim(s);
  if (s.empty())
    throw ConfigError(fmt::format("{}: empty value", where));
  if (s.front() == '"' || s.front() == '\'') {
    if (s.size() < 2 || s.back() != s.front())
      throw ConfigError(fmt::format("{}: unterminated string", where));
    return std::string(s.substr(1, s.size() - 2));
  }
  if (s.find_first_of(" \t\"'[]=") != std::string_view::npos)
    throw ConfigError(fmt::format("{}: bare values cannot contain spaces or brackets", where));
  return std::string(s);
}

std::vector<std::string> split_array(std::string_view body, std::string_view where) {
  std::vector<std::string> out;
  char quote = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    const char c = i < body.size() ? body[i] : ',';
    if (quote) {
      if (c == quote)
        quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == ',') {
      const auto item = trim(body.substr(start, i - start));
      if (!item.empty())
        out.push_back(scalar(item, where));
      else if (i < body.size())
        throw ConfigError(fmt::format("{}: empty array element", where));
      start = i + 1;
    }
  }
  if (quote)
    throw ConfigError(fmt::format("{}: unterminated string", where));
  return out;
}

} // namespace

std::vector<ConfigEntry> parse_config(std::istream& in, std::string_view source) {
  std::vector<ConfigEntry> entries;
  std::set<std::string> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = fmt::format("{}:{}", source, line_no);
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty())
      continue;
    if (line.front() == '[')
      throw ConfigError(fmt::format("{}: sections are not supported; use flat keys", where));
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(fmt::format("{}: expected 'key = value'", where));

    ConfigEntry entry;
    entry.line = line_no;
    const auto key = trim(line.substr(0, eq));
    if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
        }))
      throw ConfigError(fmt::format("{}: invalid key '{}'", where, key));
    entry.key.assign(key);
    std::replace(entry.key.begin(), entry.key.end(), '_', '-');
    if (!seen.insert(entry.key).second)
      throw ConfigError(fmt::format("{}: key '{}' repeated", where, entry.key));

    const auto value = trim(line.substr(eq + 1));
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']')
        throw ConfigError(fmt::format("{}: unterminated array", where));
      entry.values = split_array(value.substr(1, value.size() - 2), where);
      if (entry.values.empty())
        throw ConfigError(fmt::format("{}: empty array", where));
    } else {
      entry.values.push_back(scalar(value, where));
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

} // namespace lsint::cli
