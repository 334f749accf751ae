#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

#include "trajthermo/error.hpp"

namespace trajthermo::cli {

namespace pt = boost::property_tree;

namespace {

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ContractViolation(fmt::format("{}: expected a number, got '{}'", key, text));
  }
  return value;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ContractViolation(
        fmt::format("{}: expected a non-negative integer, got '{}'", key, text));
  }
  return value;
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation(fmt::format("cannot read config '{}'", path));
  std::ostringstream text;
  text << in.rdbuf();
  return from_string(text.str());
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  if (text.empty()) return cfg;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ContractViolation(fmt::format("malformed config: {}", e.message()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ContractViolation(
          fmt::format("config key '{}' is outside any [section]", section));
    }
    for (const auto& [key, value] : body) {
      cfg.entries_[section + "." + key] = boost::algorithm::trim_copy(value.data());
    }
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

bool Config::has_section(const std::string& section) const {
  const auto it = entries_.lower_bound(section + ".");
  return it != entries_.end() && it->first.rfind(section + ".", 0) == 0;
}

const std::string& Config::raw(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ContractViolation(fmt::format("missing config key '{}'", key));
  used_.insert(key);
  return it->second;
}

double Config::get_double(const std::string& key) const { return parse_double(key, raw(key)); }

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::size_t Config::get_size(const std::string& key) const {
  return static_cast<std::size_t>(parse_u64(key, raw(key)));
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
  return has(key) ? get_size(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? parse_u64(key, raw(key)) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = raw(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ContractViolation(fmt::format("{}: expected a boolean, got '{}'", key, v));
}

std::string Config::get_string(const std::string& key) const { return raw(key); }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  const std::string& text = raw(key);
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    out.push_back(parse_double(key, boost::algorithm::trim_copy(text.substr(start, end - start))));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> Config::get_optional_double(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

void Config::reject_unused() const {
  std::string unknown;
  for (const auto& [key, value] : entries_) {
    if (used_.count(key) == 0) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty()) {
    throw ContractViolation(fmt::format("unknown config key(s): {}", unknown));
  }
}

}  // namespace trajthermo::cli
