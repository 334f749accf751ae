#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace trajthermo::cli {

/// INI-style configuration: `[section]` headers and `key = value` lines,
/// `;` or `#` comments. Every key read through the accessors is marked as
/// used; `reject_unused()` fails on anything a command did not consume, so
/// misspelt keys never pass silently.
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const;
  bool has_section(const std::string& section) const;

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::optional<double> get_optional_double(const std::string& key) const;

  /// Throws ContractViolation naming every key that was never read.
  void reject_unused() const;

  /// "section.key" -> raw value, sorted.
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  const std::string& raw(const std::string& key) const;

  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> used_;
};

}  // namespace trajthermo::cli
