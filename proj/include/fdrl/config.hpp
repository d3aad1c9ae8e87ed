#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fdrl {

/// Flat key=value text config. '#' starts a comment, blank lines ignored.
/// Every lookup first consults the environment: key "t_p" is overridden by
/// FDRL_T_P when set.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  static std::string env_name(const std::string& key);

  bool has(const std::string& key) const;

  std::string str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;

  long integer(const std::string& key) const;
  long integer(const std::string& key, long fallback) const;

  bool flag(const std::string& key, bool fallback) const;

  /// Comma-separated list of numbers.
  std::vector<double> numbers(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::optional<std::string> lookup(const std::string& key) const;

  std::map<std::string, std::string> values_;
};

}  // namespace fdrl
