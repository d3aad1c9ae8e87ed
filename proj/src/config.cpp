#include "fdrl/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fdrl {
namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (trim(text.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config: key '" + key + "' is not a number: '" + text + "'");
}

}  // namespace

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " has no '=': '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " has empty key");
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

std::string Config::env_name(const std::string& key) {
  std::string name = "FDRL_";
  for (char c : key)
    name += std::isalnum(static_cast<unsigned char>(c))
                ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                : '_';
  return name;
}

std::optional<std::string> Config::lookup(const std::string& key) const {
  if (const char* env = std::getenv(env_name(key).c_str())) return std::string(env);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return std::nullopt;
}

bool Config::has(const std::string& key) const { return lookup(key).has_value(); }

std::string Config::str(const std::string& key) const {
  auto v = lookup(key);
  if (!v) throw std::out_of_range("config: missing key '" + key + "'");
  return *v;
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return lookup(key).value_or(fallback);
}

double Config::number(const std::string& key) const { return parse_number(key, str(key)); }

double Config::number(const std::string& key, double fallback) const {
  auto v = lookup(key);
  return v ? parse_number(key, *v) : fallback;
}

long Config::integer(const std::string& key) const {
  double v = number(key);
  long n = static_cast<long>(v);
  if (static_cast<double>(n) != v)
    throw std::invalid_argument("config: key '" + key + "' is not an integer");
  return n;
}

long Config::integer(const std::string& key, long fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool Config::flag(const std::string& key, bool fallback) const {
  auto v = lookup(key);
  if (!v) return fallback;
  std::string s = *v;
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("config: key '" + key + "' is not a boolean: '" + *v + "'");
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::string text = str(key);
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_number(key, item));
  return out;
}

}  // namespace fdrl
