#include "tcsde/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace tcsde {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  const std::string k = trim(key);
  if (k.empty()) throw std::invalid_argument("config: empty key");
  values_[k] = trim(value);
}

void Config::load_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::ostringstream msg;
      msg << origin << ":" << line_no << ": expected 'key = value', got '" << t << "'";
      throw std::invalid_argument(msg.str());
    }
    set(t.substr(0, eq), t.substr(eq + 1));
  }
}

void Config::apply_overrides(const std::vector<std::string>& assignments) {
  for (const std::string& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("--set expects key=value, got '" + a + "'");
    set(a.substr(0, eq), a.substr(eq + 1));
  }
}

bool Config::contains(const std::string& key) const {
  return values_.find(key) != values_.end();
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const char* s = it->second.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("config key '" + key + "': '" + it->second +
                                "' is not a number");
  return v;
}

long Config::get_long(const std::string& key, long fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const char* s = it->second.c_str();
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("config key '" + key + "': '" + it->second +
                                "' is not an integer");
  return v;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const char* s = it->second.c_str();
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0' || errno == ERANGE || it->second.find('-') != std::string::npos)
    throw std::invalid_argument("config key '" + key + "': '" + it->second +
                                "' is not an unsigned integer");
  return v;
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  std::istringstream in(it->second);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    const std::string t = trim(cell);
    const char* s = t.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s, &end);
    if (t.empty() || end == s || *end != '\0' || errno == ERANGE)
      throw std::invalid_argument("config key '" + key + "': '" + cell +
                                  "' is not a number");
    out.push_back(v);
  }
  if (out.empty())
    throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

void Config::require_known(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown configuration key '" + key + "'");
  }
}

}  // namespace tcsde
