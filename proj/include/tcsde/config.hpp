#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tcsde {

// Flat key = value experiment configuration.  Later assignments win, so
// callers layer defaults, environment, file, and command-line overrides in
// that order.  Keys are free-form here; commands enforce their own known-key
// registry via require_known.
class Config {
 public:
  void set(const std::string& key, const std::string& value);

  // Parses "key = value" lines; blank lines and lines starting with '#'
  // are ignored.  Malformed lines raise std::invalid_argument naming the
  // line; the file content is passed in, not a path.
  void load_text(const std::string& text, const std::string& origin);

  // Applies "key=value" strings from repeated --set flags.
  void apply_overrides(const std::vector<std::string>& assignments);

  bool contains(const std::string& key) const;

  // Typed getters; a present but unparsable value raises
  // std::invalid_argument naming the key.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;

  // Rejects any stored key absent from `known` (std::invalid_argument
  // naming the offending key).
  void require_known(const std::vector<std::string>& known) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace tcsde
