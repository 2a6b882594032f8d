#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace partgrasp {

// Parsed subset of TOML: [section] headers, `key = value` pairs with
// numbers, booleans, quoted strings and flat arrays of those, `#` comments.
class Config {
 public:
  using Array = std::vector<std::variant<double, bool, std::string>>;
  using Value = std::variant<double, bool, std::string, Array>;

  static Config parse(std::istream& in);
  static Config parse_string(const std::string& text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;

  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  std::vector<std::string> get_strings(const std::string& section, const std::string& key,
                                       const std::vector<std::string>& fallback) const;

  void set(const std::string& section, const std::string& key, Value value);

 private:
  const Value* find(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, Value>> sections_;
};

}  // namespace partgrasp
