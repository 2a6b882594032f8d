#include "partgrasp/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "partgrasp/errors.hpp"

namespace partgrasp {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Drops a trailing `# comment` that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::variant<double, bool, std::string> parse_scalar(const std::string& raw, int line_no) {
  const std::string t = trim(raw);
  if (t.empty()) throw ParameterError("config line " + std::to_string(line_no) + ": empty value");
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"') {
      throw ParameterError("config line " + std::to_string(line_no) + ": unterminated string");
    }
    return t.substr(1, t.size() - 2);
  }
  if (t == "true") return true;
  if (t == "false") return false;
  std::string digits;
  for (char c : t) {
    if (c != '_') digits.push_back(c);
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw ParameterError("config line " + std::to_string(line_no) + ": cannot parse value '" + t +
                         "'");
  }
  return v;
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(strip_comment(line));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParameterError("config line " + std::to_string(line_no) + ": bad section");
      section = trim(t.substr(1, t.size() - 2));
      cfg.sections_[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string rhs = trim(t.substr(eq + 1));
    if (!rhs.empty() && rhs.front() == '[') {
      if (rhs.back() != ']') throw ParameterError("config line " + std::to_string(line_no) + ": bad array");
      Array arr;
      std::string item;
      bool quoted = false;
      const std::string body = rhs.substr(1, rhs.size() - 2);
      for (char c : body) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
          if (!trim(item).empty()) arr.push_back(parse_scalar(item, line_no));
          item.clear();
        } else {
          item.push_back(c);
        }
      }
      if (!trim(item).empty()) arr.push_back(parse_scalar(item, line_no));
      cfg.sections_[section][key] = std::move(arr);
    } else {
      std::visit([&](auto&& v) { cfg.sections_[section][key] = v; }, parse_scalar(rhs, line_no));
    }
  }
  return cfg;
}

Config Config::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config " + path.string());
  return parse(in);
}

const Config::Value* Config::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (const double* d = std::get_if<double>(v)) return *d;
  throw ParameterError("config [" + section + "] " + key + " must be a number");
}

long long Config::get_int(const std::string& section, const std::string& key, long long fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  const double* d = std::get_if<double>(v);
  if (!d || std::floor(*d) != *d) {
    throw ParameterError("config [" + section + "] " + key + " must be an integer");
  }
  return static_cast<long long>(*d);
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (const bool* b = std::get_if<bool>(v)) return *b;
  throw ParameterError("config [" + section + "] " + key + " must be a boolean");
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (const std::string* s = std::get_if<std::string>(v)) return *s;
  throw ParameterError("config [" + section + "] " + key + " must be a string");
}

std::vector<std::string> Config::get_strings(const std::string& section, const std::string& key,
                                             const std::vector<std::string>& fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  const Array* arr = std::get_if<Array>(v);
  if (!arr) throw ParameterError("config [" + section + "] " + key + " must be an array");
  std::vector<std::string> out;
  for (const auto& item : *arr) {
    const std::string* s = std::get_if<std::string>(&item);
    if (!s) throw ParameterError("config [" + section + "] " + key + " must hold strings");
    out.push_back(*s);
  }
  return out;
}

void Config::set(const std::string& section, const std::string& key, Value value) {
  sections_[section][key] = std::move(value);
}

}  // namespace partgrasp
