#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace linres {

// Flat key-value experiment config: one `section.key = value` per line, '#'
// lines are comments. Serialization is sorted by key so an echoed config is a
// canonical, diffable record of the run.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string trimmed = trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": expected key = value");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": empty key");
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static KeyValueConfig parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  void set(const std::string& key, const std::string& value) {
    values_[key] = value;
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string require_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
      throw std::invalid_argument("missing config key: " + key);
    return it->second;
  }

  long long get_int(const std::string& key, long long fallback) const {
    return has(key) ? to_int(key, require_string(key)) : fallback;
  }

  long long require_int(const std::string& key) const {
    return to_int(key, require_string(key));
  }

  double get_double(const std::string& key, double fallback) const {
    return has(key) ? to_double(key, require_string(key)) : fallback;
  }

  double require_double(const std::string& key) const {
    return to_double(key, require_string(key));
  }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = require_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config key " + key + ": expected boolean, got " + v);
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string v = require_string(key);
    try {
      std::size_t pos = 0;
      const std::uint64_t out = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing characters");
      return out;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key " + key + ": expected unsigned integer, got " + v);
    }
  }

  std::string to_text() const {
    std::ostringstream out;
    for (const auto& [key, value] : values_) out << key << " = " << value << "\n";
    return out.str();
  }

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  static std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
  }

  static long long to_int(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const long long out = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing characters");
      return out;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key " + key + ": expected integer, got " + v);
    }
  }

  static double to_double(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing characters");
      return out;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key " + key + ": expected number, got " + v);
    }
  }

  std::map<std::string, std::string> values_;
};

}  // namespace linres
