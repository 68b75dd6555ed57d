#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-oriented config: `[section]` headers and `key = value` lines.
// `#` starts a comment. Sections repeat; order is preserved.
struct ConfigSection {
  std::string name;
  std::map<std::string, std::string> kv;
  int line = 0;

  bool has(const std::string& k) const { return kv.count(k) > 0; }
  std::string get(const std::string& k) const;
  std::string get_or(const std::string& k, const std::string& d) const;
  double num(const std::string& k) const;
  double num_or(const std::string& k, double d) const;
  long long integer(const std::string& k) const;
  long long integer_or(const std::string& k, long long d) const;
  bool flag_or(const std::string& k, bool d) const;
};

struct Config {
  std::vector<ConfigSection> sections;
  const ConfigSection* first(const std::string& name) const;
  std::vector<const ConfigSection*> all(const std::string& name) const;
};

Config parse_config(const std::string& text);
Config parse_config_file(const std::string& path);

}  // namespace heatlab
