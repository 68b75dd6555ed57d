#include "heatlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace heatlab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string ConfigSection::get(const std::string& k) const {
  auto it = kv.find(k);
  if (it == kv.end())
    throw ConfigError("missing key '" + k + "' in section [" + name + "]");
  return it->second;
}

std::string ConfigSection::get_or(const std::string& k, const std::string& d) const {
  auto it = kv.find(k);
  return it == kv.end() ? d : it->second;
}

double ConfigSection::num(const std::string& k) const {
  try {
    return std::stod(get(k));
  } catch (const std::invalid_argument&) {
    throw ConfigError("key '" + k + "' in [" + name + "] is not a number");
  }
}

double ConfigSection::num_or(const std::string& k, double d) const {
  return has(k) ? num(k) : d;
}

long long ConfigSection::integer(const std::string& k) const {
  try {
    return std::stoll(get(k));
  } catch (const std::invalid_argument&) {
    throw ConfigError("key '" + k + "' in [" + name + "] is not an integer");
  }
}

long long ConfigSection::integer_or(const std::string& k, long long d) const {
  return has(k) ? integer(k) : d;
}

bool ConfigSection::flag_or(const std::string& k, bool d) const {
  if (!has(k)) return d;
  std::string v = get(k);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + k + "' in [" + name + "] is not a boolean");
}

const ConfigSection* Config::first(const std::string& name) const {
  for (auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<const ConfigSection*> Config::all(const std::string& name) const {
  std::vector<const ConfigSection*> out;
  for (auto& s : sections)
    if (s.name == name) out.push_back(&s);
  return out;
}

Config parse_config(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  ConfigSection* cur = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      cfg.sections.push_back({trim(t.substr(1, t.size() - 2)), {}, lineno});
      cur = &cfg.sections.back();
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    if (!cur)
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    std::string k = trim(t.substr(0, eq)), v = trim(t.substr(eq + 1));
    if (k.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    cur->kv[k] = v;
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace heatlab
