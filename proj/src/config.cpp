#include "mbq/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mbq {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, z = s.size();
  while (a < z && std::isspace((unsigned char)s[a])) ++a;
  while (z > a && std::isspace((unsigned char)s[z - 1])) --z;
  return s.substr(a, z - a);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& raw, const std::string& path) {
  const std::string v = trim(raw);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    throw ConfigError(path + ": expected a number, got '" + v + "'");
  return x;
}

long parse_long(const std::string& raw, const std::string& path) {
  const std::string v = trim(raw);
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size())
    throw ConfigError(path + ": expected an integer, got '" + v + "'");
  return x;
}

std::string field_path(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_string(buf.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      cfg.data_[section];  // register even if empty
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value' or '[section]'");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key before any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.data_[section][key] = value;
  }
  return cfg;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  return s != data_.end() && s->second.count(key) > 0;
}

void ConfigFile::missing(const std::string& section, const std::string& key) const {
  throw ConfigError(field_path(section, key) + ": required key missing (" + origin_ + ")");
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) missing(section, key);
  auto k = s->second.find(key);
  if (k == s->second.end()) missing(section, key);
  return k->second;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double ConfigFile::get_number(const std::string& section, const std::string& key) const {
  return parse_double(get_string(section, key), field_path(section, key));
}

double ConfigFile::get_number(const std::string& section, const std::string& key,
                              double fallback) const {
  return has(section, key) ? get_number(section, key) : fallback;
}

long ConfigFile::get_integer(const std::string& section, const std::string& key) const {
  return parse_long(get_string(section, key), field_path(section, key));
}

long ConfigFile::get_integer(const std::string& section, const std::string& key,
                             long fallback) const {
  return has(section, key) ? get_integer(section, key) : fallback;
}

bool ConfigFile::get_flag(const std::string& section, const std::string& key,
                          bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(field_path(section, key) + ": expected a boolean, got '" + v + "'");
}

std::vector<double> ConfigFile::get_numbers(const std::string& section,
                                            const std::string& key) const {
  const std::string path = field_path(section, key);
  std::vector<double> out;
  for (const std::string& tok : split_tokens(get_string(section, key)))
    out.push_back(parse_double(tok, path));
  return out;
}

std::vector<long> ConfigFile::get_integers(const std::string& section,
                                           const std::string& key) const {
  const std::string path = field_path(section, key);
  std::vector<long> out;
  for (const std::string& tok : split_tokens(get_string(section, key)))
    out.push_back(parse_long(tok, path));
  return out;
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
  data_[section][key] = value;
}

std::vector<std::string> ConfigFile::sections() const {
  std::vector<std::string> out;
  for (const auto& kv : data_) out.push_back(kv.first);
  return out;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
  std::vector<std::string> out;
  auto s = data_.find(section);
  if (s == data_.end()) return out;
  for (const auto& kv : s->second) out.push_back(kv.first);
  return out;
}

}  // namespace mbq
