// config.hpp -- flat sectioned key-value scenario files.
//
// Grammar (one scenario per file):
//   [section]            starts a section; names are [a-z0-9_-]+
//   key = value          within a section; '#' starts a comment anywhere
//   value                scalar token or whitespace-separated list
// Later duplicate keys overwrite earlier ones. Lookup errors carry the
// "[section] key" path.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbq {

// Configuration problems (parse or validation); mapped to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_number(const std::string& section, const std::string& key) const;
  double get_number(const std::string& section, const std::string& key, double fallback) const;
  long get_integer(const std::string& section, const std::string& key) const;
  long get_integer(const std::string& section, const std::string& key, long fallback) const;
  bool get_flag(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_numbers(const std::string& section, const std::string& key) const;
  std::vector<long> get_integers(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  std::vector<std::string> sections() const;
  std::vector<std::string> keys(const std::string& section) const;

 private:
  // section -> key -> value, insertion-ordered per map iteration (std::map keeps
  // deterministic lexicographic order, which is all determinism requires here)
  std::map<std::string, std::map<std::string, std::string>> data_;
  std::string origin_;
  [[noreturn]] void missing(const std::string& section, const std::string& key) const;
};

}  // namespace mbq
