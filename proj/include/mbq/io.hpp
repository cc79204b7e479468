// io.hpp -- deterministic text output: CSV tables and an ordered JSON writer
// that renders every floating-point value with 17 significant digits so that
// files are byte-identical across runs and exact to re-parse.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace mbq {

// %.17g rendering (shortest text that is still bit-exact to re-read).
std::string g17(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void row(std::vector<std::string> cells);  // throws on width mismatch
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Minimal ordered JSON value for writing summaries. Numbers are rendered via
// g17; non-finite values render as null. Parsing is delegated to a standard
// JSON library elsewhere; this type only guarantees deterministic output.
class Json {
 public:
  static Json object();
  static Json array();
  static Json str(std::string v);
  static Json num(double v);
  static Json integer(long v);
  static Json boolean(bool v);
  static Json null();

  bool is_object() const;
  bool is_array() const;

  Json& add(const std::string& key, Json v);  // object ordered insert/overwrite
  Json& push(Json v);                         // array append

  std::string dump(int indent = 2) const;
  void write(const std::string& path, int indent = 2) const;

 private:
  enum class Kind { object, array, string, number, integer, boolean, null_value };
  Kind kind_ = Kind::null_value;
  std::string str_;
  double num_ = 0.0;
  long int_ = 0;
  bool bool_ = false;
  std::vector<std::pair<std::string, Json>> members_;  // object (ordered) or array (keys empty)
  void dump_to(std::string& out, int indent, int depth) const;
};

std::string json_escape(const std::string& s);

}  // namespace mbq
