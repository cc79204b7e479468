#include "mbq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mbq {

std::string g17(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize negative zero
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

void CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("CsvTable: row width mismatch");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << str();
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if ((unsigned char)c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", (unsigned)(unsigned char)c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

Json Json::object() {
  Json j;
  j.kind_ = Kind::object;
  return j;
}
Json Json::array() {
  Json j;
  j.kind_ = Kind::array;
  return j;
}
Json Json::str(std::string v) {
  Json j;
  j.kind_ = Kind::string;
  j.str_ = std::move(v);
  return j;
}
Json Json::num(double v) {
  Json j;
  j.kind_ = Kind::number;
  j.num_ = v;
  return j;
}
Json Json::integer(long v) {
  Json j;
  j.kind_ = Kind::integer;
  j.int_ = v;
  return j;
}
Json Json::boolean(bool v) {
  Json j;
  j.kind_ = Kind::boolean;
  j.bool_ = v;
  return j;
}
Json Json::null() { return Json{}; }

bool Json::is_object() const { return kind_ == Kind::object; }
bool Json::is_array() const { return kind_ == Kind::array; }

Json& Json::add(const std::string& key, Json v) {
  if (kind_ != Kind::object) throw std::logic_error("Json::add on non-object");
  for (auto& kv : members_)
    if (kv.first == key) {
      kv.second = std::move(v);
      return *this;
    }
  members_.emplace_back(key, std::move(v));
  return *this;
}

Json& Json::push(Json v) {
  if (kind_ != Kind::array) throw std::logic_error("Json::push on non-array");
  members_.emplace_back(std::string{}, std::move(v));
  return *this;
}

void Json::dump_to(std::string& out, int indent, int depth) const {
  const std::string pad((std::size_t)(indent * (depth + 1)), ' ');
  const std::string close_pad((std::size_t)(indent * depth), ' ');
  switch (kind_) {
    case Kind::null_value: out += "null"; break;
    case Kind::boolean: out += bool_ ? "true" : "false"; break;
    case Kind::integer: out += std::to_string(int_); break;
    case Kind::number:
      if (std::isfinite(num_)) {
        out += g17(num_);
      } else {
        out += "null";
      }
      break;
    case Kind::string:
      out += '"';
      out += json_escape(str_);
      out += '"';
      break;
    case Kind::object:
    case Kind::array: {
      const char open = kind_ == Kind::object ? '{' : '[';
      const char close = kind_ == Kind::object ? '}' : ']';
      if (members_.empty()) {
        out += open;
        out += close;
        break;
      }
      out += open;
      out += '\n';
      for (std::size_t i = 0; i < members_.size(); ++i) {
        out += pad;
        if (kind_ == Kind::object) {
          out += '"';
          out += json_escape(members_[i].first);
          out += "\": ";
        }
        members_[i].second.dump_to(out, indent, depth + 1);
        if (i + 1 < members_.size()) out += ',';
        out += '\n';
      }
      out += close_pad;
      out += close;
      break;
    }
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  out += '\n';
  return out;
}

void Json::write(const std::string& path, int indent) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << dump(indent);
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace mbq
