#include "favlab/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "favlab/error.hpp"

namespace favlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string json_quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

JsonObject& JsonObject::add(std::string_view key, double v) { return add_raw(key, json_number(v)); }

JsonObject& JsonObject::add(std::string_view key, std::int64_t v) {
  return add_raw(key, std::to_string(v));
}

JsonObject& JsonObject::add(std::string_view key, std::uint64_t v) {
  return add_raw(key, std::to_string(v));
}

JsonObject& JsonObject::add(std::string_view key, bool v) { return add_raw(key, v ? "true" : "false"); }

JsonObject& JsonObject::add(std::string_view key, std::string_view v) {
  return add_raw(key, json_quote(v));
}

JsonObject& JsonObject::add(std::string_view key, const std::vector<double>& v) {
  std::string raw = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) raw += ",";
    raw += json_number(v[i]);
  }
  return add_raw(key, raw + "]");
}

JsonObject& JsonObject::add(std::string_view key, const JsonObject& v) { return add_raw(key, v.str()); }

JsonObject& JsonObject::add(std::string_view key, const std::vector<JsonObject>& v) {
  std::string raw = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) raw += ",";
    raw += v[i].str();
  }
  return add_raw(key, raw + "]");
}

JsonObject& JsonObject::add_raw(std::string_view key, std::string raw) {
  fields_.emplace_back(std::string(key), std::move(raw));
  return *this;
}

std::string JsonObject::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (i) out += ",";
    out += json_quote(fields_[i].first) + ":" + fields_[i].second;
  }
  return out + "}";
}

void CsvTable::add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ",";
      out += cells[i];
    }
    out += "\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& console) {
  if (path.empty() || path == "-") {
    console << text;
    console.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) raise(ErrorKind::IoError, "write to '" + path + "' failed");
}

}  // namespace favlab
