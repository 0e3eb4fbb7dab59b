#pragma once

#include <cstdint>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

namespace favlab {

/// %.17g; non-finite values become "nan", "inf" or "-inf".
std::string format_double(double v);

/// Builds one JSON object with keys in insertion order. Doubles use
/// format_double (non-finite values are written as null).
class JsonObject {
 public:
  JsonObject& add(std::string_view key, double v);
  JsonObject& add(std::string_view key, std::int64_t v);
  JsonObject& add(std::string_view key, std::uint64_t v);
  JsonObject& add(std::string_view key, int v) { return add(key, static_cast<std::int64_t>(v)); }
  JsonObject& add(std::string_view key, bool v);
  JsonObject& add(std::string_view key, std::string_view v);
  JsonObject& add(std::string_view key, const char* v) { return add(key, std::string_view(v)); }
  JsonObject& add(std::string_view key, const std::vector<double>& v);
  JsonObject& add(std::string_view key, const JsonObject& v);
  JsonObject& add(std::string_view key, const std::vector<JsonObject>& v);
  /// Pre-serialized JSON value.
  JsonObject& add_raw(std::string_view key, std::string raw);

  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string json_quote(std::string_view s);
std::string json_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  /// Cells are written verbatim; quote them yourself if they hold commas.
  void add_row(std::vector<std::string> cells);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes text to path, or to `console` when path is empty or "-". IoError on
/// failure.
void emit(const std::string& text, const std::string& path, std::ostream& console = std::cout);

}  // namespace favlab
