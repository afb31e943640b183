#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace twist {

/// Shortest round-trip-safe rendering (%.17g), identical across runs.
std::string format_number(double v);
std::string format_number(long long v);

/// RFC 4180 quoting: wraps in quotes when the field holds a comma, quote or newline.
std::string csv_quote(std::string_view field);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  template <typename... Ts>
  void add(const Ts&... values) {
    add_row({cell(values)...});
  }

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return format_number(static_cast<long long>(v)); }
  static std::string cell(long long v) { return format_number(v); }
  static std::string cell(std::size_t v) { return format_number(static_cast<long long>(v)); }
  static std::string cell(bool v) { return v ? "true" : "false"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace twist
