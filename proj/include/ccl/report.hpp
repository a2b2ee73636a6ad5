#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ccl {

/// Shortest round-trip text for a double ("%.17g" trimmed), "inf"/"nan" spelled out.
std::string fmt(double v);

/// CSV table written in one go; an empty table still gets its header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add(std::vector<std::string> row);
  /// Convenience for all-numeric rows.
  void add_numbers(const std::vector<double>& row);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str(const std::vector<std::string>& comments = {}) const;
  /// Writes to path; leading comment lines start with '#'.
  void write(const std::filesystem::path& path, const std::vector<std::string>& comments = {}) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t v);

}  // namespace ccl
