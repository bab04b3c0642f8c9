#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ppbell {

/// Scientific notation with 9 significant digits, e.g. 1.20710678e+00.
std::string format_float(double v);

using CsvCell = std::variant<double, std::uint64_t, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;

  void add_row(std::vector<CsvCell> row);
  /// `#`-prefixed manifest line, header, rows; '\n' line ends.
  std::string render(const std::string& manifest_ref) const;
  double number(std::size_t row, std::size_t col) const;
  std::size_t column(const std::string& name) const;
};

/// Path of the manifest sidecar written next to `csv_path`.
std::string manifest_path_for(const std::string& csv_path);

/// Writes text to a file, replacing it; throws std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ppbell
