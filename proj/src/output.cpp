#include "ppbell/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ppbell/error.hpp"

namespace ppbell {

std::string format_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != header.size()) throw std::logic_error("CSV row width does not match header");
  rows.push_back(std::move(row));
}

std::string CsvTable::render(const std::string& manifest_ref) const {
  std::string out = "# manifest: " + manifest_ref + "\n";
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      if (const auto* d = std::get_if<double>(&row[c])) {
        out += format_float(*d);
      } else if (const auto* n = std::get_if<std::uint64_t>(&row[c])) {
        out += std::to_string(*n);
      } else {
        out += std::get<std::string>(row[c]);
      }
    }
    out += '\n';
  }
  return out;
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const CsvCell& c = rows.at(row).at(col);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* n = std::get_if<std::uint64_t>(&c)) return static_cast<double>(*n);
  throw std::logic_error("CSV cell is not numeric");
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return c;
  }
  throw std::out_of_range("no CSV column " + name);
}

std::string manifest_path_for(const std::string& csv_path) { return csv_path + ".manifest.json"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace ppbell
