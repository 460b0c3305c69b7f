#include "qcafqmc/artifacts.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qcafqmc/error.hpp"

namespace qcafqmc {

void Fnv64::add(std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  bytes(b, 8);
}

void Fnv64::add(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  add(std::string(buf));
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  require(cells.size() == columns_.size(), "csv_shape", "CSV row width mismatch");
  rows_.push_back(cells);
}

std::string CsvWriter::num(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

std::string CsvWriter::str() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

void CsvWriter::save(const std::string& path) const { write_text_file(path, str()); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  require(out.good(), "io_error", "cannot open " + path + " for writing");
  out << content;
  require(out.good(), "io_error", "write to " + path + " failed");
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  require(!ec, "io_error", "cannot create directory " + path + ": " + ec.message());
}

}  // namespace qcafqmc
