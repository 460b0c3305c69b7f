#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qcafqmc {

// FNV-1a over a canonical byte stream; stable across runs and platforms.
struct Fnv64 {
  std::uint64_t state = 1469598103934665603ull;

  void bytes(const void* data, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state ^= b[i];
      state *= 1099511628211ull;
    }
  }
  void add(const std::string& s) { bytes(s.data(), s.size()); }
  void add(std::uint64_t v);
  void add(std::int64_t v) { add(static_cast<std::uint64_t>(v)); }
  void add(int v) { add(static_cast<std::uint64_t>(static_cast<std::int64_t>(v))); }
  void add(double v);  // hashed via %.17g text, immune to padding bits
};

std::string hex64(std::uint64_t v);

// Minimal CSV writer: quotes nothing, formats doubles with %.12g.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);
  void add_row(const std::vector<std::string>& cells);
  std::string str() const;
  void save(const std::string& path) const;

  static std::string num(double v, int precision = 12);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& path);

}  // namespace qcafqmc
