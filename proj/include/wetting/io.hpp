#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wetting/spin_mc.hpp"

namespace wetting {

/// Writes `content` to a temporary sibling and renames it over `path`, so
/// readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// CSV text with a fixed header; doubles use 17 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row();
  CsvTable& add(double x);
  CsvTable& add(long long x);
  CsvTable& add(std::size_t x) { return add(static_cast<long long>(x)); }
  CsvTable& add(int x) { return add(static_cast<long long>(x)); }
  CsvTable& add(const std::string& s);
  CsvTable& add(const char* s) { return add(std::string(s)); }

  std::string str() const;

 private:
  void cell(const std::string& s);

  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::string text_;
};

/// Plain PGM (P2), maxval 1: plus spins black (0), minus spins white (1).
std::string render_pgm(const Raster& raster);

}  // namespace wetting
