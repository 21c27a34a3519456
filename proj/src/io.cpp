#include "wetting/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "wetting/config.hpp"

namespace wetting {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += "\n";
}

CsvTable& CsvTable::row() {
  if (in_row_ != 0) throw std::logic_error("CsvTable: previous row incomplete");
  return *this;
}

void CsvTable::cell(const std::string& s) {
  if (in_row_ == columns_) throw std::logic_error("CsvTable: too many cells in a row");
  text_ += (in_row_ ? "," : "") + s;
  if (++in_row_ == columns_) {
    text_ += "\n";
    in_row_ = 0;
  }
}

CsvTable& CsvTable::add(double x) {
  cell(format_double(x));
  return *this;
}

CsvTable& CsvTable::add(long long x) {
  cell(std::to_string(x));
  return *this;
}

CsvTable& CsvTable::add(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    cell(s);
    return *this;
  }
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  cell(q + "\"");
  return *this;
}

std::string CsvTable::str() const {
  if (in_row_ != 0) throw std::logic_error("CsvTable: last row incomplete");
  return text_;
}

std::string render_pgm(const Raster& raster) {
  std::string s = "P2\n" + std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n1\n";
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      if (c) s += ' ';
      s += raster.spins[static_cast<std::size_t>(r * raster.width + c)] > 0 ? '0' : '1';
    }
    s += '\n';
  }
  return s;
}

}  // namespace wetting
