#pragma once

// Small text helpers shared by the CSV and JSON writers. Not installed.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gwnash/error.hpp"

namespace gwnash::detail {

/// Shortest text that parses back to the same double (17 significant digits).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool parse_long(std::string_view s, long long& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

/// Lines of a CSV file with blank lines and '#' comments dropped; each
/// entry keeps its 1-based line number for error messages.
struct CsvLine {
  std::size_t number = 0;
  std::vector<std::string_view> cells;
};

class CsvTable {
 public:
  explicit CsvTable(const std::filesystem::path& path) : path_(path), text_(read_file(path)) {
    std::size_t pos = 0;
    std::size_t number = 0;
    while (pos <= text_.size()) {
      std::size_t end = text_.find('\n', pos);
      if (end == std::string::npos) end = text_.size();
      ++number;
      const std::string_view line = trim(std::string_view(text_).substr(pos, end - pos));
      if (!line.empty() && line.front() != '#') lines_.push_back({number, split_commas(line)});
      pos = end + 1;
    }
    if (lines_.empty()) throw InvalidInput(path_.string() + ": empty file");
  }

  // cells view into text_
  CsvTable(const CsvTable&) = delete;
  CsvTable& operator=(const CsvTable&) = delete;

  const std::vector<std::string_view>& header() const { return lines_.front().cells; }
  std::size_t num_rows() const { return lines_.size() - 1; }
  const CsvLine& row(std::size_t r) const { return lines_[r + 1]; }

  void expect_header(const std::vector<std::string_view>& expected) const {
    if (header() != expected) {
      std::string want;
      for (auto e : expected) want += (want.empty() ? "" : ",") + std::string(e);
      throw InvalidInput(path_.string() + ": header must be exactly '" + want + "'");
    }
  }

  [[noreturn]] void fail(const CsvLine& line, const std::string& what) const {
    throw InvalidInput(path_.string() + ": line " + std::to_string(line.number) + ": " + what);
  }

  double number(const CsvLine& line, std::size_t col) const {
    double v = 0.0;
    if (!parse_double(line.cells[col], v)) {
      fail(line, "column '" + std::string(header()[col]) + "' is not numeric: '" +
                     std::string(line.cells[col]) + "'");
    }
    return v;
  }

  long long integer(const CsvLine& line, std::size_t col) const {
    long long v = 0;
    if (!parse_long(line.cells[col], v)) {
      fail(line, "column '" + std::string(header()[col]) + "' is not an integer: '" +
                     std::string(line.cells[col]) + "'");
    }
    return v;
  }

  void expect_width(const CsvLine& line) const {
    if (line.cells.size() != header().size()) {
      fail(line, "expected " + std::to_string(header().size()) + " columns, found " +
                     std::to_string(line.cells.size()));
    }
  }

 private:
  std::filesystem::path path_;
  std::string text_;
  std::vector<CsvLine> lines_;
};

}  // namespace gwnash::detail
