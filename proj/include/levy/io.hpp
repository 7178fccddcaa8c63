#pragma once

// Deterministic text output: CSV tables with a JSON metadata header line and
// atomic file writes (temporary file, then rename).

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace levy::io {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form of a double ("inf", "-inf", "nan" for
/// non-finite values).
std::string format_double(double x);

class CsvTable {
 public:
  CsvTable(Json header, std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  std::size_t rows() const noexcept { return rows_; }
  /// "# <header json>\n<columns>\n<rows>".
  std::string str() const;

 private:
  Json header_;
  std::size_t n_cols_;
  std::size_t rows_ = 0;
  std::string body_;
};

/// Parses a CSV produced by CsvTable (or any comma-separated numeric table
/// with an optional "# " header line and a column-name line).
struct ParsedCsv {
  Json header;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
ParsedCsv parse_csv(std::string_view text);

/// Writes `content` to `file` through a sibling temporary file and rename.
void atomic_write(const std::filesystem::path& file, std::string_view content);
std::string read_file(const std::filesystem::path& file);

}  // namespace levy::io
