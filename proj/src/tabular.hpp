#pragma once

// Line-oriented CSV and key/value manifest readers used by the bundle loader.
// Internal header.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fabric::tabular {

using Problems = std::vector<std::string>;

struct CsvRow {
  int line = 0;
  std::vector<std::string> cells;
};

class CsvTable {
 public:
  std::string file;
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  bool has_column(std::string_view name) const;
  /// Empty string when the column is absent or the cell is blank.
  const std::string& cell(const CsvRow& row, std::string_view name) const;
  std::string where(const CsvRow& row) const { return file + ":" + std::to_string(row.line); }
  /// Records a problem for every missing required column; returns false if any.
  bool require_columns(std::initializer_list<std::string_view> names, Problems& problems) const;
};

/// '#' starts a comment (outside quotes); blank lines skipped; the first
/// remaining line is the header. Double-quoted cells may contain commas.
CsvTable parse_csv(std::string_view text, std::string file_label);
CsvTable read_csv(const std::filesystem::path& path);

std::string csv_escape(std::string_view cell);
std::string csv_line(const std::vector<std::string>& cells);

/// "[section]" headers and "key = value" lines; '#' comments; values may be
/// double-quoted. Keys before any section land in section "".
struct Manifest {
  std::map<std::string, std::map<std::string, std::string>> sections;

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
};

Manifest parse_manifest(std::string_view text, const std::string& file_label, Problems& problems);

std::optional<double> parse_double(std::string_view text);
std::optional<int> parse_int(std::string_view text);
std::string_view trim(std::string_view s);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

}  // namespace fabric::tabular
