#include "tabular.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fabric/error.hpp"

namespace fabric::tabular {
namespace {

const std::string kEmpty;

std::vector<std::string> split_csv_line(std::string_view line, bool& comment_only) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  bool any = false;
  comment_only = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
      continue;
    }
    if (ch == '#') break;
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      cells.emplace_back(trim(cur));
      cur.clear();
      any = true;
    } else {
      cur.push_back(ch);
      if (!std::isspace(static_cast<unsigned char>(ch))) any = true;
    }
  }
  if (!any) {
    comment_only = true;
    return {};
  }
  cells.emplace_back(trim(cur));
  return cells;
}

}  // namespace

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool CsvTable::has_column(std::string_view name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

const std::string& CsvTable::cell(const CsvRow& row, std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i < row.cells.size() ? row.cells[i] : kEmpty;
  }
  return kEmpty;
}

bool CsvTable::require_columns(std::initializer_list<std::string_view> names,
                               Problems& problems) const {
  bool ok = true;
  for (auto n : names) {
    if (!has_column(n)) {
      problems.push_back(file + ": missing required column '" + std::string(n) + "'");
      ok = false;
    }
  }
  return ok;
}

CsvTable parse_csv(std::string_view text, std::string file_label) {
  CsvTable table;
  table.file = std::move(file_label);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool comment_only = false;
    auto cells = split_csv_line(line, comment_only);
    if (comment_only) continue;
    if (table.header.empty()) {
      table.header = std::move(cells);
    } else {
      table.rows.push_back({line_no, std::move(cells)});
    }
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path.filename().string());
}

std::string csv_escape(std::string_view cell) {
  if (cell.find_first_of(",\"#\n") == std::string_view::npos) return std::string(cell);
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(cells[i]);
  }
  return out;
}

std::optional<std::string> Manifest::get(const std::string& section, const std::string& key) const {
  auto s = sections.find(section);
  if (s == sections.end()) return std::nullopt;
  auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

Manifest parse_manifest(std::string_view text, const std::string& file_label, Problems& problems) {
  Manifest m;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    // Strip comments that are not inside a quoted value.
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    auto line = trim(raw.substr(0, cut));
    if (line.empty()) continue;
    const std::string where = file_label + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') {
        problems.push_back(where + ": malformed section header");
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      m.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(where + ": expected 'key = value'");
      continue;
    }
    auto key = std::string(trim(line.substr(0, eq)));
    auto value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      problems.push_back(where + ": empty key");
      continue;
    }
    auto& sec = m.sections[section];
    if (sec.count(key)) problems.push_back(where + ": duplicate key '" + key + "'");
    sec[key] = std::string(value);
  }
  return m;
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> parse_int(std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), ptr);
}

}  // namespace fabric::tabular
