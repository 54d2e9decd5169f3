#include "meritorder/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "meritorder/common.hpp"

namespace meritorder::csv {
namespace {

void split_line(std::string_view line, std::vector<std::string>& fields) {
  fields.clear();
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  for (auto& f : fields) {
    const auto first = f.find_first_not_of(" \t");
    const auto last = f.find_last_not_of(" \t");
    f = first == std::string::npos ? std::string{} : f.substr(first, last - first + 1);
  }
}

}  // namespace

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::require_column(std::string_view name, std::string_view source) const {
  if (auto idx = column(name)) return *idx;
  throw DataError(std::string(source) + ": missing column '" + std::string(name) + "'");
}

Reader::Reader(std::string_view text, std::string source)
    : text_(text), source_(std::move(source)) {
  if (text_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
  std::string_view line;
  if (!next_line(line)) throw DataError(source_ + ": missing header row");
  split_line(line, header_);
}

std::size_t Reader::require_column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw DataError(source_ + ": missing column '" + std::string(name) + "'");
}

bool Reader::next_line(std::string_view& line) {
  while (pos_ < text_.size()) {
    auto end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) return true;
  }
  return false;
}

bool Reader::next(Row& row) {
  std::string_view line;
  if (!next_line(line)) return false;
  split_line(line, row.fields);
  row.line = line_no_;
  if (row.fields.size() != header_.size()) {
    throw DataError(source_ + ":" + std::to_string(line_no_) + ": expected " +
                    std::to_string(header_.size()) + " fields, found " +
                    std::to_string(row.fields.size()));
  }
  return true;
}

Table parse(std::string_view text, std::string_view source) {
  Reader reader(text, std::string(source));
  Table table;
  table.header = reader.header();
  Row row;
  while (reader.next(row)) table.rows.push_back(row);
  return table;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

Table read_file(const std::filesystem::path& path) { return parse(read_text(path), path.string()); }

double to_double(std::string_view field, std::string_view source, std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw DataError(std::string(source) + ":" + std::to_string(line) + ": malformed number '" +
                    std::string(field) + "'");
  }
  return value;
}

std::string format_double(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buf[512];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, ptr);
}

}  // namespace meritorder::csv
