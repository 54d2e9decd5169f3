#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace meritorder::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name, std::string_view source) const;
};

/// Row-at-a-time reader over comma-separated text with a header row. Blank
/// lines are skipped; rows must match the header's field count.
class Reader {
 public:
  Reader(std::string_view text, std::string source);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t require_column(std::string_view name) const;
  /// Fills `row` with the next record; false at the end of input.
  bool next(Row& row);

 private:
  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
  std::vector<std::string> header_;

  bool next_line(std::string_view& line);
};

/// Comma-separated text with a mandatory header row. Double-quoted fields
/// may contain commas. Blank lines are skipped.
Table parse(std::string_view text, std::string_view source);
Table read_file(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Dot-decimal parse of a full field; throws DataError naming source:line.
double to_double(std::string_view field, std::string_view source, std::size_t line);

/// Shortest fixed-notation text that parses back to the identical double.
std::string format_double(double value);

}  // namespace meritorder::csv
