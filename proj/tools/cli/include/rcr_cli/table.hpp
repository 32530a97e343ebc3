#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace rcr::cli {

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);
std::string format_cell(const Cell& c);

void write_csv(const Table& t, std::ostream& out);
/// Array of objects keyed by column name. Non-finite doubles become null.
void write_json(const Table& t, std::ostream& out);

/// Header plus rows of raw string fields. RFC 4180 quoting is honoured.
/// Throws IoError on ragged rows or unterminated quotes.
struct CsvData {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name`, or throws ConfigError.
  std::size_t column(const std::string& name) const;
};
CsvData read_csv(std::istream& in);
CsvData read_csv_file(const std::string& path);

/// Parses a field written by format_double. Throws IoError if it is not one.
double parse_double_field(const std::string& field);

/// Re-reads `csv_text` and checks that it has the table's header and row
/// count and that every cell re-formats to the same text. Returns an empty
/// string on success, otherwise the first mismatch.
std::string check_round_trip(const Table& t, const std::string& csv_text);

}  // namespace rcr::cli
