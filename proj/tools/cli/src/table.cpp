#include "rcr_cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rcr/errors.hpp"
#include "rcr_cli/config.hpp"

namespace rcr::cli {
namespace {

bool needs_quotes(const std::string& s) { return s.find_first_of(",\"\r\n") != std::string::npos; }

std::string quote(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

template <class Cells>
void write_csv_line(std::ostream& out, const Cells& cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out << ',';
    first = false;
    if constexpr (std::is_same_v<std::decay_t<decltype(c)>, Cell>) {
      out << quote(format_cell(c));
    } else {
      out << quote(c);
    }
  }
  out << '\n';
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      c);
}

void write_csv(const Table& t, std::ostream& out) {
  write_csv_line(out, t.columns);
  for (const auto& row : t.rows) write_csv_line(out, row);
}

void write_json(const Table& t, std::ostream& out) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              obj[t.columns[i]] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
            } else {
              obj[t.columns[i]] = v;
            }
          },
          row[i]);
    }
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

std::size_t CsvData::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw ConfigError("CSV has no column '" + name + "'");
}

CsvData read_csv(std::istream& in) {
  CsvData data;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool have_content = false;
  char c = 0;
  int line = 1;
  auto finish_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    if (data.columns.empty()) {
      data.columns = std::move(record);
    } else {
      if (record.size() != data.columns.size()) {
        throw IoError("CSV line " + std::to_string(line) + ": expected " + std::to_string(data.columns.size()) +
                      " fields, found " + std::to_string(record.size()));
      }
      data.rows.push_back(std::move(record));
    }
    record.clear();
    have_content = false;
  };
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"': in_quotes = true; have_content = true; break;
      case ',': record.push_back(std::move(field)); field.clear(); have_content = true; break;
      case '\r': break;
      case '\n':
        if (have_content || !field.empty()) finish_record();
        ++line;
        break;
      default: field += c; have_content = true;
    }
  }
  if (in_quotes) throw IoError("CSV: unterminated quoted field");
  if (have_content || !field.empty()) finish_record();
  return data;
}

CsvData read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  return read_csv(in);
}

double parse_double_field(const std::string& field) {
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) throw IoError("'" + field + "' is not a number");
  return v;
}

std::string check_round_trip(const Table& t, const std::string& csv_text) {
  std::istringstream in(csv_text);
  CsvData back;
  try {
    back = read_csv(in);
  } catch (const std::exception& e) {
    return e.what();
  }
  if (back.columns != t.columns) return "header does not match";
  if (back.rows.size() != t.rows.size()) return "row count does not match";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const Cell& cell = t.rows[r][i];
      const std::string& text = back.rows[r][i];
      std::string again;
      try {
        if (std::holds_alternative<double>(cell)) {
          const double v = parse_double_field(text);
          const double orig = std::get<double>(cell);
          if (!(v == orig || (std::isnan(v) && std::isnan(orig)))) {
            return "row " + std::to_string(r + 1) + ", " + t.columns[i] + ": value changed";
          }
          again = format_double(v);
        } else {
          again = text;
        }
      } catch (const std::exception& e) {
        return "row " + std::to_string(r + 1) + ", " + t.columns[i] + ": " + e.what();
      }
      if (again != format_cell(cell)) return "row " + std::to_string(r + 1) + ", " + t.columns[i] + ": text changed";
    }
  }
  return {};
}

}  // namespace rcr::cli
