#include "lwf/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "lwf/errors.hpp"

namespace lwf {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{}", value);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw InputError(fmt::format("csv: record has {} fields, header has {}", row.size(), header_.size()));
  }
  rows_.push_back(std::move(row));
}

void CsvTable::append(const CsvTable& other) {
  if (other.header_ != header_) throw InputError("csv: appending a table with a different header");
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

std::size_t CsvTable::column_index(std::string_view column) const {
  auto it = std::find(header_.begin(), header_.end(), column);
  if (it == header_.end()) throw RangeError(fmt::format("csv: no column '{}'", column));
  return static_cast<std::size_t>(it - header_.begin());
}

const std::string& CsvTable::cell(std::size_t row, std::string_view column) const {
  if (row >= rows_.size()) throw RangeError(fmt::format("csv: no row {}", row));
  return rows_[row][column_index(column)];
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(fields[i]);
    }
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
}

std::string CsvTable::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t quote_line = 0;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
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
      case '"':
        if (!field_started) {
          in_quotes = true;
          field_started = true;
          quote_line = line;
        } else {
          field += c;
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw ParseError(fmt::format("csv: unterminated quote opened on line {}", quote_line), quote_line);
  if (field_started || !record.empty()) end_record();
  return records;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::size_t ReturnsSeries::zero_count() const {
  return static_cast<std::size_t>(std::count(values.begin(), values.end(), 0.0));
}

ZerosOutcome ReturnsSeries::apply_zeros(std::uint64_t seed) const {
  return apply_zeros_policy(values, zeros_policy, seed);
}

ReturnsSeries parse_returns(std::string_view text, const std::string& column, bool has_header,
                            ZerosPolicy zeros_policy) {
  auto records = parse_csv(text);
  ReturnsSeries series;
  series.zeros_policy = zeros_policy;

  std::size_t col = 0;
  std::optional<std::size_t> date_col;
  std::size_t first = 0;
  if (has_header) {
    if (records.empty()) throw InputError("csv: file has no header row");
    const auto& header = records[0];
    for (std::size_t i = 0; i < header.size(); ++i) {
      auto name = trim(header[i]);
      if (name == "date" || name == "timestamp") date_col = i;
    }
    auto it = std::find_if(header.begin(), header.end(),
                           [&](const std::string& h) { return trim(h) == column; });
    if (it != header.end()) {
      col = static_cast<std::size_t>(it - header.begin());
    } else if (auto idx = parse_double(column); idx && *idx >= 0 && *idx == std::floor(*idx)) {
      col = static_cast<std::size_t>(*idx);
      if (col >= header.size()) throw InputError(fmt::format("csv: column index {} out of range", col));
    } else {
      throw InputError(fmt::format("csv: no column named '{}'", column));
    }
    first = 1;
  } else {
    auto idx = parse_double(column);
    if (!idx || *idx < 0 || *idx != std::floor(*idx)) {
      throw InputError(fmt::format("csv: without a header the column must be an index, got '{}'", column));
    }
    col = static_cast<std::size_t>(*idx);
  }
  if (date_col == col) date_col.reset();
  if (date_col) series.timestamps.emplace();

  for (std::size_t r = first; r < records.size(); ++r) {
    const auto& rec = records[r];
    std::size_t row = r + 1;
    if (col >= rec.size()) {
      throw ParseError(fmt::format("csv: row {} has no column {}", row, col), row);
    }
    auto v = parse_double(rec[col]);
    if (!v) {
      throw ParseError(fmt::format("csv: row {} column {}: '{}' is not a number", row, col, rec[col]), row);
    }
    series.values.push_back(*v);
    if (date_col) series.timestamps->push_back(*date_col < rec.size() ? rec[*date_col] : std::string());
  }
  return series;
}

ReturnsSeries ingest_csv(const std::string& path, const std::string& column, bool has_header,
                         ZerosPolicy zeros_policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("cannot read '{}'", path));
  return parse_returns(buf.str(), column, has_header, zeros_policy);
}

}  // namespace lwf
