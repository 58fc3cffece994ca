#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lwf/transform.hpp"

namespace lwf {

/// Shortest decimal form that reads back to the same double; "nan", "inf"
/// and "-inf" for non-finite values.
std::string format_number(double value);

/// Quotes a field when it holds a comma, quote, CR or LF (RFC 4180).
std::string csv_escape(std::string_view field);

/// Header plus records, written with CRLF-free "\n" line ends.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
  std::size_t row_count() const noexcept { return rows_.size(); }

  /// InputError when the record width differs from the header.
  void add_row(std::vector<std::string> row);
  void append(const CsvTable& other);

  /// Cell by column name; RangeError for an unknown column or row.
  const std::string& cell(std::size_t row, std::string_view column) const;
  std::size_t column_index(std::string_view column) const;

  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Splits CSV text into records. Quoted fields may hold separators, doubled
/// quotes and line breaks. ParseError (1-based line) on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// One numeric column of a returns file. Zeros are kept as read; consumers
/// that need positive values call apply_zeros().
struct ReturnsSeries {
  std::optional<std::vector<std::string>> timestamps;
  std::vector<double> values;
  ZerosPolicy zeros_policy = ZerosPolicy::UniformFill;

  std::size_t zero_count() const;
  ZerosOutcome apply_zeros(std::uint64_t seed) const;
};

/// Reads `column` (header name, or 0-based index) from a CSV file. A header
/// column named "date" or "timestamp" fills `timestamps`. IoError when the
/// file cannot be read; ParseError naming the row and column for a missing
/// or non-numeric cell; InputError for an unknown column.
ReturnsSeries ingest_csv(const std::string& path, const std::string& column, bool has_header,
                         ZerosPolicy zeros_policy);

/// Same as ingest_csv on in-memory text.
ReturnsSeries parse_returns(std::string_view text, const std::string& column, bool has_header,
                            ZerosPolicy zeros_policy);

}  // namespace lwf
