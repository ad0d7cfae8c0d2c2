#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace flowstack::data {

// Minimal RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF endings.
class CsvReader {
  public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Next record, or nullopt at end of input. Throws DataError on an unterminated quote.
    std::optional<std::vector<std::string>> next();

    std::size_t line() const noexcept { return line_; }

  private:
    std::istream& in_;
    std::size_t line_ = 0;
};

void write_csv_field(std::ostream& out, std::string_view field);

std::string_view trim(std::string_view s) noexcept;

// Numeric cell parser. Accepts plain decimals plus the nonfinite tokens
// "Infinity", "-Infinity", "inf", "-inf", "NaN" and the empty cell (NaN).
std::optional<double> parse_numeric(std::string_view cell) noexcept;

// Shortest text that parses back to the identical double.
std::string format_double(double v);

}  // namespace flowstack::data
