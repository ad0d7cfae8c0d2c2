#include "flowstack/data/csv.hpp"

#include "flowstack/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>
#include <limits>

namespace flowstack::data {

std::optional<std::vector<std::string>> CsvReader::next() {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    const std::size_t start_line = line_ + 1;

    for (;;) {
        const int c = in_.get();
        if (c == std::char_traits<char>::eof()) {
            if (in_quotes) {
                throw DataError("unterminated quoted field starting on line " + std::to_string(start_line));
            }
            if (!any) return std::nullopt;
            fields.push_back(std::move(field));
            ++line_;
            return fields;
        }
        any = true;
        const char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                in_quotes = true;
                break;
            case ',':
                fields.push_back(std::move(field));
                field.clear();
                break;
            case '\r':
                if (in_.peek() == '\n') in_.get();
                [[fallthrough]];
            case '\n':
                fields.push_back(std::move(field));
                ++line_;
                return fields;
            default:
                field.push_back(ch);
        }
    }
}

void write_csv_field(std::ostream& out, std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

std::string_view trim(std::string_view s) noexcept {
    constexpr std::string_view ws = " \t\r\n\v\f";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

namespace {

bool iequals(std::string_view a, std::string_view b) noexcept {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; };
        if (lower(a[i]) != lower(b[i])) return false;
    }
    return true;
}

}  // namespace

std::optional<double> parse_numeric(std::string_view cell) noexcept {
    cell = trim(cell);
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
    bool negative = false;
    std::string_view body = cell;
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    if (iequals(body, "infinity") || iequals(body, "inf")) return negative ? -inf : inf;
    if (iequals(body, "nan")) return std::numeric_limits<double>::quiet_NaN();
    if (body.empty()) return std::nullopt;

    double value = 0.0;
    // from_chars rejects a leading '+', so parse the unsigned body.
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ptr != body.data() + body.size()) return std::nullopt;
    if (ec == std::errc::result_out_of_range) {
        // from_chars leaves the value untouched on range errors; strtod saturates.
        value = std::strtod(std::string(body).c_str(), nullptr);
    } else if (ec != std::errc{}) {
        return std::nullopt;
    }
    return negative ? -value : value;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

}  // namespace flowstack::data
