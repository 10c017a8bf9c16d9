#pragma once

// Minimal reader/writer for the flat comma-separated formats used by the
// dataset bundle. No quoting: none of the fields can contain commas.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "ctrade/types.hpp"

namespace ctrade::csv {

/// Error carrying the source name and 1-based line number.
class ParseError : public Error {
  public:
    ParseError(const std::string& source, std::size_t line,
               const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what +
                " at line " + std::to_string(line)),
          line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                          s.back() == '\r' || s.back() == '\n')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split(std::string_view line,
                                           char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

/// Returns false on anything but a complete finite decimal number.
inline bool parse_double(std::string_view text, double& out) {
    if (text.empty()) {
        return false;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                     out, std::chars_format::general);
    return ec == std::errc{} && ptr == text.data() + text.size() &&
           std::isfinite(out);
}

inline bool parse_int(std::string_view text, int& out) {
    auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), out);
    return !text.empty() && ec == std::errc{} &&
           ptr == text.data() + text.size();
}

/// Shortest form that still round-trips: 17 significant digits.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Iterates the data rows of a headered CSV stream. The header must match
/// `expected_header` exactly (after trimming). Blank lines are skipped.
template<class RowFn>
void read_rows(std::istream& in, const std::string& source,
               std::string_view expected_header, RowFn&& on_row) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) {
            view.remove_prefix(3);
        }
        if (view.empty()) {
            continue;
        }
        if (!have_header) {
            if (view != expected_header) {
                throw ParseError(source, line_no,
                                 "header must be '" +
                                     std::string(expected_header) + "'");
            }
            have_header = true;
            continue;
        }
        auto fields = split(view);
        on_row(fields, line_no);
    }
    if (!have_header) {
        throw ParseError(source, line_no, "missing header");
    }
}

} // namespace ctrade::csv
