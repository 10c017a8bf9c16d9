#pragma once

#include <array>
#include <charconv>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace ctrade {

/// Base error for every failure raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// ISO-3166 alpha-3 code such as "IDN".
class CountryId {
  public:
    explicit CountryId(std::string_view code) {
        if (code.size() != 3) {
            throw Error("invalid country code '" + std::string(code) +
                        "': expected 3 uppercase letters");
        }
        for (std::size_t i = 0; i < 3; ++i) {
            char c = code[i];
            if (c < 'A' || c > 'Z') {
                throw Error("invalid country code '" + std::string(code) +
                            "': expected 3 uppercase letters");
            }
            code_[i] = c;
        }
    }

    std::string str() const { return std::string(code_.data(), 3); }
    std::string_view view() const { return {code_.data(), 3}; }

    friend auto operator<=>(const CountryId&, const CountryId&) = default;
    friend bool operator==(const CountryId&, const CountryId&) = default;

  private:
    std::array<char, 3> code_{};
};

/// Calendar year restricted to [1900, 2100].
class Year {
  public:
    static constexpr int min_value = 1900;
    static constexpr int max_value = 2100;

    explicit Year(int value) : value_(value) {
        if (value < min_value || value > max_value) {
            throw Error("year " + std::to_string(value) +
                        " outside [1900, 2100]");
        }
    }

    int value() const { return value_; }

    friend auto operator<=>(const Year&, const Year&) = default;
    friend bool operator==(const Year&, const Year&) = default;

  private:
    int value_;
};

/// Inclusive year window.
struct YearRange {
    Year first;
    Year last;

    YearRange(Year a, Year b) : first(a), last(b) {
        if (b < a) {
            throw Error("empty year range " + std::to_string(a.value()) + ":" +
                        std::to_string(b.value()));
        }
    }

    bool contains(Year y) const { return first <= y && y <= last; }
    int size() const { return last.value() - first.value() + 1; }

    /// Parses "A:B".
    static YearRange parse(std::string_view text) {
        auto colon = text.find(':');
        if (colon == std::string_view::npos) {
            throw Error("year range must look like A:B, got '" +
                        std::string(text) + "'");
        }
        auto parse_int = [&](std::string_view part) {
            int v = 0;
            auto [ptr, ec] =
                std::from_chars(part.data(), part.data() + part.size(), v);
            if (ec != std::errc{} || ptr != part.data() + part.size()) {
                throw Error("unparsable year in range '" + std::string(text) +
                            "'");
            }
            return Year(v);
        };
        return {parse_int(text.substr(0, colon)),
                parse_int(text.substr(colon + 1))};
    }
};

/// Default analysis window for bilateral fits.
inline YearRange default_fit_years() { return {Year(2009), Year(2019)}; }

/// Ordered pair of distinct countries. `first` is the reporter whose rows
/// define the bilateral trade volume.
struct CountryPair {
    CountryId first;
    CountryId second;

    CountryPair(CountryId a, CountryId b) : first(a), second(b) {
        if (a == b) {
            throw Error("country pair needs two distinct countries, got " +
                        a.str() + "-" + b.str());
        }
    }

    CountryPair swapped() const { return {second, first}; }
    std::string str() const { return first.str() + "-" + second.str(); }

    /// Parses "USA-CAN".
    static CountryPair parse(std::string_view text) {
        auto dash = text.find('-');
        if (dash == std::string_view::npos) {
            throw Error("pair must look like AAA-BBB, got '" +
                        std::string(text) + "'");
        }
        return {CountryId(text.substr(0, dash)),
                CountryId(text.substr(dash + 1))};
    }

    friend auto operator<=>(const CountryPair&, const CountryPair&) = default;
    friend bool operator==(const CountryPair&, const CountryPair&) = default;
};

} // namespace ctrade
