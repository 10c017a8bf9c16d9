#pragma once

// Reader for published per-pair alpha tables (region,country1,country2,alpha)
// and for alphas taken from fit-alpha JSON reports.

#include <string>
#include <vector>

#include "ctrade/csv.hpp"
#include "ctrade/json_out.hpp"
#include "ctrade/trade_data.hpp"

namespace ctrade {

inline constexpr std::string_view alpha_table_header =
    "region,country1,country2,alpha";

struct AlphaEntry {
    std::string region;
    std::string country1;
    std::string country2;
    double alpha;
};

inline std::vector<AlphaEntry> parse_alpha_table(std::istream& in,
                                                 const std::string& source) {
    std::vector<AlphaEntry> out;
    csv::read_rows(
        in, source, alpha_table_header,
        [&](const std::vector<std::string_view>& f, std::size_t line) {
            if (f.size() != 4) {
                throw csv::ParseError(source, line, "expected 4 columns");
            }
            double a = 0.0;
            if (!csv::parse_double(f[3], a)) {
                throw csv::ParseError(source, line, "unparsable number");
            }
            out.push_back({std::string(f[0]), std::string(f[1]),
                           std::string(f[2]), a});
        });
    return out;
}

inline std::vector<AlphaEntry> load_alpha_table(const std::string& path) {
    auto in = open_input(path);
    return parse_alpha_table(in, path);
}

/// Alphas listed under "pair_fits" of a report.
inline std::vector<double> alphas_from_report(const json::json& report) {
    std::vector<double> out;
    if (!report.contains("pair_fits")) {
        throw Error("report has no pair_fits");
    }
    for (const auto& f : report["pair_fits"]) {
        out.push_back(f.at("alpha").get<double>());
    }
    return out;
}

} // namespace ctrade
