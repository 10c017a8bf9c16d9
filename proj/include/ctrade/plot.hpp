#pragma once

// Plot-ready TSV series. Every file has a header line and purely numeric
// rows, which validate_plot_tsv() checks.

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ctrade/csv.hpp"
#include "ctrade/estimation.hpp"
#include "ctrade/normal.hpp"

namespace ctrade::plot {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_tsv() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            os << (i ? "\t" : "") << columns[i];
        }
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                os << (i ? "\t" : "") << csv::format_number(r[i]);
            }
            os << '\n';
        }
        return os.str();
    }
};

/// year, x = ln(interaction), y = ln(trade), fitted_y.
inline Table alpha_series(const PairFit& fit,
                          std::span<const PairObservation> obs) {
    Table t{{"year", "x", "y", "fitted_y"}, {}};
    for (const auto& o : obs) {
        auto p = log_form(o, fit.alpha);
        t.rows.push_back({static_cast<double>(o.year.value()), p.x, p.y,
                          fit.fit.predict(p.x)});
    }
    return t;
}

/// year, x' = ln(interaction ratio), y' = ln(trade ratio), fitted_y.
inline Table beta_series(const TripleFit& fit,
                         std::span<const PairObservation> num,
                         std::span<const PairObservation> den) {
    Table t{{"year", "x_prime", "y_prime", "fitted_y"}, {}};
    for (const auto& [y, p] : ratio_points(num, den, fit.alpha_num,
                                           fit.alpha_den)) {
        t.rows.push_back({static_cast<double>(y.value()), p.x, p.y,
                          fit.fit.predict(p.x)});
    }
    return t;
}

/// alpha, empirical_cdf, model_cdf, difference.
inline Table cdf_series(const std::vector<CdfResidual>& residuals) {
    Table t{{"alpha", "empirical_cdf", "model_cdf", "difference"}, {}};
    for (const auto& r : residuals) {
        t.rows.push_back({r.alpha, r.empirical_cdf, r.model_cdf, r.difference});
    }
    return t;
}

/// year, ln_gdp_norm, ln_exports_norm, fitted.
inline Table rho_series(const PowerLawFit& fit, const NormalizedSeries& exports,
                        const NormalizedSeries& gdp) {
    Table t{{"year", "ln_gdp_norm", "ln_exports_norm", "fitted"}, {}};
    for (Year y : fit.years_used) {
        double x = std::log(gdp.values.at(y));
        t.rows.push_back({static_cast<double>(y.value()), x,
                          std::log(exports.values.at(y)), fit.fit.predict(x)});
    }
    return t;
}

/// year, exports_norm, imports_norm, fitted.
inline Table linearity_series(const LinearityFit& fit,
                              const NormalizedSeries& imports,
                              const NormalizedSeries& exports) {
    Table t{{"year", "exports_norm", "imports_norm", "fitted"}, {}};
    for (Year y : fit.years_used) {
        double x = exports.values.at(y);
        t.rows.push_back({static_cast<double>(y.value()), x,
                          imports.values.at(y), fit.slope * x});
    }
    return t;
}

struct TsvShape {
    std::size_t columns = 0;
    std::size_t rows = 0;
};

/// Checks that a TSV has a non-empty header and that every row has the
/// same number of fields, all of them numbers.
inline TsvShape validate_plot_tsv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    TsvShape shape;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            throw Error("plot TSV: empty line " + std::to_string(line_no));
        }
        auto fields = csv::split(line, '\t');
        if (line_no == 1) {
            for (auto f : fields) {
                if (f.empty()) {
                    throw Error("plot TSV: empty column name");
                }
            }
            shape.columns = fields.size();
            continue;
        }
        if (fields.size() != shape.columns) {
            throw Error("plot TSV: line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(shape.columns));
        }
        for (auto f : fields) {
            double v = 0.0;
            if (!csv::parse_double(f, v)) {
                throw Error("plot TSV: non-numeric field '" + std::string(f) +
                            "' at line " + std::to_string(line_no));
            }
        }
        ++shape.rows;
    }
    if (line_no == 0) {
        throw Error("plot TSV: missing header");
    }
    return shape;
}

} // namespace ctrade::plot
