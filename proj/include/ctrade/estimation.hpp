#pragma once

// Calibration of the Coulomb trade model from yearly panels:
//   - alpha per pair, chosen so that ln(trade) vs ln(interaction) has slope 1
//   - beta from the trade ratio of two pairs assumed to share omega
//   - rho and k' from ln(E~) = ln k' + rho ln(G~)
//   - k'' from the proportionality I~ = k'' E~

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctrade/bisection.hpp"
#include "ctrade/model.hpp"
#include "ctrade/normal.hpp"
#include "ctrade/ols.hpp"
#include "ctrade/trade_data.hpp"
#include "ctrade/types.hpp"

namespace ctrade {

/// Fewer usable years than this and a fit is refused.
inline constexpr std::size_t min_fit_years = 4;

// ---------------------------------------------------------------------------
// Series extraction
// ---------------------------------------------------------------------------

/// Yearly observations for `pair` inside `years`. The trade volume is read
/// from the first country's rows. Years with a missing or zero value in
/// any of the five inputs are skipped, not imputed.
inline std::vector<PairObservation> pair_observations(
    const FlowPanel& flows, const CountryPanel& totals, const CountryPair& pair,
    const YearRange& years) {
    std::vector<PairObservation> out;
    for (int y = years.first.value(); y <= years.last.value(); ++y) {
        Year year(y);
        auto tm = totals.find(pair.first, year);
        auto tn = totals.find(pair.second, year);
        auto trade = trade_volume(flows, pair.first, pair.second, year);
        if (!tm || !tn || !trade) {
            continue;
        }
        PairObservation obs{year,
                            {tm->total_exports, tm->total_imports,
                             tn->total_exports, tn->total_imports},
                            *trade};
        if (is_valid(obs)) {
            out.push_back(obs);
        }
    }
    return out;
}

/// Every unordered pair of countries in `countries` for which the first
/// (alphabetically smaller) country reported flows to the second.
inline std::vector<CountryPair> reported_pairs(
    const FlowPanel& flows, const std::set<CountryId>& countries) {
    std::set<CountryPair> out;
    for (const auto& [k, v] : flows.records()) {
        if (k.reporter < k.partner && countries.count(k.reporter) &&
            countries.count(k.partner)) {
            out.insert(CountryPair(k.reporter, k.partner));
        }
    }
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// alpha
// ---------------------------------------------------------------------------

struct FitAlphaOptions {
    double bracket_lo = 0.01;
    double bracket_hi = 3.0;
    /// Bisection keeps halving until the bracket is this narrow and the
    /// slope sits within root_slope_tolerance of 1.
    double alpha_tolerance = 1e-4;
    double root_slope_tolerance = 1e-10;
    /// A fit whose final slope misses 1 by more than this is not converged.
    double slope_tolerance = 1e-3;
    std::size_t min_years = min_fit_years;
};

struct PairFit {
    CountryPair pair;
    double alpha = 0.0;
    OlsFit fit;
    std::vector<Year> years_used;
    int iterations = 0;
};

/// Regression points (ln interaction at alpha, ln trade) for each year.
inline std::vector<Point> alpha_points(std::span<const PairObservation> obs,
                                       double alpha) {
    std::vector<Point> pts;
    pts.reserve(obs.size());
    for (const auto& o : obs) {
        auto lp = log_form(o, alpha);
        pts.push_back({lp.x, lp.y});
    }
    return pts;
}

/// Slope of ln(trade) on ln(interaction) at a trial alpha.
inline double alpha_slope(std::span<const PairObservation> obs, double alpha) {
    auto pts = alpha_points(obs, alpha);
    return ols(pts).slope;
}

inline PairFit fit_alpha(const CountryPair& pair,
                         std::span<const PairObservation> obs,
                         const FitAlphaOptions& opts = {}) {
    if (obs.size() < opts.min_years) {
        throw Error(pair.str() + ": fewer than " +
                    std::to_string(opts.min_years) + " usable years (" +
                    std::to_string(obs.size()) + ")");
    }
    for (const auto& o : obs) {
        if (!is_valid(o)) {
            throw Error(pair.str() + ": observation for " +
                        std::to_string(o.year.value()) +
                        " has non-positive values");
        }
    }
    auto g = [&](double alpha) { return alpha_slope(obs, alpha) - 1.0; };

    BisectionResult root;
    try {
        root = bisect(g, opts.bracket_lo, opts.bracket_hi,
                      {opts.alpha_tolerance, opts.root_slope_tolerance, 200});
    } catch (const NoSignChange& e) {
        throw Error(pair.str() + ": slope-one unattainable, g(" +
                    std::to_string(opts.bracket_lo) +
                    ") = " + std::to_string(e.f_lo()) + ", g(" +
                    std::to_string(opts.bracket_hi) +
                    ") = " + std::to_string(e.f_hi()));
    }

    PairFit out{pair, root.root, ols(alpha_points(obs, root.root)), {},
                root.iterations};
    for (const auto& o : obs) {
        out.years_used.push_back(o.year);
    }
    if (std::abs(out.fit.slope - 1.0) > opts.slope_tolerance) {
        throw Error(pair.str() + ": slope-one search did not converge (slope " +
                    std::to_string(out.fit.slope) + ")");
    }
    return out;
}

// ---------------------------------------------------------------------------
// beta
// ---------------------------------------------------------------------------

struct TripleFit {
    CountryPair numerator;
    CountryPair denominator;
    double beta = 0.0;
    OlsFit fit;
    /// R_den / R_num, the ratio whose logarithm multiplies beta.
    double distance_ratio = 0.0;
    double alpha_num = 0.0;
    double alpha_den = 0.0;
    std::vector<Year> years_used;
};

/// Dividing the trade equation of the numerator pair by that of the
/// denominator pair (equal omega) gives
///   ln(T_num / T_den) = ln(int_num / int_den) + beta ln(R_den / R_num),
/// so beta is the regression intercept over ln(R_den / R_num).
inline double beta_from_intercept(double intercept, double r_num,
                                  double r_den) {
    if (!(r_num > 0) || !(r_den > 0)) {
        throw Error("distances must be positive");
    }
    double log_ratio = std::log(r_den / r_num);
    if (log_ratio == 0.0) {
        throw Error("beta unidentifiable: both pairs are equally distant");
    }
    return intercept / log_ratio;
}

/// Points x' = ln(int_num / int_den), y' = ln(T_num / T_den) over the years
/// both series share.
inline std::vector<std::pair<Year, Point>> ratio_points(
    std::span<const PairObservation> num, std::span<const PairObservation> den,
    double alpha_num, double alpha_den) {
    std::map<Year, const PairObservation*> by_year;
    for (const auto& o : den) {
        by_year[o.year] = &o;
    }
    std::vector<std::pair<Year, Point>> out;
    for (const auto& o : num) {
        auto it = by_year.find(o.year);
        if (it == by_year.end()) {
            continue;
        }
        auto a = log_form(o, alpha_num);
        auto b = log_form(*it->second, alpha_den);
        out.push_back({o.year, {a.x - b.x, a.y - b.y}});
    }
    return out;
}

inline TripleFit fit_beta(const CountryPair& numerator,
                          std::span<const PairObservation> num_obs,
                          const CountryPair& denominator,
                          std::span<const PairObservation> den_obs,
                          double alpha_num, double alpha_den, double r_num,
                          double r_den, std::size_t min_years = min_fit_years) {
    if (!(r_num > 0) || !(r_den > 0)) {
        throw Error("distances must be positive");
    }
    if (r_num == r_den) {
        throw Error("beta unidentifiable: both pairs are equally distant");
    }
    auto rp = ratio_points(num_obs, den_obs, alpha_num, alpha_den);
    if (rp.size() < min_years) {
        throw Error(numerator.str() + " / " + denominator.str() +
                    ": fewer than " + std::to_string(min_years) +
                    " common years (" + std::to_string(rp.size()) + ")");
    }
    std::vector<Point> pts;
    TripleFit out{numerator, denominator, 0.0, {}, 0.0, 0.0, 0.0, {}};
    for (const auto& [y, p] : rp) {
        pts.push_back(p);
        out.years_used.push_back(y);
    }
    out.fit = ols(pts);
    out.beta = beta_from_intercept(out.fit.intercept, r_num, r_den);
    out.distance_ratio = r_den / r_num;
    out.alpha_num = alpha_num;
    out.alpha_den = alpha_den;
    return out;
}

// ---------------------------------------------------------------------------
// rho and linearity
// ---------------------------------------------------------------------------

struct PowerLawFit {
    CountryId country;
    double rho = 0.0;
    double k_prime = 0.0;
    OlsFit fit;
    std::vector<Year> years_used;
};

/// Years present in both series.
inline std::vector<Year> common_years(const NormalizedSeries& a,
                                      const NormalizedSeries& b) {
    std::vector<Year> out;
    for (const auto& [y, v] : a.values) {
        if (b.values.count(y)) {
            out.push_back(y);
        }
    }
    return out;
}

/// ln E~ = ln k' + rho ln G~.
inline PowerLawFit fit_rho(const CountryId& country,
                           const NormalizedSeries& exports,
                           const NormalizedSeries& gdp,
                           std::size_t min_years = min_fit_years) {
    auto years = common_years(exports, gdp);
    if (years.size() < min_years) {
        throw Error(country.str() + ": fewer than " +
                    std::to_string(min_years) +
                    " years with both exports and GDP");
    }
    std::vector<Point> pts;
    for (Year y : years) {
        double e = exports.values.at(y);
        double g = gdp.values.at(y);
        if (!(e > 0) || !(g > 0)) {
            throw Error(country.str() + ": non-positive export or GDP value in " +
                        std::to_string(y.value()));
        }
        pts.push_back({std::log(g), std::log(e)});
    }
    PowerLawFit out{country, 0.0, 0.0, {}, {}};
    out.fit = ols(pts);
    out.rho = out.fit.slope;
    out.k_prime = std::exp(out.fit.intercept);
    out.years_used = std::move(years);
    return out;
}

struct LinearityFit {
    CountryId country;
    double slope = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
    std::vector<Year> years_used;
};

/// Through-origin fit of I~ on E~.
inline LinearityFit fit_linearity(const CountryId& country,
                                  const NormalizedSeries& imports,
                                  const NormalizedSeries& exports,
                                  std::size_t min_years = min_fit_years) {
    auto years = common_years(exports, imports);
    if (years.size() < min_years) {
        throw Error(country.str() + ": fewer than " +
                    std::to_string(min_years) +
                    " years with both exports and imports");
    }
    std::vector<Point> pts;
    bool any_export = false;
    for (Year y : years) {
        double e = exports.values.at(y);
        any_export = any_export || e != 0.0;
        pts.push_back({e, imports.values.at(y)});
    }
    if (!any_export) {
        throw Error(country.str() + ": all exports are zero");
    }
    auto f = ols_through_origin(pts);
    return {country, f.slope, f.r_squared, f.n_points, std::move(years)};
}

} // namespace ctrade
