#pragma once

// Evaluation of the Coulomb trade equation
//
//   Trade_mn(t) = [(E_m I_n)^alpha + (I_m E_n)^alpha] / (omega_mn R_mn^beta)
//
// where E and I are total exports and imports. All powers are taken in log
// space: E*I for large economies is ~1e24 USD^2.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ctrade/types.hpp"

namespace ctrade {

/// Total exports and imports of both countries of a pair in one year.
struct PairTotals {
    double exports_m;
    double imports_m;
    double exports_n;
    double imports_n;

    /// Roles of m and n exchanged.
    PairTotals swapped() const {
        return {exports_n, imports_n, exports_m, imports_m};
    }
};

/// One year of a bilateral series: totals of both countries and the
/// observed trade volume between them.
struct PairObservation {
    Year year;
    PairTotals totals;
    double trade;
};

inline bool positive_finite(double v) { return std::isfinite(v) && v > 0; }

/// True when all five values are strictly positive and finite.
inline bool is_valid(const PairObservation& obs) {
    const auto& t = obs.totals;
    return positive_finite(t.exports_m) && positive_finite(t.imports_m) &&
           positive_finite(t.exports_n) && positive_finite(t.imports_n) &&
           positive_finite(obs.trade);
}

/// alpha, beta and the per-pair dielectric constant omega (which absorbs the
/// common weight of both interaction terms).
struct ModelParams {
    double alpha;
    double beta;
    double omega;

    void validate() const {
        if (!positive_finite(alpha)) {
            throw Error("alpha must be positive and finite");
        }
        if (!std::isfinite(beta)) {
            throw Error("beta must be finite");
        }
        if (!positive_finite(omega)) {
            throw Error("omega must be positive and finite");
        }
    }
};

namespace detail {

inline void check_totals(const PairTotals& t) {
    if (!positive_finite(t.exports_m) || !positive_finite(t.imports_m) ||
        !positive_finite(t.exports_n) || !positive_finite(t.imports_n)) {
        throw Error("export and import totals must be positive and finite");
    }
}

inline void check_alpha(double alpha) {
    if (!positive_finite(alpha)) {
        throw Error("alpha must be positive and finite");
    }
}

} // namespace detail

/// ln[(E_m I_n)^alpha + (I_m E_n)^alpha], evaluated with log-sum-exp so that
/// it stays finite where the interaction term itself would overflow.
inline double log_interaction_term(const PairTotals& t, double alpha) {
    detail::check_totals(t);
    detail::check_alpha(alpha);
    double a = alpha * (std::log(t.exports_m) + std::log(t.imports_n));
    double b = alpha * (std::log(t.imports_m) + std::log(t.exports_n));
    double hi = std::max(a, b);
    double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

/// (E_m I_n)^alpha + (I_m E_n)^alpha.
inline double interaction_term(const PairTotals& t, double alpha) {
    detail::check_totals(t);
    detail::check_alpha(alpha);
    double value =
        std::exp(alpha * std::log(t.exports_m * t.imports_n)) +
        std::exp(alpha * std::log(t.imports_m * t.exports_n));
    if (!std::isfinite(value)) {
        throw Error("interaction term overflows for alpha = " +
                    std::to_string(alpha));
    }
    return value;
}

/// Predicted bilateral trade for the given totals, distance and parameters.
inline double trade_value(const PairTotals& t, double distance_km,
                          const ModelParams& params) {
    params.validate();
    if (!(distance_km > 0) || !std::isfinite(distance_km)) {
        throw Error("distance must be positive");
    }
    double log_value = log_interaction_term(t, params.alpha) -
                       std::log(params.omega) -
                       params.beta * std::log(distance_km);
    double value = std::exp(log_value);
    if (!std::isfinite(value)) {
        throw Error("trade value overflows");
    }
    return value;
}

/// A point of the slope-one regression: x = ln(interaction), y = ln(trade).
struct LogPoint {
    double x;
    double y;
};

inline LogPoint log_form(const PairObservation& obs, double alpha) {
    if (!positive_finite(obs.trade)) {
        throw Error("trade must be positive for the log form");
    }
    return {log_interaction_term(obs.totals, alpha), std::log(obs.trade)};
}

/// Relative difference between the model evaluated for (m, n) and for
/// (n, m) with the same omega and distance. Zero up to roundoff because the
/// two interaction terms carry equal weight.
inline double symmetry_check(const PairObservation& obs, double alpha) {
    ModelParams p{alpha, 1.0, 1.0};
    double forward = trade_value(obs.totals, 1.0, p);
    double reverse = trade_value(obs.totals.swapped(), 1.0, p);
    double hi = std::max(forward, reverse);
    return hi > 0 ? std::abs(forward - reverse) / hi : 0.0;
}

/// omega = interaction / (trade * R^beta). Zero trade yields +infinity: a
/// pair that does not trade at all has an unbounded dielectric constant.
inline double invert_dielectric(const PairObservation& obs, double distance_km,
                                double alpha, double beta) {
    if (!(distance_km > 0) || !std::isfinite(distance_km)) {
        throw Error("distance must be positive");
    }
    if (!(obs.trade >= 0) || !std::isfinite(obs.trade)) {
        throw Error("trade must be finite and non-negative");
    }
    const auto& t = obs.totals;
    if (t.exports_m < 0 || t.imports_m < 0 || t.exports_n < 0 ||
        t.imports_n < 0) {
        throw Error("negative export or import totals");
    }
    if (!std::isfinite(beta)) {
        throw Error("beta must be finite");
    }
    if (obs.trade == 0) {
        return std::numeric_limits<double>::infinity();
    }
    double log_omega = log_interaction_term(t, alpha) - std::log(obs.trade) -
                       beta * std::log(distance_km);
    return std::exp(log_omega);
}

} // namespace ctrade
