#pragma once

// Predictive form of the trade equation in terms of GDP:
//
//   Trade_mn(t) = K / omega_mn(t) * G_m^(alpha rho_m) G_n^(alpha rho_n) / R^beta
//
// with K = 2 k' k''.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ctrade/model.hpp"
#include "ctrade/types.hpp"

namespace ctrade {

/// Distance exponent of the inverse-square variant.
inline constexpr double coulomb_beta = 2.0;
/// Distance exponent estimated from the NAFTA trade ratio.
inline constexpr double default_beta = 1.7;

struct ComposedModel {
    double exponent_m = 1.0;
    double exponent_n = 1.0;
    double beta = default_beta;
    /// K.
    double prefactor = 1.0;
    std::map<CountryPair, double> omega_table;

    void validate() const {
        if (!positive_finite(prefactor)) {
            throw Error("prefactor must be positive and finite");
        }
        if (!std::isfinite(exponent_m) || !std::isfinite(exponent_n) ||
            !std::isfinite(beta)) {
            throw Error("model exponents must be finite");
        }
    }
};

inline ComposedModel compose(double alpha, double rho_m, double rho_n,
                             double beta, double k_prime,
                             double k_double_prime) {
    if (!std::isfinite(alpha) || !std::isfinite(rho_m) ||
        !std::isfinite(rho_n) || !std::isfinite(beta)) {
        throw Error("compose: inputs must be finite");
    }
    if (!positive_finite(k_prime) || !positive_finite(k_double_prime)) {
        throw Error("compose: k' and k'' must be positive");
    }
    ComposedModel m;
    m.exponent_m = alpha * rho_m;
    m.exponent_n = alpha * rho_n;
    m.beta = beta;
    m.prefactor = 2.0 * k_prime * k_double_prime;
    return m;
}

namespace detail {

inline double log_model_core(const ComposedModel& model, double gdp_m,
                             double gdp_n, double distance_km) {
    model.validate();
    if (!positive_finite(gdp_m) || !positive_finite(gdp_n)) {
        throw Error("GDP values must be positive");
    }
    if (!positive_finite(distance_km)) {
        throw Error("distance must be positive");
    }
    return std::log(model.prefactor) + model.exponent_m * std::log(gdp_m) +
           model.exponent_n * std::log(gdp_n) -
           model.beta * std::log(distance_km);
}

} // namespace detail

inline double predict_trade(const ComposedModel& model, double gdp_m,
                            double gdp_n, double distance_km, double omega) {
    if (!positive_finite(omega)) {
        throw Error("omega must be positive");
    }
    double v = std::exp(detail::log_model_core(model, gdp_m, gdp_n,
                                               distance_km) -
                        std::log(omega));
    if (!std::isfinite(v)) {
        throw Error("predicted trade overflows");
    }
    return v;
}

struct GdpObservation {
    Year year;
    double gdp_m;
    double gdp_n;
    double trade;
};

/// omega_mn(t) = K G_m^a G_n^b / (R^beta Trade_obs(t)) per year; years
/// without trade map to +infinity.
inline std::map<Year, double> residual_omega(
    std::span<const GdpObservation> panel, double distance_km,
    const ComposedModel& model) {
    std::map<Year, double> out;
    for (const auto& o : panel) {
        if (!(o.trade >= 0) || !std::isfinite(o.trade)) {
            throw Error("observed trade must be finite and non-negative in " +
                        std::to_string(o.year.value()));
        }
        double core = detail::log_model_core(model, o.gdp_m, o.gdp_n,
                                             distance_km);
        out[o.year] = o.trade == 0
                          ? std::numeric_limits<double>::infinity()
                          : std::exp(core - std::log(o.trade));
    }
    return out;
}

/// Replaces K so the model reproduces `trade` exactly at the given
/// reference inputs with omega = 1. Needed when raw-USD GDPs are used with
/// k', k'' fitted on normalized series.
inline ComposedModel calibrate_prefactor(ComposedModel model, double gdp_m,
                                         double gdp_n, double distance_km,
                                         double trade) {
    if (!positive_finite(trade)) {
        throw Error("reference trade must be positive");
    }
    model.prefactor = 1.0;
    double core = detail::log_model_core(model, gdp_m, gdp_n, distance_km);
    model.prefactor = std::exp(std::log(trade) - core);
    model.validate();
    return model;
}

enum class RhoAggregation { mean, median };

inline double aggregate_rho(std::span<const double> rhos, RhoAggregation how) {
    if (rhos.empty()) {
        throw Error("no rho values to aggregate");
    }
    std::vector<double> v(rhos.begin(), rhos.end());
    if (how == RhoAggregation::mean) {
        double s = 0.0;
        for (double r : v) {
            s += r;
        }
        return s / static_cast<double>(v.size());
    }
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace ctrade
