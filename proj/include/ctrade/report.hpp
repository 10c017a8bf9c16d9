#pragma once

// JSON fragments for fit results and the full fit report. See
// docs/report_schema.md for the layout.

#include <string>
#include <vector>

#include "ctrade/dataset.hpp"
#include "ctrade/estimation.hpp"
#include "ctrade/json_out.hpp"
#include "ctrade/predict.hpp"

namespace ctrade {

inline constexpr int report_schema_version = 1;

inline json::json years_json(const std::vector<Year>& years) {
    json::json a = json::json::array();
    for (Year y : years) {
        a.push_back(y.value());
    }
    return a;
}

inline json::json to_json(const OlsFit& f) {
    return {{"slope", f.slope},
            {"intercept", f.intercept},
            {"r_squared", f.r_squared},
            {"n_points", f.n_points}};
}

inline json::json to_json(const PairFit& f) {
    return {{"pair", f.pair.str()},
            {"alpha", f.alpha},
            {"fit", to_json(f.fit)},
            {"years_used", years_json(f.years_used)},
            {"iterations", f.iterations}};
}

inline json::json to_json(const TripleFit& f) {
    return {{"numerator", f.numerator.str()},
            {"denominator", f.denominator.str()},
            {"beta", f.beta},
            {"alpha_num", f.alpha_num},
            {"alpha_den", f.alpha_den},
            {"distance_ratio", f.distance_ratio},
            {"fit", to_json(f.fit)},
            {"years_used", years_json(f.years_used)}};
}

inline json::json to_json(const PowerLawFit& f) {
    return {{"country", f.country.str()},
            {"rho", f.rho},
            {"k_prime", f.k_prime},
            {"fit", to_json(f.fit)},
            {"years_used", years_json(f.years_used)}};
}

inline json::json to_json(const LinearityFit& f) {
    return {{"country", f.country.str()},
            {"slope", f.slope},
            {"r_squared", f.r_squared},
            {"n_points", f.n_points},
            {"years_used", years_json(f.years_used)}};
}

inline json::json to_json(const AlphaDistribution& d) {
    json::json s = json::json::array();
    for (double a : d.samples) {
        s.push_back(a);
    }
    return {{"mu", d.mu}, {"sigma", d.sigma}, {"n", d.samples.size()},
            {"samples", s}};
}

inline json::json to_json(const ComposedModel& m) {
    json::json j{{"exponent_m", m.exponent_m},
                 {"exponent_n", m.exponent_n},
                 {"beta", m.beta},
                 {"prefactor", m.prefactor}};
    json::json omega = json::json::object();
    for (const auto& [p, w] : m.omega_table) {
        omega[p.str()] = json::number(w);
    }
    j["omega_table"] = omega;
    return j;
}

/// Modelling assumptions that every report carries.
inline json::json assumption_notes() {
    return json::json::array({
        "Trade_mn(t) = export(m->n) + import(m<-n) read from reporter m's rows",
        "omega is held constant per pair over the fit window when fitting alpha",
        "beta assumes the two pairs share the same omega",
        "beta = intercept / ln(R_den / R_num); a negative value means the "
        "closer pair trades less than the distance term predicts",
        "the alpha centre is the arithmetic mean of the per-pair alphas",
        "sigma uses the population divisor N",
        "values are nominal USD with no deflation; missing years are skipped",
    });
}

struct FitReport {
    std::vector<PairFit> pair_fits;
    std::vector<TripleFit> triple_fits;
    std::optional<AlphaDistribution> distribution;
    std::vector<PowerLawFit> power_law_fits;
    std::vector<LinearityFit> linearity_fits;
    std::optional<ComposedModel> composed;
    /// "what: message" strings for fits that failed without aborting.
    std::vector<std::string> warnings;
    json::json metadata = json::json::object();

    json::json to_json() const {
        json::json j;
        j["schema_version"] = report_schema_version;
        j["tool_version"] = std::string(tool_version);
        auto list = [](const auto& v) {
            json::json a = json::json::array();
            for (const auto& x : v) {
                a.push_back(ctrade::to_json(x));
            }
            return a;
        };
        j["pair_fits"] = list(pair_fits);
        j["triple_fits"] = list(triple_fits);
        j["power_law_fits"] = list(power_law_fits);
        j["linearity_fits"] = list(linearity_fits);
        j["distribution"] =
            distribution ? ctrade::to_json(*distribution) : json::json();
        j["composed_model"] =
            composed ? ctrade::to_json(*composed) : json::json();
        j["warnings"] = warnings;
        json::json meta = metadata;
        meta["assumptions"] = assumption_notes();
        j["metadata"] = meta;
        return j;
    }
};

} // namespace ctrade
