#pragma once

// Forward model used to validate the estimators.
//
// Per country: a GDP path with random yearly growth, total exports
// E = s G0 (G / G0)^rho and imports I = k'' E. Per pair and year: trade from
// the Coulomb equation with the configured omega, times lognormal noise,
// split into the two directed flows in proportion to the two interaction
// terms. Whatever a country's totals are not accounted for by the panel
// goes to a rest-of-world partner, so sum-over-partners totals reproduce
// the generating totals.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctrade/dataset.hpp"
#include "ctrade/json_out.hpp"
#include "ctrade/model.hpp"
#include "ctrade/random.hpp"
#include "ctrade/trade_data.hpp"

namespace ctrade {

/// Partner code carrying flows to and from countries outside the panel.
inline const CountryId rest_of_world{"ROW"};

struct SynthConfig {
    int n_countries = 4;
    YearRange years = default_fit_years();
    double alpha = 0.5;
    double beta = 1.7;
    double rho = 1.33;
    /// Same omega for every pair; empty means choose the smallest omega that
    /// keeps bilateral flows within max_bilateral_share of every total.
    std::optional<double> omega;
    /// Per-pair omega, either orientation.
    std::map<CountryPair, double> omega_overrides;
    double max_bilateral_share = 0.5;
    double gdp_min = 1e11;
    double gdp_max = 2e13;
    double growth_min = -0.03;
    double growth_max = 0.12;
    double export_share_min = 0.15;
    double export_share_max = 0.35;
    double k_double_prime_min = 0.8;
    double k_double_prime_max = 1.2;
    /// Trade is multiplied by exp(noise_sigma * z), z standard normal.
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;
};

struct SynthCountry {
    CountryId code;
    LatLon capital;
    /// E = export_scale * G^rho.
    double export_scale;
    double k_double_prime;
};

struct SynthResult {
    Dataset dataset;
    std::vector<SynthCountry> countries;
    /// Canonical (smaller code first) pair -> omega.
    std::map<CountryPair, double> omega;
    double omega_constant = 0.0;

    /// Ground truth, stored in the bundle manifest under "synthetic".
    json::json truth(const SynthConfig& cfg) const {
        json::json t;
        t["alpha"] = cfg.alpha;
        t["beta"] = cfg.beta;
        t["rho"] = cfg.rho;
        t["noise_sigma"] = cfg.noise_sigma;
        t["seed"] = cfg.seed;
        t["years"] = {cfg.years.first.value(), cfg.years.last.value()};
        t["omega_constant"] = omega_constant;
        for (const auto& [p, w] : omega) {
            t["omega"][p.str()] = w;
        }
        for (const auto& c : countries) {
            t["countries"][c.code.str()] = {
                {"export_scale", c.export_scale},
                {"k_double_prime", c.k_double_prime}};
        }
        return t;
    }
};

/// Three-letter codes AAA, AAB, ... for index 0, 1, ...
inline CountryId synthetic_code(int index) {
    std::string code(3, 'A');
    code[2] = static_cast<char>('A' + index % 26);
    code[1] = static_cast<char>('A' + (index / 26) % 26);
    code[0] = static_cast<char>('A' + (index / 676) % 26);
    return CountryId(code);
}

inline SynthResult generate_synthetic(const SynthConfig& cfg) {
    if (cfg.n_countries < 2) {
        throw Error("synthetic panel needs at least 2 countries");
    }
    if (cfg.n_countries > 500) {
        throw Error("synthetic panel supports at most 500 countries");
    }
    if (!positive_finite(cfg.alpha) || !std::isfinite(cfg.beta) ||
        !positive_finite(cfg.rho)) {
        throw Error("synthetic alpha and rho must be positive, beta finite");
    }
    if (!(cfg.noise_sigma >= 0) || !std::isfinite(cfg.noise_sigma)) {
        throw Error("noise_sigma must be non-negative");
    }
    if (cfg.omega && !positive_finite(*cfg.omega)) {
        throw Error("omega must be positive");
    }
    if (!(cfg.max_bilateral_share > 0 && cfg.max_bilateral_share <= 1)) {
        throw Error("max_bilateral_share must be in (0, 1]");
    }
    if (!(cfg.gdp_min > 0 && cfg.gdp_min <= cfg.gdp_max)) {
        throw Error("invalid GDP range");
    }

    Rng rng(cfg.seed);
    const int n = cfg.n_countries;
    const int n_years = cfg.years.size();

    SynthResult out;
    std::vector<std::vector<double>> gdp(n), exports(n), imports(n);
    std::map<CountryId, LatLon> coords;
    for (int i = 0; i < n; ++i) {
        CountryId code = synthetic_code(i);
        LatLon cap{};
        // Keep capitals at least 100 km apart.
        for (int attempt = 0;; ++attempt) {
            cap = {rng.uniform(-60.0, 60.0), rng.uniform(-180.0, 180.0)};
            bool ok = true;
            for (const auto& [c, p] : coords) {
                ok = ok && haversine_km(cap, p) >= 100.0;
            }
            if (ok) {
                break;
            }
            if (attempt > 10000) {
                throw Error("cannot place synthetic capitals");
            }
        }
        coords.emplace(code, cap);

        double g0 = std::exp(
            rng.uniform(std::log(cfg.gdp_min), std::log(cfg.gdp_max)));
        double share = rng.uniform(cfg.export_share_min, cfg.export_share_max);
        double kpp = rng.uniform(cfg.k_double_prime_min, cfg.k_double_prime_max);
        double g = g0;
        for (int t = 0; t < n_years; ++t) {
            if (t > 0) {
                g *= 1.0 + rng.uniform(cfg.growth_min, cfg.growth_max);
            }
            double e = share * g0 * std::pow(g / g0, cfg.rho);
            gdp[i].push_back(g);
            exports[i].push_back(e);
            imports[i].push_back(kpp * e);
        }
        out.countries.push_back(
            {code, cap, share * std::pow(g0, 1.0 - cfg.rho), kpp});
    }

    // Trade at omega = 1, noise included. Draw order is fixed regardless of
    // noise_sigma so that seeds stay comparable across noise levels.
    struct PairYear {
        int i;
        int j;
        int t;
        double trade_unit;
        double export_fraction;
    };
    std::vector<PairYear> cells;
    std::vector<std::vector<double>> distance_km(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double km = haversine_km(out.countries[i].capital,
                                     out.countries[j].capital);
            distance_km[i][j] = distance_km[j][i] = km;
            for (int t = 0; t < n_years; ++t) {
                PairTotals tot{exports[i][t], imports[i][t], exports[j][t],
                               imports[j][t]};
                double noise = std::exp(cfg.noise_sigma * rng.normal());
                double unit = trade_value(tot, km, {cfg.alpha, cfg.beta, 1.0});
                double la = cfg.alpha * (std::log(tot.exports_m) +
                                         std::log(tot.imports_n));
                double lb = cfg.alpha * (std::log(tot.imports_m) +
                                         std::log(tot.exports_n));
                double frac = 1.0 / (1.0 + std::exp(lb - la));
                cells.push_back({i, j, t, unit * noise, frac});
            }
        }
    }

    if (cfg.omega) {
        out.omega_constant = *cfg.omega;
    } else {
        std::vector<std::vector<double>> out_load(n, std::vector<double>(n_years)),
            in_load(n, std::vector<double>(n_years));
        for (const auto& c : cells) {
            double x_ij = c.trade_unit * c.export_fraction;
            double x_ji = c.trade_unit - x_ij;
            out_load[c.i][c.t] += x_ij;
            in_load[c.j][c.t] += x_ij;
            out_load[c.j][c.t] += x_ji;
            in_load[c.i][c.t] += x_ji;
        }
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int t = 0; t < n_years; ++t) {
                worst = std::max(worst, out_load[i][t] / exports[i][t]);
                worst = std::max(worst, in_load[i][t] / imports[i][t]);
            }
        }
        out.omega_constant = worst / cfg.max_bilateral_share;
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            out.omega[CountryPair(out.countries[i].code,
                                  out.countries[j].code)] = out.omega_constant;
        }
    }
    for (const auto& [p, w] : cfg.omega_overrides) {
        if (!positive_finite(w)) {
            throw Error("omega override must be positive for " + p.str());
        }
        CountryPair key = p.first < p.second ? p : p.swapped();
        auto it = out.omega.find(key);
        if (it == out.omega.end()) {
            throw Error("omega override for unknown pair " + p.str());
        }
        it->second = w;
    }

    std::vector<FlowRecord> records;
    std::vector<std::vector<double>> exp_sum(n, std::vector<double>(n_years)),
        imp_sum(n, std::vector<double>(n_years));
    for (const auto& c : cells) {
        const auto& ci = out.countries[c.i].code;
        const auto& cj = out.countries[c.j].code;
        double trade = c.trade_unit / out.omega.at(CountryPair(ci, cj));
        double x_ij = trade * c.export_fraction;
        double x_ji = trade - x_ij;
        Year y(cfg.years.first.value() + c.t);
        records.push_back({{ci, cj, y}, {x_ij, x_ji}});
        records.push_back({{cj, ci, y}, {x_ji, x_ij}});
        exp_sum[c.i][c.t] += x_ij;
        imp_sum[c.i][c.t] += x_ji;
        exp_sum[c.j][c.t] += x_ji;
        imp_sum[c.j][c.t] += x_ij;
    }
    std::map<CountryYear, double> gdp_values;
    for (int i = 0; i < n; ++i) {
        const auto& ci = out.countries[i].code;
        for (int t = 0; t < n_years; ++t) {
            Year y(cfg.years.first.value() + t);
            double row_exp = exports[i][t] - exp_sum[i][t];
            double row_imp = imports[i][t] - imp_sum[i][t];
            if (row_exp < 0 || row_imp < 0) {
                throw Error("infeasible synthetic config: bilateral flows of " +
                            ci.str() + " in " + std::to_string(y.value()) +
                            " exceed its totals; increase omega");
            }
            records.push_back({{ci, rest_of_world, y}, {row_exp, row_imp}});
            gdp_values[{ci, y}] = gdp[i][t];
        }
    }

    std::vector<DistanceTable::Entry> dist;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            dist.push_back({out.countries[i].code, out.countries[j].code,
                            distance_km[i][j]});
        }
    }

    out.dataset.flows = FlowPanel(records);
    out.dataset.gdp = GdpTable(std::move(gdp_values));
    out.dataset.distances = DistanceTable(dist);
    out.dataset.capitals = CapitalTable(std::move(coords));
    return out;
}

} // namespace ctrade
