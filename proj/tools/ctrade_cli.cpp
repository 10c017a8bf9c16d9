// ctrade: command-line driver for calibrating and applying the Coulomb trade
// model. Run `ctrade --help` for the command list.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctrade/ctrade.hpp"

namespace fs = std::filesystem;
using namespace ctrade;
using Json = nlohmann::json;

namespace {

struct CommonOptions {
    std::string dataset;
    std::string years;
    std::string out;
    std::string format = "json";
};

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    if (fs::path(out_path).has_parent_path()) {
        fs::create_directories(fs::path(out_path).parent_path());
    }
    write_file(out_path, text);
}

/// TSV output goes to a directory, one file per series.
fs::path tsv_dir(const CommonOptions& o) {
    if (o.out.empty() || o.out == "-") {
        throw Error("--format tsv needs --out DIR");
    }
    fs::create_directories(o.out);
    return o.out;
}

void check_format(const std::string& format) {
    if (format != "json" && format != "tsv") {
        throw Error("--format must be json or tsv");
    }
}

YearRange years_or(const std::string& text, YearRange fallback) {
    return text.empty() ? fallback : YearRange::parse(text);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    for (auto f : csv::split(text)) {
        if (!f.empty()) {
            out.emplace_back(f);
        }
    }
    return out;
}

Json dataset_metadata(const LoadedBundle& b, const std::string& path) {
    Json meta;
    meta["dataset"] = path;
    Json files = Json::object();
    if (b.manifest.contains("files")) {
        for (const auto& [name, info] : b.manifest["files"].items()) {
            files[name] = info.value("sha256", std::string());
        }
    }
    meta["data_hashes"] = files;
    return meta;
}

LoadedBundle open_dataset(const std::string& path) {
    if (path.empty()) {
        throw Error("--dataset is required");
    }
    return read_bundle(path);
}

std::vector<CountryPair> select_pairs(const Dataset& ds,
                                      const std::string& list) {
    if (list.empty() || list == "all") {
        return reported_pairs(ds.flows, ds.flows.reporters());
    }
    std::vector<CountryPair> out;
    for (const auto& s : split_list(list)) {
        out.push_back(CountryPair::parse(s));
    }
    return out;
}

std::vector<CountryId> select_countries(const Dataset& ds,
                                        const std::string& list) {
    std::vector<CountryId> out;
    if (list.empty() || list == "all") {
        for (const auto& c : ds.flows.reporters()) {
            out.push_back(c);
        }
        return out;
    }
    for (const auto& s : split_list(list)) {
        out.emplace_back(s);
    }
    return out;
}

void warn(FitReport& report, const std::string& what) {
    std::cerr << "warning: " << what << '\n';
    report.warnings.push_back(what);
}

// ---------------------------------------------------------------------------
// Pipeline stages shared by the individual commands and `report`
// ---------------------------------------------------------------------------

struct AlphaRun {
    CountryPair pair;
    std::vector<PairObservation> obs;
    PairFit fit;
};

std::vector<AlphaRun> run_alpha(const Dataset& ds, const CountryPanel& totals,
                                const std::vector<CountryPair>& pairs,
                                const YearRange& years, FitReport& report) {
    std::vector<AlphaRun> runs;
    for (const auto& p : pairs) {
        try {
            auto obs = pair_observations(ds.flows, totals, p, years);
            auto fit = fit_alpha(p, obs);
            report.pair_fits.push_back(fit);
            runs.push_back({p, std::move(obs), std::move(fit)});
        } catch (const Error& e) {
            warn(report, std::string("fit-alpha ") + e.what());
        }
    }
    return runs;
}

struct SeriesRun {
    CountryId country;
    NormalizedSeries a;
    NormalizedSeries b;
};

std::vector<std::pair<PowerLawFit, SeriesRun>> run_rho(
    const CountryPanel& totals, const std::vector<CountryId>& countries,
    const YearRange& years, FitReport& report) {
    std::vector<std::pair<PowerLawFit, SeriesRun>> out;
    for (const auto& c : countries) {
        try {
            auto gdp_raw = within(totals.gdp(c), years);
            if (gdp_raw.empty()) {
                throw Error(c.str() + ": no GDP in the requested years");
            }
            auto e = normalize(within(totals.exports(c), years));
            auto g = normalize(gdp_raw);
            auto fit = fit_rho(c, e, g);
            report.power_law_fits.push_back(fit);
            out.push_back({fit, {c, e, g}});
        } catch (const Error& e) {
            warn(report, std::string("fit-rho ") + e.what());
        }
    }
    return out;
}

std::vector<std::pair<LinearityFit, SeriesRun>> run_linearity(
    const CountryPanel& totals, const std::vector<CountryId>& countries,
    const YearRange& years, FitReport& report) {
    std::vector<std::pair<LinearityFit, SeriesRun>> out;
    for (const auto& c : countries) {
        try {
            auto exports = within(totals.exports(c), years);
            if (exports.empty()) {
                throw Error(c.str() + ": no totals in the requested years");
            }
            auto i = normalize(within(totals.imports(c), years));
            auto e = normalize(exports);
            auto fit = fit_linearity(c, i, e);
            report.linearity_fits.push_back(fit);
            out.push_back({fit, {c, i, e}});
        } catch (const Error& e) {
            warn(report, std::string("fit-linearity ") + e.what());
        }
    }
    return out;
}

double beta_for_mode(const std::string& mode, double fitted) {
    if (mode == "coulomb2") {
        return coulomb_beta;
    }
    if (mode != "fitted") {
        throw Error("--beta-mode must be fitted or coulomb2");
    }
    return fitted;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_ingest(const std::string& flows, const std::string& gdp,
               const std::string& distances, const std::string& capitals,
               bool strict, const std::string& out) {
    if (out.empty()) {
        throw Error("--out DIR is required");
    }
    Dataset ds;
    ds.flows = load_flows(flows);
    ds.gdp = load_gdp(gdp);
    ds.distances = load_distances(distances);
    if (!capitals.empty()) {
        ds.capitals = load_capitals(capitals);
    }
    if (strict) {
        require_mirror_consistency(ds.flows);
    }
    auto manifest = write_bundle(out, ds);
    std::cout << json::dump(manifest["summary"]);
    return 0;
}

int cmd_synth(const SynthConfig& cfg, const std::string& out) {
    if (out.empty()) {
        throw Error("--out DIR is required");
    }
    auto result = generate_synthetic(cfg);
    Json extra;
    extra["synthetic"] = result.truth(cfg);
    auto manifest = write_bundle(out, result.dataset, extra);
    std::cout << json::dump(manifest["summary"]);
    return 0;
}

int cmd_fit_alpha(const CommonOptions& o, const std::string& pairs) {
    check_format(o.format);
    auto bundle = open_dataset(o.dataset);
    const auto& ds = bundle.dataset;
    auto totals = ds.totals();
    FitReport report;
    report.metadata = dataset_metadata(bundle, o.dataset);
    auto runs = run_alpha(ds, totals, select_pairs(ds, pairs),
                          years_or(o.years, default_fit_years()), report);
    if (o.format == "tsv") {
        auto dir = tsv_dir(o);
        for (const auto& r : runs) {
            write_file(dir / ("alpha_" + r.pair.str() + ".tsv"),
                       plot::alpha_series(r.fit, r.obs).to_tsv());
        }
    } else {
        emit(o.out, json::dump(report.to_json()));
    }
    return 0;
}

struct BetaOptions {
    std::string numerator;
    std::string denominator;
    std::string alpha_source = "fit";
    double alpha_num = 0.0;
    double alpha_den = 0.0;
    std::optional<double> intercept;
    std::string distances;
};

int cmd_fit_beta(const CommonOptions& o, const BetaOptions& b) {
    check_format(o.format);
    auto num = CountryPair::parse(b.numerator);
    auto den = CountryPair::parse(b.denominator);

    if (b.intercept) {
        // Only the final division: intercept and two stored distances.
        DistanceTable table;
        if (!b.distances.empty()) {
            table = load_distances(b.distances);
        } else {
            table = open_dataset(o.dataset).dataset.distances;
        }
        double r_num = distance(table, num.first, num.second);
        double r_den = distance(table, den.first, den.second);
        Json j{{"numerator", num.str()},
               {"denominator", den.str()},
               {"intercept", *b.intercept},
               {"r_num_km", r_num},
               {"r_den_km", r_den},
               {"beta", beta_from_intercept(*b.intercept, r_num, r_den)}};
        emit(o.out, json::dump(j));
        return 0;
    }

    auto bundle = open_dataset(o.dataset);
    const auto& ds = bundle.dataset;
    auto totals = ds.totals();
    auto years = years_or(o.years, default_fit_years());
    auto num_obs = pair_observations(ds.flows, totals, num, years);
    auto den_obs = pair_observations(ds.flows, totals, den, years);

    double a_num = b.alpha_num;
    double a_den = b.alpha_den;
    if (b.alpha_source == "fit") {
        a_num = fit_alpha(num, num_obs).alpha;
        a_den = fit_alpha(den, den_obs).alpha;
    } else if (b.alpha_source != "given") {
        throw Error("--alpha-source must be fit or given");
    }
    auto fit = fit_beta(num, num_obs, den, den_obs, a_num, a_den,
                        ds.distance_km(num.first, num.second),
                        ds.distance_km(den.first, den.second));
    if (o.format == "tsv") {
        auto dir = tsv_dir(o);
        write_file(dir / ("beta_" + num.str() + "_" + den.str() + ".tsv"),
                   plot::beta_series(fit, num_obs, den_obs).to_tsv());
        return 0;
    }
    FitReport report;
    report.metadata = dataset_metadata(bundle, o.dataset);
    report.triple_fits.push_back(fit);
    emit(o.out, json::dump(report.to_json()));
    return 0;
}

int cmd_alpha_dist(const CommonOptions& o,
                   const std::vector<std::string>& inputs) {
    check_format(o.format);
    std::vector<double> alphas;
    for (const auto& path : inputs) {
        if (fs::path(path).extension() == ".json") {
            auto more = alphas_from_report(Json::parse(read_file(path)));
            alphas.insert(alphas.end(), more.begin(), more.end());
        } else {
            for (const auto& e : load_alpha_table(path)) {
                alphas.push_back(e.alpha);
            }
        }
    }
    auto dist = alpha_distribution(alphas);
    auto residuals = cdf_residuals(alphas, dist);
    if (o.format == "tsv") {
        auto dir = tsv_dir(o);
        write_file(dir / "alpha_cdf.tsv", plot::cdf_series(residuals).to_tsv());
        return 0;
    }
    double max_abs = 0.0;
    Json rows = Json::array();
    for (const auto& r : residuals) {
        max_abs = std::max(max_abs, std::abs(r.difference));
        rows.push_back({{"alpha", r.alpha},
                        {"empirical_cdf", r.empirical_cdf},
                        {"model_cdf", r.model_cdf},
                        {"difference", r.difference}});
    }
    Json j;
    j["schema_version"] = report_schema_version;
    j["distribution"] = to_json(dist);
    j["cdf"] = rows;
    j["max_abs_difference"] = max_abs;
    emit(o.out, json::dump(j));
    return 0;
}

int cmd_fit_rho(const CommonOptions& o, const std::string& countries) {
    check_format(o.format);
    auto bundle = open_dataset(o.dataset);
    auto totals = bundle.dataset.totals();
    FitReport report;
    report.metadata = dataset_metadata(bundle, o.dataset);
    auto runs = run_rho(totals, select_countries(bundle.dataset, countries),
                        years_or(o.years, default_fit_years()), report);
    if (o.format == "tsv") {
        auto dir = tsv_dir(o);
        for (const auto& [fit, s] : runs) {
            write_file(dir / ("rho_" + s.country.str() + ".tsv"),
                       plot::rho_series(fit, s.a, s.b).to_tsv());
        }
    } else {
        emit(o.out, json::dump(report.to_json()));
    }
    return 0;
}

int cmd_fit_linearity(const CommonOptions& o, const std::string& countries) {
    check_format(o.format);
    auto bundle = open_dataset(o.dataset);
    auto totals = bundle.dataset.totals();
    FitReport report;
    report.metadata = dataset_metadata(bundle, o.dataset);
    auto runs =
        run_linearity(totals, select_countries(bundle.dataset, countries),
                      years_or(o.years, default_fit_years()), report);
    if (o.format == "tsv") {
        auto dir = tsv_dir(o);
        for (const auto& [fit, s] : runs) {
            write_file(dir / ("linearity_" + s.country.str() + ".tsv"),
                       plot::linearity_series(fit, s.a, s.b).to_tsv());
        }
    } else {
        emit(o.out, json::dump(report.to_json()));
    }
    return 0;
}

struct PredictOptions {
    std::string pair;
    double alpha = 0.47;
    double rho = 1.33;
    std::optional<double> rho_m;
    std::optional<double> rho_n;
    double beta = default_beta;
    std::string beta_mode = "fitted";
    double k_prime = 1.0;
    double k_double_prime = 1.0;
    std::optional<double> prefactor;
    std::optional<int> calibrate_year;
    double omega = 1.0;
    std::optional<double> gdp_m;
    std::optional<double> gdp_n;
    std::optional<double> distance_km;
};

int cmd_predict(const CommonOptions& o, const PredictOptions& p) {
    auto model = compose(p.alpha, p.rho_m.value_or(p.rho),
                         p.rho_n.value_or(p.rho),
                         beta_for_mode(p.beta_mode, p.beta), p.k_prime,
                         p.k_double_prime);
    if (p.prefactor) {
        model.prefactor = *p.prefactor;
        model.validate();
    }

    Json j;
    j["schema_version"] = report_schema_version;

    if (p.gdp_m || p.gdp_n || p.distance_km) {
        if (!p.gdp_m || !p.gdp_n || !p.distance_km) {
            throw Error("--gdp-m, --gdp-n and --distance go together");
        }
        j["model"] = to_json(model);
        j["prediction"] = predict_trade(model, *p.gdp_m, *p.gdp_n,
                                        *p.distance_km, p.omega);
        emit(o.out, json::dump(j));
        return 0;
    }

    auto bundle = open_dataset(o.dataset);
    const auto& ds = bundle.dataset;
    if (p.pair.empty()) {
        throw Error("--pair is required with --dataset");
    }
    auto pair = CountryPair::parse(p.pair);
    auto years = years_or(o.years, default_fit_years());
    double km = ds.distance_km(pair.first, pair.second);

    std::vector<GdpObservation> panel;
    for (int y = years.first.value(); y <= years.last.value(); ++y) {
        Year year(y);
        auto gm = ds.gdp.find(pair.first, year);
        auto gn = ds.gdp.find(pair.second, year);
        auto trade = trade_volume(ds.flows, pair.first, pair.second, year);
        if (gm && gn && trade && *gm > 0 && *gn > 0) {
            panel.push_back({year, *gm, *gn, *trade});
        }
    }
    if (panel.empty()) {
        throw Error(pair.str() + ": no years with GDP and trade");
    }
    if (p.calibrate_year) {
        Year ref(*p.calibrate_year);
        auto it = std::find_if(panel.begin(), panel.end(),
                               [&](const auto& g) { return g.year == ref; });
        if (it == panel.end()) {
            throw Error("calibration year " + std::to_string(ref.value()) +
                        " has no data");
        }
        model = calibrate_prefactor(model, it->gdp_m, it->gdp_n, km, it->trade);
    }
    auto omegas = residual_omega(panel, km, model);
    Json rows = Json::array();
    for (const auto& g : panel) {
        rows.push_back(
            {{"year", g.year.value()},
             {"gdp_m", g.gdp_m},
             {"gdp_n", g.gdp_n},
             {"observed", g.trade},
             {"predicted", predict_trade(model, g.gdp_m, g.gdp_n, km, p.omega)},
             {"residual_omega", json::number(omegas.at(g.year))}});
    }
    j["model"] = to_json(model);
    j["pair"] = pair.str();
    j["distance_km"] = km;
    j["omega"] = p.omega;
    j["years"] = rows;
    j["metadata"] = dataset_metadata(bundle, o.dataset);
    emit(o.out, json::dump(j));
    return 0;
}

struct ReportOptions {
    std::string pairs = "all";
    std::string triples;
    std::string countries = "all";
    std::string rho_years;
    std::string rho_aggregate = "mean";
    std::string beta_mode = "fitted";
    std::string plots;
};

int cmd_report(const CommonOptions& o, const ReportOptions& r) {
    auto bundle = open_dataset(o.dataset);
    const auto& ds = bundle.dataset;
    auto totals = ds.totals();
    auto years = years_or(o.years, default_fit_years());
    auto rho_years = years_or(r.rho_years, years);

    FitReport report;
    report.metadata = dataset_metadata(bundle, o.dataset);
    report.metadata["years"] = {years.first.value(), years.last.value()};
    report.metadata["rho_years"] = {rho_years.first.value(),
                                    rho_years.last.value()};
    report.metadata["beta_mode"] = r.beta_mode;
    report.metadata["rho_aggregate"] = r.rho_aggregate;

    auto alpha_runs = run_alpha(ds, totals, select_pairs(ds, r.pairs), years,
                                report);
    std::map<CountryPair, const AlphaRun*> by_pair;
    std::vector<double> alphas;
    for (const auto& a : alpha_runs) {
        by_pair[a.pair] = &a;
        alphas.push_back(a.fit.alpha);
    }
    if (alphas.size() >= 2) {
        report.distribution = alpha_distribution(alphas);
    } else {
        warn(report, "alpha-dist: fewer than 2 fitted pairs");
    }

    for (const auto& t : split_list(r.triples)) {
        try {
            auto slash = t.find('/');
            if (slash == std::string::npos) {
                throw Error("triple must look like AAA-BBB/AAA-CCC: " + t);
            }
            auto num = CountryPair::parse(t.substr(0, slash));
            auto den = CountryPair::parse(t.substr(slash + 1));
            auto fitted = [&](const CountryPair& p) {
                auto it = by_pair.find(p);
                if (it != by_pair.end()) {
                    return it->second->fit.alpha;
                }
                return fit_alpha(p, pair_observations(ds.flows, totals, p,
                                                      years)).alpha;
            };
            auto num_obs = pair_observations(ds.flows, totals, num, years);
            auto den_obs = pair_observations(ds.flows, totals, den, years);
            report.triple_fits.push_back(
                fit_beta(num, num_obs, den, den_obs, fitted(num), fitted(den),
                         ds.distance_km(num.first, num.second),
                         ds.distance_km(den.first, den.second)));
        } catch (const Error& e) {
            warn(report, std::string("fit-beta ") + e.what());
        }
    }

    auto countries = select_countries(ds, r.countries);
    auto rho_runs = run_rho(totals, countries, rho_years, report);
    auto lin_runs = run_linearity(totals, countries, rho_years, report);

    if (report.distribution && !rho_runs.empty() && !lin_runs.empty()) {
        std::vector<double> rhos;
        double k_prime = 0.0;
        for (const auto& [f, s] : rho_runs) {
            rhos.push_back(f.rho);
            k_prime += f.k_prime;
        }
        k_prime /= static_cast<double>(rho_runs.size());
        double k_dp = 0.0;
        for (const auto& [f, s] : lin_runs) {
            k_dp += f.slope;
        }
        k_dp /= static_cast<double>(lin_runs.size());
        double rho = aggregate_rho(rhos, r.rho_aggregate == "median"
                                             ? RhoAggregation::median
                                             : RhoAggregation::mean);
        double beta = default_beta;
        if (!report.triple_fits.empty()) {
            beta = 0.0;
            for (const auto& t : report.triple_fits) {
                beta += t.beta;
            }
            beta /= static_cast<double>(report.triple_fits.size());
        }
        try {
            auto model = compose(report.distribution->mu, rho, rho,
                                 beta_for_mode(r.beta_mode, beta), k_prime,
                                 k_dp);
            // Per-pair omega: geometric mean of the yearly residuals.
            for (const auto& a : alpha_runs) {
                std::vector<GdpObservation> panel;
                for (const auto& ob : a.obs) {
                    auto gm = ds.gdp.find(a.pair.first, ob.year);
                    auto gn = ds.gdp.find(a.pair.second, ob.year);
                    if (gm && gn && *gm > 0 && *gn > 0) {
                        panel.push_back({ob.year, *gm, *gn, ob.trade});
                    }
                }
                if (panel.empty()) {
                    continue;
                }
                auto w = residual_omega(
                    panel, ds.distance_km(a.pair.first, a.pair.second), model);
                double log_sum = 0.0;
                for (const auto& [y, v] : w) {
                    log_sum += std::log(v);
                }
                model.omega_table[a.pair] =
                    std::exp(log_sum / static_cast<double>(w.size()));
            }
            report.composed = model;
        } catch (const Error& e) {
            warn(report, std::string("compose ") + e.what());
        }
    } else {
        warn(report, "compose: needs an alpha distribution and at least one "
                     "rho and linearity fit");
    }

    if (!r.plots.empty()) {
        fs::path dir = r.plots;
        fs::create_directories(dir);
        for (const auto& a : alpha_runs) {
            write_file(dir / ("alpha_" + a.pair.str() + ".tsv"),
                       plot::alpha_series(a.fit, a.obs).to_tsv());
        }
        if (report.distribution) {
            write_file(dir / "alpha_cdf.tsv",
                       plot::cdf_series(cdf_residuals(alphas,
                                                      *report.distribution))
                           .to_tsv());
        }
        for (const auto& [f, s] : rho_runs) {
            write_file(dir / ("rho_" + s.country.str() + ".tsv"),
                       plot::rho_series(f, s.a, s.b).to_tsv());
        }
        for (const auto& [f, s] : lin_runs) {
            write_file(dir / ("linearity_" + s.country.str() + ".tsv"),
                       plot::linearity_series(f, s.a, s.b).to_tsv());
        }
    }
    emit(o.out, json::dump(report.to_json()));
    return 0;
}

int cmd_check_tsv(const std::vector<std::string>& files) {
    for (const auto& f : files) {
        auto shape = plot::validate_plot_tsv(read_file(f));
        std::cout << f << ": " << shape.rows << " rows x " << shape.columns
                  << " columns\n";
    }
    return 0;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_dataset = true) {
    if (with_dataset) {
        cmd->add_option("--dataset", o.dataset, "Dataset bundle directory");
        cmd->add_option("--years", o.years, "Year window A:B");
    }
    cmd->add_option("--out", o.out,
                    "Output file (json) or directory (tsv); default stdout");
    cmd->add_option("--format", o.format, "json or tsv");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Calibrate and apply the Coulomb model of bilateral trade"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    CommonOptions common;

    std::string flows, gdp, distances, capitals, ingest_out;
    bool strict = false;
    auto* ingest = app.add_subcommand("ingest", "Validate CSVs into a bundle");
    ingest->add_option("--flows", flows, "flow CSV")->required();
    ingest->add_option("--gdp", gdp, "GDP CSV")->required();
    ingest->add_option("--distances", distances, "distance CSV")->required();
    ingest->add_option("--capitals", capitals, "capital coordinates CSV");
    ingest->add_flag("--strict", strict,
                     "Reject mirrored flows differing by more than 20%");
    ingest->add_option("--out", ingest_out, "Bundle directory")->required();

    SynthConfig synth_cfg;
    std::string synth_out, synth_years, synth_omega = "auto";
    auto* synth = app.add_subcommand("synth", "Generate a synthetic bundle");
    synth->add_option("--out", synth_out, "Bundle directory")->required();
    synth->add_option("--countries", synth_cfg.n_countries, "Country count");
    synth->add_option("--years", synth_years, "Year window A:B");
    synth->add_option("--alpha", synth_cfg.alpha, "Interaction exponent");
    synth->add_option("--beta", synth_cfg.beta, "Distance exponent");
    synth->add_option("--rho", synth_cfg.rho, "Export-GDP exponent");
    synth->add_option("--noise", synth_cfg.noise_sigma,
                      "Lognormal noise sigma on trade");
    synth->add_option("--omega", synth_omega, "Constant omega or 'auto'");
    synth->add_option("--seed", synth_cfg.seed, "RNG seed");

    std::string pairs = "all";
    auto* fa = app.add_subcommand("fit-alpha", "Slope-one alpha per pair");
    add_common(fa, common);
    fa->add_option("--pairs", pairs, "Comma list of AAA-BBB, or all");

    BetaOptions beta_opts;
    double intercept = 0.0;
    auto* fb = app.add_subcommand("fit-beta", "Beta from a trade ratio");
    add_common(fb, common);
    fb->add_option("--numerator", beta_opts.numerator, "Pair AAA-BBB")
        ->required();
    fb->add_option("--denominator", beta_opts.denominator, "Pair AAA-CCC")
        ->required();
    fb->add_option("--alpha-source", beta_opts.alpha_source, "fit or given");
    fb->add_option("--alpha-num", beta_opts.alpha_num, "Numerator alpha");
    fb->add_option("--alpha-den", beta_opts.alpha_den, "Denominator alpha");
    auto* intercept_opt = fb->add_option(
        "--intercept", intercept, "Use a known regression intercept");
    fb->add_option("--distances", beta_opts.distances,
                   "Distance CSV for --intercept");

    std::vector<std::string> dist_inputs;
    auto* ad = app.add_subcommand("alpha-dist", "Alpha mean, sigma and CDF");
    add_common(ad, common, false);
    ad->add_option("--input", dist_inputs,
                   "Alpha table CSV or fit-alpha JSON report")
        ->required();

    std::string countries = "all";
    auto* fr = app.add_subcommand("fit-rho", "Export-GDP power law");
    add_common(fr, common);
    fr->add_option("--countries", countries, "Comma list or all");
    auto* fl = app.add_subcommand("fit-linearity", "Import-export slope");
    add_common(fl, common);
    fl->add_option("--countries", countries, "Comma list or all");

    PredictOptions pred;
    double rho_m = 0, rho_n = 0, prefactor = 0, gdp_m = 0, gdp_n = 0, km = 0;
    int cal_year = 0;
    auto* pr = app.add_subcommand("predict", "Predicted trade and residual omega");
    add_common(pr, common);
    pr->add_option("--pair", pred.pair, "Pair AAA-BBB");
    pr->add_option("--alpha", pred.alpha, "alpha");
    pr->add_option("--rho", pred.rho, "rho for both countries");
    auto* rho_m_opt = pr->add_option("--rho-m", rho_m, "rho of the first country");
    auto* rho_n_opt = pr->add_option("--rho-n", rho_n, "rho of the second country");
    pr->add_option("--beta", pred.beta, "Distance exponent");
    pr->add_option("--beta-mode", pred.beta_mode, "fitted or coulomb2");
    pr->add_option("--k-prime", pred.k_prime, "k'");
    pr->add_option("--k-double-prime", pred.k_double_prime, "k''");
    auto* pref_opt = pr->add_option("--prefactor", prefactor, "K, overrides 2k'k''");
    auto* cal_opt = pr->add_option("--calibrate-year", cal_year,
                                   "Calibrate K to this year's trade");
    pr->add_option("--omega", pred.omega, "omega for predicted values");
    auto* gm_opt = pr->add_option("--gdp-m", gdp_m, "GDP of m (single evaluation)");
    auto* gn_opt = pr->add_option("--gdp-n", gdp_n, "GDP of n (single evaluation)");
    auto* km_opt = pr->add_option("--distance", km, "Distance km (single evaluation)");

    ReportOptions rep;
    auto* rp = app.add_subcommand("report", "Full pipeline report");
    add_common(rp, common);
    rp->add_option("--pairs", rep.pairs, "Comma list of pairs, or all");
    rp->add_option("--triples", rep.triples, "Comma list of AAA-BBB/AAA-CCC");
    rp->add_option("--countries", rep.countries, "Countries for rho fits");
    rp->add_option("--rho-years", rep.rho_years, "Window for rho fits");
    rp->add_option("--rho-aggregate", rep.rho_aggregate, "mean or median");
    rp->add_option("--beta-mode", rep.beta_mode, "fitted or coulomb2");
    rp->add_option("--plots", rep.plots, "Directory for plot TSVs");

    std::vector<std::string> tsv_files;
    auto* ct = app.add_subcommand("check-tsv", "Validate plot TSV files");
    ct->add_option("files", tsv_files, "TSV files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            return cmd_ingest(flows, gdp, distances, capitals, strict,
                              ingest_out);
        }
        if (synth->parsed()) {
            if (!synth_years.empty()) {
                synth_cfg.years = YearRange::parse(synth_years);
            }
            if (synth_omega != "auto") {
                double w = 0.0;
                if (!csv::parse_double(synth_omega, w)) {
                    throw Error("--omega must be a number or auto");
                }
                synth_cfg.omega = w;
            }
            return cmd_synth(synth_cfg, synth_out);
        }
        if (fa->parsed()) {
            return cmd_fit_alpha(common, pairs);
        }
        if (fb->parsed()) {
            if (intercept_opt->count() > 0) {
                beta_opts.intercept = intercept;
            }
            return cmd_fit_beta(common, beta_opts);
        }
        if (ad->parsed()) {
            return cmd_alpha_dist(common, dist_inputs);
        }
        if (fr->parsed()) {
            return cmd_fit_rho(common, countries);
        }
        if (fl->parsed()) {
            return cmd_fit_linearity(common, countries);
        }
        if (pr->parsed()) {
            if (rho_m_opt->count()) pred.rho_m = rho_m;
            if (rho_n_opt->count()) pred.rho_n = rho_n;
            if (pref_opt->count()) pred.prefactor = prefactor;
            if (cal_opt->count()) pred.calibrate_year = cal_year;
            if (gm_opt->count()) pred.gdp_m = gdp_m;
            if (gn_opt->count()) pred.gdp_n = gdp_n;
            if (km_opt->count()) pred.distance_km = km;
            return cmd_predict(common, pred);
        }
        if (rp->parsed()) {
            return cmd_report(common, rep);
        }
        if (ct->parsed()) {
            return cmd_check_tsv(tsv_files);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
