#pragma once

// Trade panels, country totals, distances and per-country normalization.
//
// All containers are immutable after construction and can be shared across
// threads for read-only use.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "ctrade/csv.hpp"
#include "ctrade/types.hpp"

namespace ctrade {

inline constexpr std::string_view flow_csv_header =
    "year,reporter,partner,export_usd,import_usd";
inline constexpr std::string_view gdp_csv_header = "year,country,gdp_usd";
inline constexpr std::string_view distance_csv_header = "country_a,country_b,km";
inline constexpr std::string_view capitals_csv_header = "country,lat,lon";

/// Sphere radius used for great-circle fallbacks.
inline constexpr double earth_radius_km = 6371.0;

/// Mirrored flows that differ by more than this share are rejected in strict
/// ingestion.
inline constexpr double default_mirror_threshold = 0.20;

// ---------------------------------------------------------------------------
// Flows
// ---------------------------------------------------------------------------

struct FlowKey {
    CountryId reporter;
    CountryId partner;
    Year year;

    friend auto operator<=>(const FlowKey&, const FlowKey&) = default;
    friend bool operator==(const FlowKey&, const FlowKey&) = default;
};

struct FlowValue {
    double export_usd = 0.0;
    double import_usd = 0.0;
};

struct FlowRecord {
    FlowKey key;
    FlowValue value;
};

/// Directed bilateral flows keyed by (reporter, partner, year).
class FlowPanel {
  public:
    FlowPanel() = default;

    /// Validates and indexes the records. Self-flows, negative or
    /// non-finite values and duplicate keys are rejected.
    explicit FlowPanel(const std::vector<FlowRecord>& records) {
        for (const auto& r : records) {
            check_record(r);
            if (!records_.emplace(r.key, r.value).second) {
                throw Error("duplicate flow record " + describe(r.key));
            }
        }
    }

    const std::map<FlowKey, FlowValue>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    std::optional<FlowValue> find(const CountryId& reporter,
                                  const CountryId& partner, Year year) const {
        auto it = records_.find(FlowKey{reporter, partner, year});
        if (it == records_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    std::set<CountryId> reporters() const {
        std::set<CountryId> out;
        for (const auto& [k, v] : records_) {
            out.insert(k.reporter);
        }
        return out;
    }

    std::set<CountryId> countries() const {
        std::set<CountryId> out;
        for (const auto& [k, v] : records_) {
            out.insert(k.reporter);
            out.insert(k.partner);
        }
        return out;
    }

    std::set<Year> years() const {
        std::set<Year> out;
        for (const auto& [k, v] : records_) {
            out.insert(k.year);
        }
        return out;
    }

    static std::string describe(const FlowKey& k) {
        return "(" + k.reporter.str() + ", " + k.partner.str() + ", " +
               std::to_string(k.year.value()) + ")";
    }

    static void check_record(const FlowRecord& r) {
        if (r.key.reporter == r.key.partner) {
            throw Error("self-flow " + describe(r.key));
        }
        if (!std::isfinite(r.value.export_usd) ||
            !std::isfinite(r.value.import_usd) || r.value.export_usd < 0 ||
            r.value.import_usd < 0) {
            throw Error("flow values must be finite and non-negative " +
                        describe(r.key));
        }
    }

  private:
    std::map<FlowKey, FlowValue> records_;
};

/// Trade volume between m and n read from reporter m's rows:
/// export(m -> n) + import(m <- n). Empty when m did not report n.
inline std::optional<double> trade_volume(const FlowPanel& flows,
                                          const CountryId& m,
                                          const CountryId& n, Year year) {
    auto v = flows.find(m, n, year);
    if (!v) {
        return std::nullopt;
    }
    return v->export_usd + v->import_usd;
}

inline FlowPanel parse_flows(std::istream& in, const std::string& source) {
    std::vector<FlowRecord> records;
    std::set<FlowKey> seen;
    csv::read_rows(
        in, source, flow_csv_header,
        [&](const std::vector<std::string_view>& f, std::size_t line) {
            if (f.size() != 5) {
                throw csv::ParseError(source, line,
                                      "expected 5 columns, found " +
                                          std::to_string(f.size()));
            }
            int year = 0;
            double exp_usd = 0.0;
            double imp_usd = 0.0;
            if (!csv::parse_int(f[0], year)) {
                throw csv::ParseError(source, line, "unparsable year");
            }
            if (!csv::parse_double(f[3], exp_usd) ||
                !csv::parse_double(f[4], imp_usd)) {
                throw csv::ParseError(source, line, "unparsable number");
            }
            if (exp_usd < 0 || imp_usd < 0) {
                throw csv::ParseError(source, line, "negative value");
            }
            try {
                FlowKey key{CountryId(f[1]), CountryId(f[2]), Year(year)};
                if (key.reporter == key.partner) {
                    throw csv::ParseError(source, line, "self-flow");
                }
                if (!seen.insert(key).second) {
                    throw csv::ParseError(source, line,
                                          "duplicate key " +
                                              FlowPanel::describe(key));
                }
                records.push_back({key, {exp_usd, imp_usd}});
            } catch (const csv::ParseError&) {
                throw;
            } catch (const Error& e) {
                throw csv::ParseError(source, line, e.what());
            }
        });
    return FlowPanel(records);
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return in;
}

inline FlowPanel load_flows(const std::string& path) {
    auto in = open_input(path);
    return parse_flows(in, path);
}

inline void write_flows(std::ostream& out, const FlowPanel& flows) {
    out << flow_csv_header << '\n';
    for (const auto& [k, v] : flows.records()) {
        out << k.year.value() << ',' << k.reporter.view() << ','
            << k.partner.view() << ',' << csv::format_number(v.export_usd)
            << ',' << csv::format_number(v.import_usd) << '\n';
    }
}

// ---------------------------------------------------------------------------
// GDP and country totals
// ---------------------------------------------------------------------------

using CountryYear = std::pair<CountryId, Year>;

/// GDP in nominal USD keyed by (country, year).
class GdpTable {
  public:
    GdpTable() = default;

    explicit GdpTable(std::map<CountryYear, double> values)
        : values_(std::move(values)) {
        for (const auto& [k, v] : values_) {
            if (!std::isfinite(v) || v < 0) {
                throw Error("GDP must be finite and non-negative for " +
                            k.first.str());
            }
        }
    }

    const std::map<CountryYear, double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    std::optional<double> find(const CountryId& c, Year y) const {
        auto it = values_.find({c, y});
        if (it == values_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

  private:
    std::map<CountryYear, double> values_;
};

inline GdpTable parse_gdp(std::istream& in, const std::string& source) {
    std::map<CountryYear, double> values;
    csv::read_rows(
        in, source, gdp_csv_header,
        [&](const std::vector<std::string_view>& f, std::size_t line) {
            if (f.size() != 3) {
                throw csv::ParseError(source, line,
                                      "expected 3 columns, found " +
                                          std::to_string(f.size()));
            }
            int year = 0;
            double gdp = 0.0;
            if (!csv::parse_int(f[0], year)) {
                throw csv::ParseError(source, line, "unparsable year");
            }
            if (!csv::parse_double(f[2], gdp)) {
                throw csv::ParseError(source, line, "unparsable number");
            }
            if (gdp < 0) {
                throw csv::ParseError(source, line, "negative value");
            }
            try {
                CountryYear key{CountryId(f[1]), Year(year)};
                if (!values.emplace(key, gdp).second) {
                    throw csv::ParseError(source, line, "duplicate key");
                }
            } catch (const csv::ParseError&) {
                throw;
            } catch (const Error& e) {
                throw csv::ParseError(source, line, e.what());
            }
        });
    return GdpTable(std::move(values));
}

inline GdpTable load_gdp(const std::string& path) {
    auto in = open_input(path);
    return parse_gdp(in, path);
}

inline void write_gdp(std::ostream& out, const GdpTable& gdp) {
    out << gdp_csv_header << '\n';
    for (const auto& [k, v] : gdp.values()) {
        out << k.second.value() << ',' << k.first.view() << ','
            << csv::format_number(v) << '\n';
    }
}

struct CountryTotals {
    double total_exports = 0.0;
    double total_imports = 0.0;
    std::optional<double> gdp;
};

/// Per-country yearly totals, typically derived from a FlowPanel.
class CountryPanel {
  public:
    CountryPanel() = default;
    explicit CountryPanel(std::map<CountryYear, CountryTotals> entries)
        : entries_(std::move(entries)) {}

    const std::map<CountryYear, CountryTotals>& entries() const {
        return entries_;
    }

    std::optional<CountryTotals> find(const CountryId& c, Year y) const {
        auto it = entries_.find({c, y});
        if (it == entries_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    std::set<CountryId> countries() const {
        std::set<CountryId> out;
        for (const auto& [k, v] : entries_) {
            out.insert(k.first);
        }
        return out;
    }

    std::map<Year, double> exports(const CountryId& c) const {
        return series(c, [](const CountryTotals& t) {
            return std::optional<double>(t.total_exports);
        });
    }
    std::map<Year, double> imports(const CountryId& c) const {
        return series(c, [](const CountryTotals& t) {
            return std::optional<double>(t.total_imports);
        });
    }
    std::map<Year, double> gdp(const CountryId& c) const {
        return series(c, [](const CountryTotals& t) { return t.gdp; });
    }

  private:
    template<class Get>
    std::map<Year, double> series(const CountryId& c, Get get) const {
        std::map<Year, double> out;
        for (auto it = entries_.lower_bound({c, Year(Year::min_value)});
             it != entries_.end() && it->first.first == c; ++it) {
            if (auto v = get(it->second)) {
                out.emplace(it->first.second, *v);
            }
        }
        return out;
    }

    std::map<CountryYear, CountryTotals> entries_;
};

/// Sums each reporter's flows over all partners: total exports are
/// sum_q E_mq(t), total imports sum_r I_mr(t). GDP is attached where the
/// table has an entry for the same (country, year).
inline CountryPanel aggregate_totals(const FlowPanel& flows,
                                     const GdpTable* gdp = nullptr) {
    if (flows.empty()) {
        throw Error("cannot aggregate an empty flow panel");
    }
    std::map<CountryYear, CountryTotals> out;
    for (const auto& [k, v] : flows.records()) {
        auto& t = out[{k.reporter, k.year}];
        t.total_exports += v.export_usd;
        t.total_imports += v.import_usd;
    }
    if (gdp != nullptr) {
        for (auto& [k, t] : out) {
            t.gdp = gdp->find(k.first, k.second);
        }
    }
    return CountryPanel(std::move(out));
}

// ---------------------------------------------------------------------------
// Mirror discrepancies
// ---------------------------------------------------------------------------

struct MirrorStats {
    std::size_t pairs_compared = 0;
    std::size_t over_threshold = 0;
    double max_relative = 0.0;
    double threshold = default_mirror_threshold;
};

inline double relative_gap(double a, double b) {
    double hi = std::max(a, b);
    return hi > 0 ? std::abs(a - b) / hi : 0.0;
}

/// Compares each reporter's export/import with the partner's mirrored
/// import/export for the same year. Each unordered pair-year counts once.
inline MirrorStats mirror_discrepancies(
    const FlowPanel& flows, double threshold = default_mirror_threshold) {
    MirrorStats stats;
    stats.threshold = threshold;
    for (const auto& [k, v] : flows.records()) {
        if (!(k.reporter < k.partner)) {
            continue;
        }
        auto mirror = flows.find(k.partner, k.reporter, k.year);
        if (!mirror) {
            continue;
        }
        ++stats.pairs_compared;
        double gap = std::max(relative_gap(v.export_usd, mirror->import_usd),
                              relative_gap(v.import_usd, mirror->export_usd));
        stats.max_relative = std::max(stats.max_relative, gap);
        if (gap > threshold) {
            ++stats.over_threshold;
        }
    }
    return stats;
}

/// Strict mode: throws on the first mirrored pair whose values disagree by
/// more than `threshold`.
inline void require_mirror_consistency(
    const FlowPanel& flows, double threshold = default_mirror_threshold) {
    for (const auto& [k, v] : flows.records()) {
        auto mirror = flows.find(k.partner, k.reporter, k.year);
        if (!mirror) {
            continue;
        }
        double gap = std::max(relative_gap(v.export_usd, mirror->import_usd),
                              relative_gap(v.import_usd, mirror->export_usd));
        if (gap > threshold) {
            throw Error("mirror discrepancy " + std::to_string(gap) +
                        " exceeds threshold for " + FlowPanel::describe(k));
        }
    }
}

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

/// Symmetric inter-capital distances. Keys are stored with the smaller
/// code first, so lookups in either order hit the same entry.
class DistanceTable {
  public:
    struct Entry {
        CountryId a;
        CountryId b;
        double km;
    };

    DistanceTable() = default;

    explicit DistanceTable(const std::vector<Entry>& entries) {
        for (const auto& e : entries) {
            if (e.a == e.b) {
                throw Error("distance entry for identical countries " +
                            e.a.str());
            }
            if (!std::isfinite(e.km) || e.km <= 0) {
                throw Error("distance must be positive for " + e.a.str() +
                            "-" + e.b.str());
            }
            auto [it, inserted] = km_.emplace(key(e.a, e.b), e.km);
            if (!inserted && it->second != e.km) {
                throw Error("conflicting distances for " + e.a.str() + "-" +
                            e.b.str());
            }
        }
    }

    std::optional<double> find(const CountryId& a, const CountryId& b) const {
        if (a == b) {
            return std::nullopt;
        }
        auto it = km_.find(key(a, b));
        if (it == km_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    const std::map<std::pair<CountryId, CountryId>, double>& entries() const {
        return km_;
    }
    std::size_t size() const { return km_.size(); }

  private:
    static std::pair<CountryId, CountryId> key(const CountryId& a,
                                               const CountryId& b) {
        return a < b ? std::pair{a, b} : std::pair{b, a};
    }

    std::map<std::pair<CountryId, CountryId>, double> km_;
};

inline double distance(const DistanceTable& table, const CountryId& a,
                       const CountryId& b) {
    if (a == b) {
        throw Error("distance requires two distinct countries");
    }
    auto km = table.find(a, b);
    if (!km) {
        throw Error("no distance for pair " + a.str() + "-" + b.str());
    }
    return *km;
}

inline DistanceTable parse_distances(std::istream& in,
                                     const std::string& source) {
    std::vector<DistanceTable::Entry> entries;
    std::map<std::pair<CountryId, CountryId>, double> seen;
    csv::read_rows(
        in, source, distance_csv_header,
        [&](const std::vector<std::string_view>& f, std::size_t line) {
            if (f.size() != 3) {
                throw csv::ParseError(source, line,
                                      "expected 3 columns, found " +
                                          std::to_string(f.size()));
            }
            double km = 0.0;
            if (!csv::parse_double(f[2], km)) {
                throw csv::ParseError(source, line, "unparsable number");
            }
            try {
                DistanceTable::Entry e{CountryId(f[0]), CountryId(f[1]), km};
                DistanceTable single({e});
                auto k = e.a < e.b ? std::pair{e.a, e.b} : std::pair{e.b, e.a};
                auto [it, inserted] = seen.emplace(k, km);
                if (!inserted && it->second != km) {
                    throw csv::ParseError(source, line,
                                          "conflicting duplicate distance");
                }
                entries.push_back(e);
            } catch (const csv::ParseError&) {
                throw;
            } catch (const Error& e) {
                throw csv::ParseError(source, line, e.what());
            }
        });
    return DistanceTable(entries);
}

inline DistanceTable load_distances(const std::string& path) {
    auto in = open_input(path);
    return parse_distances(in, path);
}

inline void write_distances(std::ostream& out, const DistanceTable& table) {
    out << distance_csv_header << '\n';
    for (const auto& [k, km] : table.entries()) {
        out << k.first.view() << ',' << k.second.view() << ','
            << csv::format_number(km) << '\n';
    }
}

struct LatLon {
    double lat_deg;
    double lon_deg;
};

/// Capital coordinates in degrees.
class CapitalTable {
  public:
    CapitalTable() = default;

    explicit CapitalTable(std::map<CountryId, LatLon> coords)
        : coords_(std::move(coords)) {
        for (const auto& [c, p] : coords_) {
            if (!(p.lat_deg >= -90 && p.lat_deg <= 90) ||
                !(p.lon_deg >= -180 && p.lon_deg <= 180)) {
                throw Error("capital coordinates out of range for " + c.str());
            }
        }
    }

    std::optional<LatLon> find(const CountryId& c) const {
        auto it = coords_.find(c);
        if (it == coords_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    const std::map<CountryId, LatLon>& entries() const { return coords_; }
    std::size_t size() const { return coords_.size(); }

  private:
    std::map<CountryId, LatLon> coords_;
};

/// Haversine distance on a sphere of radius 6371 km.
inline double haversine_km(LatLon p, LatLon q) {
    constexpr double deg = std::numbers::pi / 180.0;
    double dlat = (q.lat_deg - p.lat_deg) * deg;
    double dlon = (q.lon_deg - p.lon_deg) * deg;
    double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
               std::cos(p.lat_deg * deg) * std::cos(q.lat_deg * deg) *
                   std::sin(dlon / 2) * std::sin(dlon / 2);
    s = std::clamp(s, 0.0, 1.0);
    return 2.0 * earth_radius_km * std::asin(std::sqrt(s));
}

inline double great_circle_km(const CapitalTable& capitals, const CountryId& a,
                              const CountryId& b) {
    if (a == b) {
        throw Error("great-circle distance requires two distinct countries");
    }
    auto pa = capitals.find(a);
    auto pb = capitals.find(b);
    if (!pa || !pb) {
        throw Error("missing capital coordinates for " +
                    (pa ? b.str() : a.str()));
    }
    return haversine_km(*pa, *pb);
}

/// Stored distance first, then the great-circle fallback. The result must be
/// strictly positive.
inline double resolve_distance(const DistanceTable& table,
                               const CapitalTable& capitals,
                               const CountryId& a, const CountryId& b) {
    if (auto km = table.find(a, b)) {
        return *km;
    }
    if (!capitals.find(a) || !capitals.find(b)) {
        throw Error("no distance for pair " + a.str() + "-" + b.str());
    }
    double km = great_circle_km(capitals, a, b);
    if (!(km > 0)) {
        throw Error("zero great-circle distance for " + a.str() + "-" +
                    b.str());
    }
    return km;
}

inline CapitalTable parse_capitals(std::istream& in,
                                   const std::string& source) {
    std::map<CountryId, LatLon> coords;
    csv::read_rows(
        in, source, capitals_csv_header,
        [&](const std::vector<std::string_view>& f, std::size_t line) {
            if (f.size() != 3) {
                throw csv::ParseError(source, line,
                                      "expected 3 columns, found " +
                                          std::to_string(f.size()));
            }
            LatLon p{};
            if (!csv::parse_double(f[1], p.lat_deg) ||
                !csv::parse_double(f[2], p.lon_deg)) {
                throw csv::ParseError(source, line, "unparsable number");
            }
            try {
                CapitalTable single({{CountryId(f[0]), p}});
                if (!coords.emplace(CountryId(f[0]), p).second) {
                    throw csv::ParseError(source, line, "duplicate country");
                }
            } catch (const csv::ParseError&) {
                throw;
            } catch (const Error& e) {
                throw csv::ParseError(source, line, e.what());
            }
        });
    return CapitalTable(std::move(coords));
}

inline CapitalTable load_capitals(const std::string& path) {
    auto in = open_input(path);
    return parse_capitals(in, path);
}

inline void write_capitals(std::ostream& out, const CapitalTable& capitals) {
    out << capitals_csv_header << '\n';
    for (const auto& [c, p] : capitals.entries()) {
        out << c.view() << ',' << csv::format_number(p.lat_deg) << ','
            << csv::format_number(p.lon_deg) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// Series divided by its own maximum, so the largest value is exactly 1.
struct NormalizedSeries {
    std::map<Year, double> values;
    double max_raw = 0.0;
};

inline NormalizedSeries normalize(const std::map<Year, double>& series) {
    if (series.empty()) {
        throw Error("cannot normalize an empty series");
    }
    double hi = 0.0;
    for (const auto& [y, v] : series) {
        if (!std::isfinite(v) || v < 0) {
            throw Error("cannot normalize negative or non-finite values");
        }
        hi = std::max(hi, v);
    }
    if (!(hi > 0)) {
        throw Error("cannot normalize an all-zero series");
    }
    NormalizedSeries out;
    out.max_raw = hi;
    for (const auto& [y, v] : series) {
        out.values.emplace(y, v / hi);
    }
    return out;
}

/// Restricts a series to a year window.
inline std::map<Year, double> within(const std::map<Year, double>& series,
                                     const YearRange& range) {
    std::map<Year, double> out;
    for (const auto& [y, v] : series) {
        if (range.contains(y)) {
            out.emplace(y, v);
        }
    }
    return out;
}

} // namespace ctrade
