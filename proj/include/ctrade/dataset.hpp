#pragma once

// Dataset bundle: a directory holding the four canonical CSVs and a
// manifest.json with the schema version, row counts and SHA-256 of each
// file. Writing the same dataset twice yields byte-identical files.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include "ctrade/json_out.hpp"
#include "ctrade/trade_data.hpp"

namespace ctrade {

inline constexpr int dataset_schema_version = 1;
inline constexpr std::string_view tool_version = "1.0.0";

inline constexpr std::string_view flows_file = "flows.csv";
inline constexpr std::string_view gdp_file = "gdp.csv";
inline constexpr std::string_view distances_file = "distances.csv";
inline constexpr std::string_view capitals_file = "capitals.csv";
inline constexpr std::string_view manifest_file = "manifest.json";

struct Dataset {
    FlowPanel flows;
    GdpTable gdp;
    DistanceTable distances;
    CapitalTable capitals;

    CountryPanel totals() const { return aggregate_totals(flows, &gdp); }

    double distance_km(const CountryId& a, const CountryId& b) const {
        return resolve_distance(distances, capitals, a, b);
    }
};

inline std::string sha256_hex(std::string_view data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
        EVP_MD_CTX_new(), EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw Error("sha256 failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::filesystem::path& path,
                       std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw Error("write failed for " + path.string());
    }
}

/// Countries, year coverage and mirror statistics of a dataset.
inline json::json validation_summary(const Dataset& ds) {
    json::json s;
    json::json countries = json::json::array();
    for (const auto& c : ds.flows.reporters()) {
        countries.push_back(c.str());
    }
    s["countries"] = countries;
    auto years = ds.flows.years();
    json::json cov;
    cov["count"] = years.size();
    if (!years.empty()) {
        cov["first"] = years.begin()->value();
        cov["last"] = years.rbegin()->value();
    }
    s["years"] = cov;
    s["flow_records"] = ds.flows.size();
    s["gdp_records"] = ds.gdp.size();
    s["distance_pairs"] = ds.distances.size();
    s["capitals"] = ds.capitals.size();
    auto m = mirror_discrepancies(ds.flows);
    s["mirror"] = {{"pairs_compared", m.pairs_compared},
                   {"over_threshold", m.over_threshold},
                   {"threshold", m.threshold},
                   {"max_relative_discrepancy", m.max_relative}};
    return s;
}

/// Writes the bundle into `dir` (created if needed). `extra` entries are
/// merged into the manifest, e.g. the ground truth of a synthetic panel.
inline json::json write_bundle(const std::filesystem::path& dir,
                               const Dataset& ds,
                               const json::json& extra = json::json::object()) {
    std::filesystem::create_directories(dir);
    auto render = [](auto writer, const auto& table) {
        std::ostringstream os;
        writer(os, table);
        return os.str();
    };
    struct File {
        std::string_view name;
        std::string content;
        std::size_t rows;
    };
    File files[] = {
        {flows_file, render(write_flows, ds.flows), ds.flows.size()},
        {gdp_file, render(write_gdp, ds.gdp), ds.gdp.size()},
        {distances_file, render(write_distances, ds.distances),
         ds.distances.size()},
        {capitals_file, render(write_capitals, ds.capitals),
         ds.capitals.size()},
    };
    json::json manifest = extra.is_object() ? extra : json::json::object();
    manifest["schema_version"] = dataset_schema_version;
    manifest["tool_version"] = std::string(tool_version);
    for (const auto& f : files) {
        write_file(dir / f.name, f.content);
        manifest["files"][std::string(f.name)] = {
            {"rows", f.rows}, {"sha256", sha256_hex(f.content)}};
    }
    manifest["summary"] = validation_summary(ds);
    write_file(dir / manifest_file, json::dump(manifest));
    return manifest;
}

struct LoadedBundle {
    Dataset dataset;
    json::json manifest;
};

/// Reads a bundle and checks every file against its manifest hash.
inline LoadedBundle read_bundle(const std::filesystem::path& dir) {
    auto manifest_text = read_file(dir / manifest_file);
    json::json manifest;
    try {
        manifest = json::json::parse(manifest_text);
    } catch (const std::exception& e) {
        throw Error("malformed manifest in " + dir.string() + ": " + e.what());
    }
    if (manifest.value("schema_version", 0) != dataset_schema_version) {
        throw Error("unsupported dataset schema version in " + dir.string());
    }
    auto load = [&](std::string_view name) {
        auto path = dir / name;
        auto text = read_file(path);
        auto expected = manifest["files"][std::string(name)].value(
            "sha256", std::string());
        if (expected != sha256_hex(text)) {
            throw Error("hash mismatch for " + path.string());
        }
        return std::pair{std::istringstream(text), path.string()};
    };
    LoadedBundle b;
    {
        auto [in, src] = load(flows_file);
        b.dataset.flows = parse_flows(in, src);
    }
    {
        auto [in, src] = load(gdp_file);
        b.dataset.gdp = parse_gdp(in, src);
    }
    {
        auto [in, src] = load(distances_file);
        b.dataset.distances = parse_distances(in, src);
    }
    {
        auto [in, src] = load(capitals_file);
        b.dataset.capitals = parse_capitals(in, src);
    }
    b.manifest = std::move(manifest);
    return b;
}

} // namespace ctrade
