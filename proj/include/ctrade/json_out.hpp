#pragma once

// JSON serialization with every floating-point number printed to 17
// significant digits. Non-finite numbers are written as the strings
// "inf", "-inf" and "nan".

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <json.hpp>

namespace ctrade::json {

using nlohmann::json;

/// Number, or the string "inf"/"-inf"/"nan" for non-finite values.
inline json number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

/// Reads a value written by number().
inline double to_double(const json& j) {
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") {
            return std::numeric_limits<double>::infinity();
        }
        if (s == "-inf") {
            return -std::numeric_limits<double>::infinity();
        }
        if (s == "nan") {
            return std::numeric_limits<double>::quiet_NaN();
        }
    }
    return j.get<double>();
}

namespace detail {

inline void write(const json& j, std::string& out, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent > 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                out += ',';
            }
            first = false;
            newline(depth + 1);
            out += json(it.key()).dump();
            out += indent > 0 ? ": " : ":";
            write(it.value(), out, indent, depth + 1);
        }
        newline(depth);
        out += '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) {
                out += ',';
            }
            first = false;
            newline(depth + 1);
            write(v, out, indent, depth + 1);
        }
        newline(depth);
        out += ']';
        return;
    }
    case json::value_t::number_float: {
        double v = j.get<double>();
        if (!std::isfinite(v)) {
            out += json(number(v)).dump();
            return;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
        return;
    }
    default:
        out += j.dump();
        return;
    }
}

} // namespace detail

inline std::string dump(const json& j, int indent = 2) {
    std::string out;
    detail::write(j, out, indent, 0);
    if (indent > 0) {
        out += '\n';
    }
    return out;
}

} // namespace ctrade::json
