#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "ctrade/types.hpp"

namespace ctrade {

struct Point {
    double x;
    double y;
};

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;

    double predict(double x) const { return intercept + slope * x; }
};

/// Ordinary least squares y = intercept + slope * x on mean-centred sums.
///
/// R^2 = 1 - SS_res / SS_tot. A constant y fitted exactly (SS_tot = 0,
/// SS_res = 0) reports R^2 = 1; a zero-variance x is rejected.
inline OlsFit ols(std::span<const Point> points) {
    const std::size_t n = points.size();
    if (n < 2) {
        throw Error("ols needs at least 2 points, got " + std::to_string(n));
    }
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw Error("ols input contains non-finite values");
        }
        mean_x += p.x;
        mean_y += p.y;
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& p : points) {
        double dx = p.x - mean_x;
        double dy = p.y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    bool all_same_x = std::all_of(points.begin(), points.end(),
                                  [&](const Point& p) { return p.x == points[0].x; });
    if (all_same_x || !(sxx > 0)) {
        throw Error("ols: x values have zero variance");
    }

    OlsFit fit;
    fit.n_points = n;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;

    double ss_res = 0.0;
    for (const auto& p : points) {
        double r = p.y - fit.predict(p.x);
        ss_res += r * r;
    }
    if (syy == 0.0) {
        if (ss_res != 0.0) {
            throw Error("ols: R^2 undefined for constant y with nonzero residual");
        }
        fit.r_squared = 1.0;
    } else {
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

/// Least squares through the origin, y = slope * x.
struct OriginFit {
    double slope = 0.0;
    /// Against mean-centred totals, so it may be negative for poor fits.
    double r_squared = 0.0;
    std::size_t n_points = 0;
};

inline OriginFit ols_through_origin(std::span<const Point> points) {
    const std::size_t n = points.size();
    if (n < 2) {
        throw Error("through-origin fit needs at least 2 points");
    }
    double sxx = 0.0;
    double sxy = 0.0;
    double mean_y = 0.0;
    for (const auto& p : points) {
        sxx += p.x * p.x;
        sxy += p.x * p.y;
        mean_y += p.y;
    }
    if (!(sxx > 0)) {
        throw Error("through-origin fit: all x values are zero");
    }
    mean_y /= static_cast<double>(n);
    OriginFit fit;
    fit.n_points = n;
    fit.slope = sxy / sxx;
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (const auto& p : points) {
        double r = p.y - fit.slope * p.x;
        ss_res += r * r;
        ss_tot += (p.y - mean_y) * (p.y - mean_y);
    }
    if (ss_tot == 0.0) {
        fit.r_squared = ss_res == 0.0 ? 1.0 : 0.0;
    } else {
        fit.r_squared = 1.0 - ss_res / ss_tot;
    }
    return fit;
}

} // namespace ctrade
