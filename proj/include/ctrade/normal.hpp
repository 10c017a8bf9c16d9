#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "ctrade/types.hpp"

namespace ctrade {

/// F(x) = 1/2 [1 + erf((x - mu) / (sigma sqrt 2))], written through erfc so
/// the lower tail keeps relative precision. F(mu) is exactly 1/2.
inline double normal_cdf(double x, double mu, double sigma) {
    if (!(sigma > 0) || !std::isfinite(sigma)) {
        throw Error("normal_cdf: sigma must be positive");
    }
    double z = (x - mu) / sigma;
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Mean and population standard deviation (divisor N) of fitted alphas.
struct AlphaDistribution {
    double mu = 0.0;
    double sigma = 0.0;
    std::vector<double> samples;
};

/// Single-pass Welford accumulation.
inline AlphaDistribution alpha_distribution(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw Error("alpha distribution needs at least 2 samples");
    }
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (double a : samples) {
        if (!std::isfinite(a)) {
            throw Error("alpha samples must be finite");
        }
        ++n;
        double delta = a - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (a - mean);
    }
    AlphaDistribution out;
    out.mu = mean;
    out.sigma = std::sqrt(std::max(0.0, m2 / static_cast<double>(n)));
    out.samples.assign(samples.begin(), samples.end());
    return out;
}

struct CdfResidual {
    double alpha;
    double empirical_cdf;
    double model_cdf;
    double difference;
};

/// Empirical CDF i/N (1-based, ascending order) against the fitted normal
/// CDF. A zero-sigma distribution is treated as a unit step at mu.
inline std::vector<CdfResidual> cdf_residuals(std::span<const double> samples,
                                              const AlphaDistribution& dist) {
    if (samples.size() < 2) {
        throw Error("cdf residuals need at least 2 samples");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<CdfResidual> out;
    out.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double a = sorted[i];
        double model = dist.sigma > 0 ? normal_cdf(a, dist.mu, dist.sigma)
                                      : (a >= dist.mu ? 1.0 : 0.0);
        double empirical = static_cast<double>(i + 1) / n;
        out.push_back({a, empirical, model, empirical - model});
    }
    return out;
}

} // namespace ctrade
