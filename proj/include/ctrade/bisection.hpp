#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "ctrade/types.hpp"

namespace ctrade {

struct BisectionOptions {
    /// Stop once the bracket is this narrow...
    double x_tolerance = 1e-4;
    /// ...and |f(root)| is at most this.
    double f_tolerance = std::numeric_limits<double>::infinity();
    int max_iterations = 200;
};

struct BisectionResult {
    double root = 0.0;
    double value = 0.0;
    int iterations = 0;
};

/// Raised when f has the same sign at both ends of the bracket.
class NoSignChange : public Error {
  public:
    NoSignChange(double lo, double f_lo, double hi, double f_hi)
        : Error(message(lo, f_lo, hi, f_hi)), f_lo_(f_lo), f_hi_(f_hi) {}

    double f_lo() const { return f_lo_; }
    double f_hi() const { return f_hi_; }

  private:
    static std::string message(double lo, double f_lo, double hi, double f_hi) {
        std::ostringstream os;
        os.precision(6);
        os << "no sign change over [" << lo << ", " << hi << "]: f(" << lo
           << ") = " << f_lo << ", f(" << hi << ") = " << f_hi;
        return os.str();
    }

    double f_lo_;
    double f_hi_;
};

/// Bisection on [lo, hi]. Only a sign change across the bracket is required,
/// not monotonicity. Iteration stops when both tolerances hold, the bracket
/// collapses to adjacent doubles, or max_iterations is reached.
template<class F>
BisectionResult bisect(F&& f, double lo, double hi,
                       const BisectionOptions& opts = {}) {
    if (!(lo < hi)) {
        throw Error("bisection bracket must satisfy lo < hi");
    }
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (!std::isfinite(f_lo) || !std::isfinite(f_hi)) {
        throw Error("bisection: function is not finite at the bracket ends");
    }
    if (f_lo == 0.0) {
        return {lo, 0.0, 0};
    }
    if (f_hi == 0.0) {
        return {hi, 0.0, 0};
    }
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw NoSignChange(lo, f_lo, hi, f_hi);
    }

    BisectionResult best{lo, f_lo, 0};
    if (std::abs(f_hi) < std::abs(f_lo)) {
        best = {hi, f_hi, 0};
    }
    for (int it = 1; it <= opts.max_iterations; ++it) {
        double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) {
            break;
        }
        double f_mid = f(mid);
        best = {mid, f_mid, it};
        if (f_mid == 0.0) {
            break;
        }
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= opts.x_tolerance &&
            std::abs(f_mid) <= opts.f_tolerance) {
            break;
        }
    }
    return best;
}

} // namespace ctrade
