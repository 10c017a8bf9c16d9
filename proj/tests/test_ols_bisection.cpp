#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ctrade/bisection.hpp"
#include "ctrade/ols.hpp"

using namespace ctrade;

namespace {

/// Normal equations solved in long double.
struct Reference {
    long double slope;
    long double intercept;
};

Reference normal_equations(const std::vector<Point>& pts) {
    long double n = pts.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        sx += p.x;
        sy += p.y;
        sxx += static_cast<long double>(p.x) * p.x;
        sxy += static_cast<long double>(p.x) * p.y;
    }
    long double det = n * sxx - sx * sx;
    return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

} // namespace

TEST(Ols, TwoPointLine) {
    std::vector<Point> pts{{1, 3}, {3, 7}};
    auto f = ols(pts);
    EXPECT_DOUBLE_EQ(f.slope, 2.0);
    EXPECT_DOUBLE_EQ(f.intercept, 1.0);
    EXPECT_DOUBLE_EQ(f.r_squared, 1.0);
    EXPECT_EQ(f.n_points, 2u);
}

TEST(Ols, IdentityLine) {
    std::vector<Point> pts;
    for (int i = 0; i < 10; ++i) {
        pts.push_back({double(i), double(i)});
    }
    auto f = ols(pts);
    EXPECT_NEAR(f.slope, 1.0, 1e-15);
    EXPECT_NEAR(f.intercept, 0.0, 1e-14);
    EXPECT_DOUBLE_EQ(f.r_squared, 1.0);
}

TEST(Ols, NoisyPointsMatchNormalEquations) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.5);
    std::uniform_real_distribution<double> xs(20.0, 30.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Point> pts;
        for (int i = 0; i < 100; ++i) {
            double x = xs(rng);
            pts.push_back({x, -4.0 + 1.3 * x + noise(rng)});
        }
        auto f = ols(pts);
        auto ref = normal_equations(pts);
        EXPECT_NEAR(f.slope, static_cast<double>(ref.slope), 1e-10);
        EXPECT_NEAR(f.intercept, static_cast<double>(ref.intercept), 1e-8);
        EXPECT_GE(f.r_squared, 0.0);
        EXPECT_LE(f.r_squared, 1.0);
    }
}

TEST(Ols, DegenerateInputs) {
    std::vector<Point> same_x{{2, 1}, {2, 5}, {2, 3}};
    EXPECT_THROW(ols(same_x), Error);
    std::vector<Point> one{{1, 1}};
    EXPECT_THROW(ols(one), Error);
    std::vector<Point> nan{{1, 1}, {2, NAN}};
    EXPECT_THROW(ols(nan), Error);
}

TEST(Ols, ConstantY) {
    std::vector<Point> pts{{1, 4}, {2, 4}, {3, 4}};
    auto f = ols(pts);
    EXPECT_EQ(f.slope, 0.0);
    EXPECT_EQ(f.intercept, 4.0);
    EXPECT_EQ(f.r_squared, 1.0);
}

TEST(Ols, RSquaredStaysInRange) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Point> pts;
        for (int i = 0; i < 5; ++i) {
            pts.push_back({u(rng), u(rng)});
        }
        auto f = ols(pts);
        EXPECT_GE(f.r_squared, 0.0);
        EXPECT_LE(f.r_squared, 1.0);
    }
}

TEST(OlsThroughOrigin, Examples) {
    std::vector<Point> pts{{1, 2}, {2, 4}, {3, 6}};
    auto f = ols_through_origin(pts);
    EXPECT_DOUBLE_EQ(f.slope, 2.0);
    EXPECT_DOUBLE_EQ(f.r_squared, 1.0);

    std::vector<Point> zeros{{0, 1}, {0, 2}};
    EXPECT_THROW(ols_through_origin(zeros), Error);
}

TEST(OlsThroughOrigin, MatchesClosedForm) {
    std::vector<Point> pts{{1, 1.2}, {2, 1.7}, {3, 3.1}, {4, 3.5}};
    double sxy = 1 * 1.2 + 2 * 1.7 + 3 * 3.1 + 4 * 3.5;
    double sxx = 1 + 4 + 9 + 16;
    EXPECT_NEAR(ols_through_origin(pts).slope, sxy / sxx, 1e-15);
}

TEST(Bisect, FindsSquareRootOfTwo) {
    auto r = bisect([](double x) { return x * x - 2; }, 0.0, 2.0, {1e-12});
    EXPECT_NEAR(r.root, std::sqrt(2.0), 1e-12);
    EXPECT_GT(r.iterations, 0);
}

TEST(Bisect, DefaultStopsOnBracketWidth) {
    auto r = bisect([](double x) { return x - 0.3; }, 0.0, 1.0);
    EXPECT_NEAR(r.root, 0.3, 1e-4);
    // 2^-14 < 1e-4 < 2^-13.
    EXPECT_EQ(r.iterations, 14);
}

TEST(Bisect, ValueToleranceKeepsIterating) {
    auto f = [](double x) { return 1e6 * (x - 0.3); };
    auto loose = bisect(f, 0.0, 1.0, {1e-4});
    auto tight = bisect(f, 0.0, 1.0, {1e-4, 1e-6});
    EXPECT_GT(tight.iterations, loose.iterations);
    EXPECT_LE(std::abs(tight.value), 1e-6);
}

TEST(Bisect, NoSignChangeReportsEndValues) {
    try {
        bisect([](double x) { return x * x + 1; }, -1.0, 2.0);
        FAIL() << "expected NoSignChange";
    } catch (const NoSignChange& e) {
        EXPECT_EQ(e.f_lo(), 2.0);
        EXPECT_EQ(e.f_hi(), 5.0);
    }
}

TEST(Bisect, ExactRootAtBracketEnd) {
    auto r = bisect([](double x) { return x - 1; }, 1.0, 2.0);
    EXPECT_EQ(r.root, 1.0);
    EXPECT_EQ(r.iterations, 0);
}

TEST(Bisect, BadBracket) {
    EXPECT_THROW(bisect([](double x) { return x; }, 1.0, -1.0), Error);
}
