#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "ctrade/model.hpp"

using namespace ctrade;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

PairObservation obs(double em, double im, double en, double in, double trade) {
    return {Year(2010), {em, im, en, in}, trade};
}

/// Random totals spanning small to large economies.
struct TotalsGen {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> log_usd{std::log(1e6), std::log(5e12)};

    explicit TotalsGen(std::uint64_t seed) : rng(seed) {}

    PairTotals operator()() {
        return {std::exp(log_usd(rng)), std::exp(log_usd(rng)),
                std::exp(log_usd(rng)), std::exp(log_usd(rng))};
    }
};

double pow_oracle(const PairTotals& t, double alpha) {
    return std::pow(t.exports_m * t.imports_n, alpha) +
           std::pow(t.imports_m * t.exports_n, alpha);
}

} // namespace

TEST(InteractionTerm, UnitTotalsGiveTwo) {
    for (double a : {0.01, 0.47, 1.0, 2.5}) {
        EXPECT_DOUBLE_EQ(interaction_term({1, 1, 1, 1}, a), 2.0);
    }
}

TEST(InteractionTerm, SymmetricProducts) {
    EXPECT_DOUBLE_EQ(interaction_term({4, 1, 4, 1}, 0.5), 4.0);
}

TEST(InteractionTerm, MatchesExtendedPrecision) {
    // E_m = 2, I_n = 3, I_m = 5, E_n = 7.
    PairTotals t{2, 5, 7, 3};
    big a("0.47");
    big expected = boost::multiprecision::pow(big(6), a) +
                   boost::multiprecision::pow(big(35), a);
    double got = interaction_term(t, 0.47);
    EXPECT_NEAR(got, static_cast<double>(expected), 1e-14 * got);
    EXPECT_NEAR(got, 7.638853899189723, 1e-14);
}

TEST(InteractionTerm, Errors) {
    EXPECT_THROW(interaction_term({1, 1, 1, 1}, 0.0), Error);
    EXPECT_THROW(interaction_term({1, 1, 1, 1}, -0.5), Error);
    EXPECT_THROW(interaction_term({0, 1, 1, 1}, 0.5), Error);
    // (1e300 * 1e300)^2 overflows even though each factor is finite.
    EXPECT_THROW(interaction_term({1e300, 1e300, 1e300, 1e300}, 2.0), Error);
    EXPECT_TRUE(std::isfinite(
        log_interaction_term({1e300, 1e300, 1e300, 1e300}, 2.0)));
}

TEST(InteractionTerm, StrictlyMonotoneInAlpha) {
    // Both products > 1: increasing.
    PairTotals big_t{1e11, 2e11, 3e11, 4e11};
    double prev = interaction_term(big_t, 0.05);
    for (double a = 0.1; a < 2.0; a += 0.05) {
        double v = interaction_term(big_t, a);
        EXPECT_GT(v, prev);
        prev = v;
    }
    // Both products < 1: decreasing.
    PairTotals small_t{0.1, 0.2, 0.3, 0.4};
    prev = interaction_term(small_t, 0.05);
    for (double a = 0.1; a < 2.0; a += 0.05) {
        double v = interaction_term(small_t, a);
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(TradeValue, UnitDistance) {
    for (double beta : {0.0, 1.7, 2.0, -3.0}) {
        EXPECT_DOUBLE_EQ(trade_value({1, 1, 1, 1}, 1.0, {0.5, beta, 1.0}), 2.0);
    }
}

TEST(TradeValue, InverseInOmega) {
    PairTotals t{3e11, 2e11, 1e11, 4e11};
    double one = trade_value(t, 1500, {0.47, 1.7, 1.0});
    double two = trade_value(t, 1500, {0.47, 1.7, 2.0});
    EXPECT_NEAR(two, one / 2, 1e-14 * one);
}

TEST(TradeValue, MatchesDirectFormula) {
    TotalsGen gen(11);
    for (int i = 0; i < 100; ++i) {
        auto t = gen();
        double r = 500 + i * 37.0;
        double expected = pow_oracle(t, 0.47) / std::pow(r, 1.7);
        EXPECT_NEAR(trade_value(t, r, {0.47, 1.7, 1.0}), expected,
                    1e-12 * expected);
    }
}

TEST(TradeValue, Errors) {
    EXPECT_THROW(trade_value({1, 1, 1, 1}, 0.0, {0.5, 1.7, 1.0}), Error);
    EXPECT_THROW(trade_value({1, 1, 1, 1}, -5.0, {0.5, 1.7, 1.0}), Error);
    EXPECT_THROW(trade_value({1, 1, 1, 1}, 5.0, {0.5, 1.7, 0.0}), Error);
    EXPECT_THROW(trade_value({1, 1, 1, 1}, 5.0, {0.0, 1.7, 1.0}), Error);
}

TEST(TradeValue, InversionConsistency) {
    TotalsGen gen(12);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> alpha(0.05, 1.5), beta(0.0, 3.0),
        omega(0.01, 100.0), r(50.0, 20000.0);
    for (int i = 0; i < 1000; ++i) {
        auto t = gen();
        ModelParams p{alpha(rng), beta(rng), omega(rng)};
        double km = r(rng);
        double back = trade_value(t, km, p) * p.omega * std::pow(km, p.beta);
        double expected = interaction_term(t, p.alpha);
        EXPECT_NEAR(back, expected, 1e-12 * expected);
    }
}

TEST(TradeValue, SwapIsExact) {
    TotalsGen gen(13);
    for (int i = 0; i < 1000; ++i) {
        auto t = gen();
        ModelParams p{0.47, 1.7, 2.5};
        EXPECT_EQ(trade_value(t, 1234.5, p), trade_value(t.swapped(), 1234.5, p));
    }
}

TEST(LogForm, Examples) {
    const double e = std::numbers::e;
    auto p = log_form(obs(e / 2, e / 2, 1, 1, e), 1.0);
    EXPECT_NEAR(p.x, 1.0, 1e-15);
    EXPECT_NEAR(p.y, 1.0, 1e-15);
    EXPECT_EQ(log_form(obs(3, 4, 5, 6, 1.0), 0.5).y, 0.0);
}

TEST(LogForm, MatchesLogOfInteraction) {
    TotalsGen gen(14);
    for (int i = 0; i < 1000; ++i) {
        auto t = gen();
        double a = 0.05 + 0.001 * i;
        auto p = log_form({Year(2010), t, 12345.0}, a);
        double direct = std::log(pow_oracle(t, a));
        EXPECT_NEAR(p.x, direct, 1e-12 * std::abs(direct));
        EXPECT_DOUBLE_EQ(p.y, std::log(12345.0));
    }
}

TEST(SymmetryCheck, Examples) {
    EXPECT_LE(symmetry_check(obs(3e11, 2e11, 5e10, 7e10, 1e9), 0.5), 1e-12);
    EXPECT_LE(symmetry_check(obs(10, 3, 3, 10, 1), 0.5), 1e-12);
}

TEST(SymmetryCheck, RandomSweep) {
    TotalsGen gen(15);
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> alpha(0.05, 2.0);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_LE(symmetry_check({Year(2010), gen(), 1.0}, alpha(rng)), 1e-12);
    }
}

TEST(InvertDielectric, UnitCase) {
    // trade equal to the interaction term at R = 1.
    PairTotals t{2, 5, 7, 3};
    double trade = interaction_term(t, 0.47);
    EXPECT_NEAR(invert_dielectric({Year(2010), t, trade}, 1.0, 0.47, 1.7), 1.0,
                1e-15);
}

TEST(InvertDielectric, ZeroTradeIsInfinite) {
    double w = invert_dielectric(obs(1e11, 1e11, 1e11, 1e11, 0.0), 700, 0.47, 1.7);
    EXPECT_TRUE(std::isinf(w));
    EXPECT_GT(w, 0);
}

TEST(InvertDielectric, RecoversForwardOmega) {
    TotalsGen gen(17);
    for (int i = 0; i < 200; ++i) {
        auto t = gen();
        double km = 300 + 40.0 * i;
        double trade = trade_value(t, km, {0.47, 1.7, 3.5});
        double w = invert_dielectric({Year(2010), t, trade}, km, 0.47, 1.7);
        EXPECT_NEAR(w, 3.5, 1e-9);
    }
}

TEST(InvertDielectric, Errors) {
    EXPECT_THROW(invert_dielectric(obs(1, 1, 1, 1, -1), 10, 0.5, 1.7), Error);
    EXPECT_THROW(invert_dielectric(obs(-1, 1, 1, 1, 1), 10, 0.5, 1.7), Error);
    EXPECT_THROW(invert_dielectric(obs(1, 1, 1, 1, 1), 0, 0.5, 1.7), Error);
}

TEST(PairObservation, Validity) {
    EXPECT_TRUE(is_valid(obs(1, 2, 3, 4, 5)));
    EXPECT_FALSE(is_valid(obs(0, 2, 3, 4, 5)));
    EXPECT_FALSE(is_valid(obs(1, 2, 3, 4, 0)));
    EXPECT_FALSE(is_valid(obs(1, 2, std::numeric_limits<double>::infinity(), 4, 5)));
}

TEST(ModelParams, Validate) {
    EXPECT_NO_THROW((ModelParams{0.5, 1.7, 1.0}.validate()));
    EXPECT_THROW((ModelParams{0.0, 1.7, 1.0}.validate()), Error);
    EXPECT_THROW((ModelParams{0.5, NAN, 1.0}.validate()), Error);
    EXPECT_THROW((ModelParams{0.5, 1.7, -1.0}.validate()), Error);
}
