#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nonfrac/specfun.hpp"
#include "support.hpp"

using namespace nonfrac;

TEST(LogGamma, TrivialValues) {
    EXPECT_NEAR(log_gamma(1.0), 0.0, 1e-15);
    EXPECT_NEAR(log_gamma(2.0), 0.0, 1e-15);
    EXPECT_NEAR(log_gamma(0.5), 0.5723649429247001, 1e-14);
    EXPECT_NEAR(log_gamma(10.0), std::log(362880.0), 1e-13);
}

TEST(LogGamma, FrozenHighPrecisionValues) {
    // 30-digit reference values
    EXPECT_NEAR(log_gamma(1e-6), 13.8155099807494317144597411651, 1e-12);
    EXPECT_NEAR(log_gamma(0.3), 1.09579799481807556056299850031, 1e-14);
    EXPECT_NEAR(log_gamma(7.5), 7.53436423675873295515836763244, 1e-13);
    EXPECT_NEAR(log_gamma(123.456), 469.605547129929483500193998352, 469.6 * 1e-14);
    EXPECT_NEAR(log_gamma(1e6), 12815504.569147611659976971785, 12815504.6 * 1e-14);
}

TEST(LogGamma, AgreesWithStdLgammaAcrossRange) {
    testing_support::Gen g(11);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::exp(g.uniform(std::log(1e-6), std::log(1e6)));
        const double ref = std::lgamma(x);
        EXPECT_NEAR(log_gamma(x), ref, 1e-13 * std::max(1.0, std::abs(ref))) << "x = " << x;
    }
}

TEST(LogGamma, RejectsNonPositive) {
    EXPECT_THROW(log_gamma(0.0), DomainError);
    EXPECT_THROW(log_gamma(-1.5), DomainError);
}

TEST(SignedLogGamma, NegativeArguments) {
    for (double x : {-0.1, -0.45, -1.3, -2.7, -5.5}) {
        const auto r = signed_log_gamma(x);
        const double direct = std::tgamma(x);
        EXPECT_EQ(r.sign, direct > 0 ? 1 : -1) << x;
        EXPECT_NEAR(std::exp(r.log_abs), std::abs(direct), 1e-12 * std::abs(direct)) << x;
    }
    EXPECT_THROW(signed_log_gamma(-3.0), DomainError);
    EXPECT_THROW(signed_log_gamma(0.0), DomainError);
}

TEST(BetaRatio, TrivialValues) {
    EXPECT_DOUBLE_EQ(beta_ratio(1.0, 1.0, 1), 0.5);
    EXPECT_DOUBLE_EQ(beta_ratio(0.3, 2.2, 0), 1.0);
}

TEST(BetaRatio, MatchesLogGammaRoute) {
    const double via_log = std::exp(std::lgamma(3.2) + std::lgamma(1.2) - std::lgamma(4.4) -
                                    (std::lgamma(0.2) + std::lgamma(1.2) - std::lgamma(1.4)));
    EXPECT_NEAR(beta_ratio(0.2, 1.2, 3), via_log, 1e-13 * via_log);
}

TEST(BetaRatio, RejectsInvalidParameters) {
    EXPECT_THROW(beta_ratio(0.0, 1.0, 2), DomainError);
    EXPECT_THROW(beta_ratio(1.0, -1.0, 2), DomainError);
}

TEST(RiemannZeta, ClosedForms) {
    EXPECT_NEAR(riemann_zeta(2.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-14);
    EXPECT_NEAR(riemann_zeta(4.0), std::pow(std::numbers::pi, 4) / 90.0, 1e-14);
}

TEST(RiemannZeta, NearOneMatchesPartialSumsWithTailBound) {
    // sum_{n < N} n^{-s} plus the Euler-Maclaurin tail N^{1-s}/(s-1) + N^{-s}/2,
    // whose error is below s N^{-s-1}/12
    const double s = 1.25;
    const std::size_t big_n = 2'000'000;
    long double partial = 0.0L;
    for (std::size_t n = big_n - 1; n >= 1; --n) partial += std::pow(static_cast<long double>(n), -s);
    const double nn = static_cast<double>(big_n);
    const double oracle = static_cast<double>(partial) + std::pow(nn, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(nn, -s);
    EXPECT_NEAR(riemann_zeta(s), oracle, 1e-10 * oracle);
    EXPECT_NEAR(riemann_zeta(s), 4.59511182584294338068537803969, 1e-12);
}

TEST(RiemannZeta, RejectsSAtMostOne) {
    EXPECT_THROW(riemann_zeta(1.0), DomainError);
    EXPECT_THROW(riemann_zeta(0.5), DomainError);
}

TEST(Hypergeometric, TrivialCases) {
    EXPECT_DOUBLE_EQ(hypergeometric_pfq({{1.0, 1.0}, {2.0}, 0.0}), 1.0);
    EXPECT_DOUBLE_EQ(hypergeometric_pfq({{0.0, 0.3, 0.7, 1.1}, {1.5, 2.5, 0.9}, 1.0}), 1.0);
}

TEST(Hypergeometric, GeometricSeriesBelowUnitArgument) {
    // 2F1(1, 1; 1; z) = 1 / (1 - z)
    EXPECT_NEAR(hypergeometric_pfq({{1.0, 1.0}, {1.0}, 0.5}), 2.0, 2.0 * 1e-12);
    EXPECT_NEAR(hypergeometric_pfq({{0.5, 0.25}, {1.5}, 0.5}), 1.05260350991335252922692523787, 1e-12);
}

TEST(Hypergeometric, GaussSummationAtUnitArgument) {
    // 2F1(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))
    const double a = 0.3, b = 0.45, c = 1.9;
    const double gauss = std::exp(std::lgamma(c) + std::lgamma(c - a - b) - std::lgamma(c - a) - std::lgamma(c - b));
    EXPECT_NEAR(hypergeometric_pfq({{a, b}, {c}, 1.0}), gauss, 1e-11 * gauss);
}

TEST(Hypergeometric, FrozenUnitArgumentValues) {
    EXPECT_NEAR(hypergeometric_pfq({{0.5, 0.3, 1.0}, {1.7, 1.4}, 1.0}), 1.10994805055952580132553277574, 1e-11);
    // the two 4F3 sums at lag 0 for a = 0.1, b = 1.8 (d = 0.1)
    EXPECT_NEAR(hypergeometric_pfq({{1.0, 0.1, 0.45, -0.05}, {0.9, 1.05, 0.55}, 1.0}),
                0.992865987226254045165287400508, 1e-11);
    EXPECT_NEAR(hypergeometric_pfq({{1.0, 0.6, 0.45, 0.95}, {1.4, 1.05, 1.55}, 1.0}),
                1.2370474477798098116193417856, 1e-11);
}

TEST(Hypergeometric, LagZeroSeriesMatchesLongDirectSummation) {
    // 10^6 terms in extended precision; the terms decay like C n^{-2}, so the
    // remainder is n * term_n to leading order
    const std::vector<long double> num{1.0L, 0.1L, 0.45L, -0.05L};
    const std::vector<long double> den{0.9L, 1.05L, 0.55L};
    long double term = 1.0L, sum = 1.0L;
    const std::size_t terms = 1'000'000;
    for (std::size_t n = 0; n + 1 < terms; ++n) {
        long double r = 1.0L / (n + 1.0L);
        for (auto a : num) r *= (n + a);
        for (auto b : den) r /= (n + b);
        term *= r;
        sum += term;
    }
    const long double tail = term * static_cast<long double>(terms);
    const double oracle = static_cast<double>(sum + tail);
    EXPECT_NEAR(hypergeometric_pfq({{1.0, 0.1, 0.45, -0.05}, {0.9, 1.05, 0.55}, 1.0}), oracle, 1e-9);
}

TEST(Hypergeometric, TerminatingSeriesIsExactPolynomial) {
    // 2F1(-3, b; c; z) is a cubic in z
    const double b = 0.7, c = 1.3, z = 0.9;
    double direct = 0.0, term = 1.0;
    for (int n = 0; n <= 3; ++n) {
        direct += term;
        term *= (n - 3.0) * (n + b) / ((n + c) * (n + 1.0)) * z;
    }
    EXPECT_NEAR(hypergeometric_pfq({{-3.0, b}, {c}, z}), direct, 1e-14);
}

TEST(Hypergeometric, ErrorConditions) {
    EXPECT_THROW(hypergeometric_pfq({{1.0, 1.0}, {0.0}, 0.5}), DomainError);
    EXPECT_THROW(hypergeometric_pfq({{1.0, 1.0}, {-2.0}, 0.5}), DomainError);
    // excess 0 at unit argument
    EXPECT_THROW(hypergeometric_pfq({{1.0, 1.0}, {2.0}, 1.0}), ConvergenceError);
    EXPECT_THROW(hypergeometric_pfq({{1.0, 1.0, 1.0}, {2.0}, 0.5}), ConvergenceError);
    EXPECT_THROW(hypergeometric_pfq({{0.5, 0.5}, {1.5}, 1.5}), ConvergenceError);
}

TEST(Hypergeometric, ParameterExcess) {
    EXPECT_DOUBLE_EQ(parameter_excess({{1.0, 0.5}, {3.0}, 1.0}), 1.5);
}
