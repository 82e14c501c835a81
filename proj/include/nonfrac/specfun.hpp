#pragma once

/// Special functions used by the process definitions: log-gamma (plain and
/// sign-tracked), Beta-function ratios, Riemann zeta and generalized
/// hypergeometric series at unit argument.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "nonfrac/error.hpp"

namespace nonfrac {

namespace detail {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// ln Gamma(x) for x >= 0.5 (Lanczos, g = 7).
inline double lanczos_log_gamma(double x) {
    const double z = x - 1.0;
    double acc = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        acc += kLanczos[i] / (z + static_cast<double>(i));
    }
    const double t = z + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
           std::log(acc);
}

// ln Gamma(x) for x >= 15 (Stirling series, error below 1e-16 there).
inline double stirling_log_gamma(double x) {
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series =
        inv *
        (1.0 / 12.0 +
         inv2 * (-1.0 / 360.0 +
                 inv2 * (1.0 / 1260.0 +
                         inv2 * (-1.0 / 1680.0 +
                                 inv2 * (1.0 / 1188.0 +
                                         inv2 * (-691.0 / 360360.0 + inv2 / 156.0))))));
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

// sin(pi x) with the argument reduced exactly first.
inline double sin_pi(double x) {
    const double n = std::round(x);
    const double r = x - n;
    const double s = std::sin(std::numbers::pi * r);
    return (std::fmod(std::abs(n), 2.0) == 1.0) ? -s : s;
}

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

}  // namespace detail

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("log_gamma: requires x > 0, got " + std::to_string(x));
    }
    if (x < 0.5) return detail::lanczos_log_gamma(x + 1.0) - std::log(x);
    if (x < 15.0) return detail::lanczos_log_gamma(x);
    return detail::stirling_log_gamma(x);
}

/// log|Gamma(x)| together with the sign of Gamma(x).
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;
};

/// Gamma(x) for any real x that is not a pole, as sign and log-magnitude
/// (reflection formula below 1/2).
inline SignedLog signed_log_gamma(double x) {
    if (detail::is_nonpositive_integer(x) || !std::isfinite(x)) {
        throw DomainError("signed_log_gamma: pole at x = " + std::to_string(x));
    }
    if (x > 0.0) return {log_gamma(x), 1};
    // Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    const double s = detail::sin_pi(x);
    return {std::log(std::numbers::pi) - std::log(std::abs(s)) - log_gamma(1.0 - x),
            s > 0.0 ? 1 : -1};
}

inline double log_beta(double a, double b) {
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

/// B(a + j, b) / B(a, b) as the product of (a + i) / (a + b + i), i < j.
inline double beta_ratio(double a, double b, std::size_t j) {
    detail::require_domain(a > 0.0 && b > 0.0, "beta_ratio: requires a > 0 and b > 0");
    double r = 1.0;
    for (std::size_t i = 0; i < j; ++i) {
        const double di = static_cast<double>(i);
        r *= (a + di) / (a + b + di);
    }
    return r;
}

/// Riemann zeta for real s > 1 (Euler-Maclaurin, N = 20, ten correction terms).
inline double riemann_zeta(double s) {
    if (!(s > 1.0)) {
        throw DomainError("riemann_zeta: requires s > 1, got " + std::to_string(s));
    }
    constexpr int kN = 20;
    // B_{2k} / (2k)!
    constexpr std::array<double, 10> kBernoulliOverFactorial = {
        1.0 / 6.0 / 2.0,
        -1.0 / 30.0 / 24.0,
        1.0 / 42.0 / 720.0,
        -1.0 / 30.0 / 40320.0,
        5.0 / 66.0 / 3628800.0,
        -691.0 / 2730.0 / 479001600.0,
        7.0 / 6.0 / 87178291200.0,
        -3617.0 / 510.0 / 20922789888000.0,
        43867.0 / 798.0 / 6402373705728000.0,
        -174611.0 / 330.0 / 2432902008176640000.0};

    detail::CompensatedSum sum;
    for (int n = kN - 1; n >= 1; --n) sum.add(std::pow(static_cast<double>(n), -s));
    const double big_n = kN;
    sum.add(std::pow(big_n, 1.0 - s) / (s - 1.0));
    sum.add(0.5 * std::pow(big_n, -s));

    // rising product s (s+1) ... (s+2k-2) times N^{-s-2k+1}
    double rising = s;
    double power = std::pow(big_n, -s - 1.0);
    for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
        sum.add(kBernoulliOverFactorial[k] * rising * power);
        const double m = 2.0 * static_cast<double>(k) + 1.0;
        rising *= (s + m) * (s + m + 1.0);
        power /= big_n * big_n;
    }
    return sum.value();
}

namespace detail {

/// Sum of a slowly converging positive-tailed series whose terms behave like
/// n^{-(1 + tail_exponent)} times a power series in 1/n.  Partial sums at
/// N0 * 2^k are extrapolated with Richardson steps for the known exponents
/// tail_exponent, tail_exponent + 1, ...
template <class NextTerm>
double extrapolated_series_sum(NextTerm&& next_term, double tail_exponent, double rel_tol,
                               std::size_t first_block, std::size_t max_terms,
                               const std::string& what) {
    constexpr std::size_t kMaxColumns = 8;
    std::vector<double> above;
    CompensatedSum partial;
    std::size_t n = 0;
    int consecutive_hits = 0;
    double previous_estimate = std::numeric_limits<double>::quiet_NaN();

    for (std::size_t target = first_block; target <= max_terms; target *= 2) {
        while (n < target) {
            partial.add(next_term());
            ++n;
        }
        std::vector<double> row{partial.value()};
        for (std::size_t j = 1; j <= above.size() && j < kMaxColumns; ++j) {
            const double factor = std::exp2(tail_exponent + static_cast<double>(j - 1)) - 1.0;
            row.push_back(row[j - 1] + (row[j - 1] - above[j - 1]) / factor);
        }
        const double estimate = row.back();
        if (!std::isfinite(estimate)) break;
        if (std::isfinite(previous_estimate) &&
            std::abs(estimate - previous_estimate) <= rel_tol * std::abs(estimate)) {
            if (++consecutive_hits >= 2) return estimate;
        } else {
            consecutive_hits = 0;
        }
        previous_estimate = estimate;
        above = std::move(row);
    }
    throw ConvergenceError(what + ": no convergence within " + std::to_string(max_terms) +
                           " terms");
}

}  // namespace detail

/// Parameters of a generalized hypergeometric series pFq(numerator; denominator; argument).
struct PfqSpec {
    std::vector<double> numerator_params;
    std::vector<double> denominator_params;
    double argument = 1.0;
};

/// sum(denominators) - sum(numerators); must be positive for convergence at unit argument.
inline double parameter_excess(const PfqSpec& spec) {
    double excess = 0.0;
    for (double b : spec.denominator_params) excess += b;
    for (double a : spec.numerator_params) excess -= a;
    return excess;
}

inline constexpr std::size_t kPfqMaxTerms = 10'000'000;

/// Generalized hypergeometric series.  Terminating series (a numerator equal
/// to a non-positive integer) are summed exactly; unit-argument p = q + 1
/// series are accelerated; all others are summed until the current term and a
/// geometric tail estimate drop below rel_tol times the partial sum.
inline double hypergeometric_pfq(const PfqSpec& spec, double rel_tol = 1e-12) {
    for (double b : spec.denominator_params) {
        if (detail::is_nonpositive_integer(b)) {
            throw DomainError("hypergeometric_pfq: denominator parameter " + std::to_string(b) +
                              " is zero or a negative integer");
        }
    }
    detail::require_domain(rel_tol > 0.0, "hypergeometric_pfq: rel_tol must be positive");

    const double z = spec.argument;
    const auto& num = spec.numerator_params;
    const auto& den = spec.denominator_params;

    auto ratio = [&](double n) {
        double r = z / (n + 1.0);
        for (double a : num) r *= (n + a);
        for (double b : den) r /= (n + b);
        return r;
    };

    const bool terminating = std::any_of(num.begin(), num.end(), detail::is_nonpositive_integer);
    if (z == 0.0) return 1.0;

    if (terminating) {
        detail::CompensatedSum sum;
        double term = 1.0;
        sum.add(term);
        for (std::size_t n = 0; term != 0.0; ++n) {
            term *= ratio(static_cast<double>(n));
            sum.add(term);
        }
        return sum.value();
    }

    const std::size_t p = num.size();
    const std::size_t q = den.size();
    if (p > q + 1) {
        throw ConvergenceError("hypergeometric_pfq: p > q + 1 diverges for nonzero argument");
    }
    if (p == q + 1) {
        if (std::abs(z) > 1.0 || z == -1.0) {
            throw ConvergenceError("hypergeometric_pfq: |argument| must be below 1, or exactly 1");
        }
        if (z == 1.0) {
            const double excess = parameter_excess(spec);
            if (!(excess > 0.0)) {
                throw ConvergenceError(
                    "hypergeometric_pfq: parameter excess must be positive at unit argument, got " +
                    std::to_string(excess));
            }
            double max_param = 1.0;
            for (double v : num) max_param = std::max(max_param, std::abs(v));
            for (double v : den) max_param = std::max(max_param, std::abs(v));
            const auto first_block =
                std::max<std::size_t>(64, static_cast<std::size_t>(16.0 * max_param));
            double term = 1.0;
            std::size_t n = 0;
            auto next = [&]() {
                const double current = term;
                term *= ratio(static_cast<double>(n));
                ++n;
                return current;
            };
            return detail::extrapolated_series_sum(next, excess, rel_tol, first_block,
                                                   kPfqMaxTerms, "hypergeometric_pfq");
        }
    }

    detail::CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    for (std::size_t n = 0; n < kPfqMaxTerms; ++n) {
        const double r = ratio(static_cast<double>(n));
        term *= r;
        sum.add(term);
        const double scale = rel_tol * std::abs(sum.value());
        const double next_r = std::abs(ratio(static_cast<double>(n + 1)));
        const double tail = next_r < 1.0 ? std::abs(term) * next_r / (1.0 - next_r)
                                         : std::numeric_limits<double>::infinity();
        if (std::abs(term) <= scale && tail <= scale) return sum.value();
    }
    throw ConvergenceError("hypergeometric_pfq: no convergence within " +
                           std::to_string(kPfqMaxTerms) + " terms");
}

}  // namespace nonfrac
