#pragma once

// Shared oracles and hand-rolled generators for the test binaries.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "nonfrac/rng.hpp"

namespace testing_support {

/// Seeded source of random test inputs.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed, 0xfeed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

    std::vector<double> normals(std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) x = normal();
        return v;
    }
    std::vector<std::complex<double>> complex_normals(std::size_t n) {
        std::vector<std::complex<double>> v(n);
        for (auto& x : v) x = {normal(), normal()};
        return v;
    }

private:
    nonfrac::CounterRng rng_;
};

/// out[t] = sum_{j <= t} y[j] x[t - j]
inline std::vector<double> direct_prefix_convolution(std::span<const double> x, std::span<const double> y) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t t = 0; t < x.size(); ++t)
        for (std::size_t j = 0; j <= t; ++j) out[t] += y[j] * x[t - j];
    return out;
}

/// O(N^2) DFT with the forward sign convention e^{-2 pi i k n / N}.
inline std::vector<std::complex<double>> naive_dft(std::span<const std::complex<double>> x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> s = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * M_PI * static_cast<double>((k * t) % n) / static_cast<double>(n);
            s += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = s;
    }
    return out;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> m, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        std::swap(m[c], m[piv]);
        std::swap(rhs[c], rhs[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
            rhs[r] -= f * rhs[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= m[i][k] * x[k];
        x[i] = s / m[i][i];
    }
    return x;
}

/// Expected known-mean sample autocovariance (divisor T) at lag k of a
/// zero-start MA filter y_t = sum_{j <= t} w_j e_{t-j}, unit innovations.
inline double type2_expected_autocovariance(std::span<const double> w, std::size_t length, std::size_t k) {
    // E[y_t y_{t+k}] = sum_{j=0}^{t} w_j w_{j+k}; accumulate over t via prefix sums.
    double total = 0.0;
    double prefix = 0.0;
    for (std::size_t t = 0; t + k < length; ++t) {
        prefix += w[t] * w[t + k];
        total += prefix;
    }
    return total / static_cast<double>(length);
}

inline double max_abs_diff(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

}  // namespace testing_support
