#pragma once

/// Sample-path generation.  The fast generators run a truncated MA filter
/// over seeded Gaussian innovations through one zero-padded FFT product (zero
/// pre-sample innovations).  The naive generator aggregates N AR(1) units
/// directly and serves as the reference for the CSA definition.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "nonfrac/model.hpp"
#include "nonfrac/rng.hpp"
#include "nonfrac/spectral.hpp"

namespace nonfrac {

enum class Generator { csa_fast, csa_naive, frac_fast };

struct SeriesSample {
    std::vector<double> values;
    Generator generator;
    ProcessParams params;
    std::uint64_t seed = 0;
    std::size_t n_units = 0;  // csa_naive only
};

/// T i.i.d. N(0, sigma^2) draws from the stream keyed by `seed`.
inline std::vector<double> draw_innovations(std::size_t length, double sigma, std::uint64_t seed) {
    CounterRng rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    std::vector<double> out(length);
    for (auto& v : out) v = normal(rng);
    return out;
}

/// A fixed MA filter ready to be run over many innovation sequences.
class FastGenerator {
public:
    static FastGenerator csa(const CsaParams& p, std::size_t length) {
        return FastGenerator(csa_ma_coeffs(p, length), p.sigma_eps(), Generator::csa_fast);
    }
    static FastGenerator frac(const FracParams& p, std::size_t length, double sigma_eps = 1.0) {
        return FastGenerator(frac_ma_coeffs(p, length), sigma_eps, Generator::frac_fast);
    }

    std::size_t length() const { return convolver_.length(); }
    const MaCoefficients& coefficients() const { return coeffs_; }

    /// Filter caller-supplied innovations (impulse tests, round trips).
    std::vector<double> filter(std::span<const double> innovations) const {
        return convolver_.apply(innovations);
    }

    SeriesSample sample(std::uint64_t seed) const {
        return {filter(draw_innovations(length(), sigma_, seed)), kind_, coeffs_.params, seed, 0};
    }

private:
    FastGenerator(MaCoefficients coeffs, double sigma, Generator kind)
        : coeffs_(std::move(coeffs)), convolver_(coeffs_.weights), sigma_(sigma), kind_(kind) {
        detail::require_domain(sigma > 0.0, "FastGenerator: sigma_eps must be positive");
    }

    MaCoefficients coeffs_;
    PrefixConvolver convolver_;
    double sigma_;
    Generator kind_;
};

inline SeriesSample generate_csa_fast(const CsaParams& p, std::size_t length, std::uint64_t seed) {
    return FastGenerator::csa(p, length).sample(seed);
}

inline SeriesSample generate_frac_fast(const FracParams& p, std::size_t length, std::uint64_t seed,
                                       double sigma_eps = 1.0) {
    return FastGenerator::frac(p, length, sigma_eps).sample(seed);
}

inline std::size_t default_burn_in(std::size_t length) {
    return std::max<std::size_t>(2000, length);
}

/// alpha_i = sqrt(u_i) with u_i ~ Beta(a, b) drawn as a ratio of gammas.
inline std::vector<double> draw_unit_coefficients(const CsaParams& p, std::size_t n_units,
                                                  CounterRng& rng) {
    std::gamma_distribution<double> ga(p.a(), 1.0);
    std::gamma_distribution<double> gb(p.b(), 1.0);
    std::vector<double> alphas(n_units);
    for (auto& alpha : alphas) {
        const double x = ga(rng);
        const double y = gb(rng);
        alpha = std::sqrt(x / (x + y));
    }
    return alphas;
}

/// (1 / sqrt(N)) sum_i x_{i,t} with x_{i,t} = alpha_i x_{i,t-1} + eps_{i,t},
/// started at zero and run burn_in + T steps; the burn-in is discarded.
inline std::vector<double> aggregate_ar1_units(std::span<const double> alphas, std::size_t length,
                                               std::size_t burn_in, double sigma,
                                               CounterRng& rng) {
    detail::require_domain(!alphas.empty(), "aggregate_ar1_units: need at least one unit");
    std::normal_distribution<double> normal(0.0, sigma);
    std::vector<double> out(length, 0.0);
    for (double alpha : alphas) {
        double state = 0.0;
        for (std::size_t t = 0; t < burn_in; ++t) state = alpha * state + normal(rng);
        for (std::size_t t = 0; t < length; ++t) {
            state = alpha * state + normal(rng);
            out[t] += state;
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(alphas.size()));
    for (auto& v : out) v *= scale;
    return out;
}

inline SeriesSample generate_csa_naive(const CsaParams& p, std::size_t length, std::size_t n_units,
                                       std::size_t burn_in, std::uint64_t seed) {
    detail::require_domain(length >= 1, "generate_csa_naive: length must be >= 1");
    detail::require_domain(n_units >= 1, "generate_csa_naive: n_units must be >= 1");
    CounterRng rng(seed);
    const auto alphas = draw_unit_coefficients(p, n_units, rng);
    return {aggregate_ar1_units(alphas, length, burn_in, p.sigma_eps(), rng), Generator::csa_naive,
            p, seed, n_units};
}

struct BenchmarkRow {
    std::size_t length = 0;
    std::size_t n_units = 0;
    double fast_seconds = 0.0;   // median
    double naive_seconds = 0.0;  // median
    double speedup = 0.0;        // naive / fast
};

namespace detail {
inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class F>
double seconds_of(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}
}  // namespace detail

/// Median wall-clock time of the fast and naive CSA generators at each T,
/// with N = n_units_rule(T) units and the default burn-in.
inline std::vector<BenchmarkRow> benchmark_generation(
    const CsaParams& p, std::span<const std::size_t> sizes,
    const std::function<std::size_t(std::size_t)>& n_units_rule, std::size_t runs = 5,
    std::uint64_t seed = 1) {
    detail::require_domain(!sizes.empty(), "benchmark_generation: sizes must be nonempty");
    detail::require_domain(runs >= 1, "benchmark_generation: runs must be >= 1");
    std::vector<BenchmarkRow> rows;
    for (std::size_t length : sizes) {
        const std::size_t units = n_units_rule(length);
        std::vector<double> fast, naive;
        volatile double sink = 0.0;
        for (std::size_t r = 0; r < runs; ++r) {
            fast.push_back(detail::seconds_of(
                [&] { sink = generate_csa_fast(p, length, seed + r).values.back(); }));
            naive.push_back(detail::seconds_of([&] {
                sink = generate_csa_naive(p, length, units, default_burn_in(length), seed + r)
                           .values.back();
            }));
        }
        BenchmarkRow row{length, units, detail::median(fast), detail::median(naive), 0.0};
        row.fast_seconds = std::max(row.fast_seconds, 1e-9);
        row.speedup = row.naive_seconds / row.fast_seconds;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace nonfrac
