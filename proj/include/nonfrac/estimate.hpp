#pragma once

/// Periodogram and log-periodogram (GPH) regression for the memory parameter.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "nonfrac/error.hpp"
#include "nonfrac/spectral.hpp"
#include "nonfrac/stats.hpp"

namespace nonfrac {

struct PeriodogramResult {
    std::vector<double> frequencies;  // 2 pi j / T, j = 1..floor((T-1)/2)
    std::vector<double> ordinates;    // I(lambda_j)
};

/// I(lambda_j) = |sum_t x_t e^{-i lambda_j t}|^2 / (2 pi T) at the Fourier
/// frequencies, optionally after removing the sample mean.
inline PeriodogramResult periodogram(std::span<const double> x, bool demean = true) {
    const std::size_t n = x.size();
    detail::require_domain(n >= 4, "periodogram: need at least 4 observations");
    const double m = demean ? mean(x) : 0.0;
    ComplexBuffer buf(n);
    for (std::size_t t = 0; t < n; ++t) buf[t] = x[t] - m;
    const auto spectrum = dft(buf, Direction::forward);

    const std::size_t count = (n - 1) / 2;
    const double dn = static_cast<double>(n);
    PeriodogramResult out;
    out.frequencies.resize(count);
    out.ordinates.resize(count);
    for (std::size_t j = 1; j <= count; ++j) {
        out.frequencies[j - 1] = 2.0 * std::numbers::pi * static_cast<double>(j) / dn;
        out.ordinates[j - 1] = std::norm(spectrum[j]) / (2.0 * std::numbers::pi * dn);
    }
    return out;
}

struct GphEstimate {
    double d_hat = 0.0;
    double std_error = 0.0;
    std::size_t bandwidth = 0;
};

inline std::size_t default_gph_bandwidth(std::size_t length) {
    return static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(length))));
}

/// OLS of log I(lambda_j) on log lambda_j over j = 1..m; d_hat = -slope / 2.
inline GphEstimate gph_from_periodogram(const PeriodogramResult& pg, std::size_t bandwidth) {
    detail::require_domain(bandwidth >= 3, "gph_estimate: bandwidth must be >= 3 (got " +
                                               std::to_string(bandwidth) + ")");
    detail::require_domain(bandwidth <= pg.ordinates.size(),
                           "gph_estimate: bandwidth exceeds the number of Fourier frequencies (" +
                               std::to_string(pg.ordinates.size()) + ")");
    const std::size_t m = bandwidth;
    std::vector<double> xs(m), ys(m);
    for (std::size_t j = 0; j < m; ++j) {
        detail::require_domain(pg.ordinates[j] > 0.0, "gph_estimate: zero periodogram ordinate");
        xs[j] = std::log(pg.frequencies[j]);
        ys[j] = std::log(pg.ordinates[j]);
    }
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        sxx += (xs[j] - mx) * (xs[j] - mx);
        sxy += (xs[j] - mx) * (ys[j] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double sse = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double e = ys[j] - intercept - slope * xs[j];
        sse += e * e;
    }
    const double slope_se = std::sqrt(sse / static_cast<double>(m - 2) / sxx);
    return {-slope / 2.0, slope_se / 2.0, m};
}

/// GPH estimate with bandwidth m; m = 0 selects floor(sqrt(T)).
inline GphEstimate gph_estimate(std::span<const double> x, std::size_t bandwidth = 0,
                                bool demean = true) {
    const auto pg = periodogram(x, demean);
    return gph_from_periodogram(pg, bandwidth == 0 ? default_gph_bandwidth(x.size()) : bandwidth);
}

}  // namespace nonfrac
