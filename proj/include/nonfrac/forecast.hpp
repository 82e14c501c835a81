#pragma once

/// Minimum-MSE forecasts of a process known through its MA weights, under the
/// convention that innovations before the first observation are zero.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "nonfrac/model.hpp"
#include "nonfrac/spectral.hpp"

namespace nonfrac {

struct ForecastResult {
    std::size_t horizon = 0;
    std::vector<double> point_forecasts;  // x_hat_{T-1+i}, i = 1..h
    std::vector<double> innovations;      // recovered nu_0..nu_{T-1}
    double reconstruction_error = 0.0;    // max |x - filter(nu)|
};

/// Forward substitution on the unit lower-triangular Toeplitz system
/// x_i = sum_{j <= i} w_j nu_{i-j}.  O(T^2) time, O(T) memory.
inline std::vector<double> recover_innovations(std::span<const double> x,
                                               std::span<const double> weights) {
    const std::size_t n = x.size();
    detail::require_domain(weights.size() >= n, "recover_innovations: too few MA weights");
    detail::require_domain(n == 0 || weights[0] == 1.0,
                           "recover_innovations: leading MA weight must be 1");
    std::vector<double> nu(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 1; j <= i; ++j) s -= weights[j] * nu[i - j];
        nu[i] = s;
    }
    return nu;
}

inline std::vector<double> recover_innovations(std::span<const double> x, const CsaParams& p) {
    detail::require_domain(!x.empty(), "recover_innovations: empty series");
    return recover_innovations(x, csa_ma_coeffs(p, x.size()).weights);
}

/// max_t |x_t - sum_{j <= t} w_j nu_{t-j}|
inline double reconstruction_error(std::span<const double> x, std::span<const double> innovations,
                                   std::span<const double> weights) {
    if (x.empty()) return 0.0;
    const auto rebuilt = PrefixConvolver(weights.first(x.size())).apply(innovations);
    double err = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) err = std::max(err, std::abs(x[t] - rebuilt[t]));
    return err;
}

/// h-step forecasts from weights of length >= T + h:
/// x_hat_{T-1+i} = sum_{m=0}^{T-1} w_{i+m} nu_{T-1-m}.
inline ForecastResult forecast_ma(std::span<const double> x, std::span<const double> weights,
                                  std::size_t horizon) {
    const std::size_t n = x.size();
    detail::require_domain(horizon >= 1, "forecast: horizon must be >= 1");
    detail::require_domain(n >= 1, "forecast: empty series");
    detail::require_domain(weights.size() >= n + horizon, "forecast: too few MA weights");

    ForecastResult out;
    out.horizon = horizon;
    out.innovations = recover_innovations(x, weights);
    out.point_forecasts.resize(horizon);
    for (std::size_t i = 1; i <= horizon; ++i) {
        double s = 0.0;
        for (std::size_t m = 0; m < n; ++m) s += weights[i + m] * out.innovations[n - 1 - m];
        out.point_forecasts[i - 1] = s;
    }
    out.reconstruction_error = reconstruction_error(x, out.innovations, weights);
    return out;
}

/// Minimum-MSE CSA forecasts for horizons 1..h (1 <= h <= T).
inline ForecastResult forecast_csa(std::span<const double> x, const CsaParams& p,
                                   std::size_t horizon) {
    detail::require_domain(horizon >= 1, "forecast_csa: horizon must be >= 1");
    detail::require_domain(horizon <= x.size(), "forecast_csa: horizon must not exceed T (T = " +
                                                    std::to_string(x.size()) + ")");
    const auto coeffs = csa_ma_coeffs(p, x.size() + horizon);
    return forecast_ma(x, coeffs.weights, horizon);
}

}  // namespace nonfrac
