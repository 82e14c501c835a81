#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "nonfrac/error.hpp"

namespace nonfrac {

inline double mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

/// Unbiased sample variance (divisor n - 1); zero for fewer than two values.
inline double sample_variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

enum class Centering { sample_mean, known_zero };

/// Sample autocorrelations r(0..max_lag) with divisor T at every lag.
inline std::vector<double> sample_acf(std::span<const double> x, std::size_t max_lag,
                                      Centering centering = Centering::sample_mean) {
    const std::size_t n = x.size();
    detail::require_domain(n > max_lag, "sample_acf: series shorter than max_lag + 1");
    const double m = centering == Centering::sample_mean ? mean(x) : 0.0;
    std::vector<double> c(n);
    for (std::size_t t = 0; t < n; ++t) c[t] = x[t] - m;
    std::vector<double> r(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) s += c[t] * c[t + k];
        r[k] = s;
    }
    const double c0 = r[0];
    for (auto& v : r) v = c0 > 0.0 ? v / c0 : 0.0;
    return r;
}

/// Welford accumulator for mean and standard deviation.
class RunningMoments {
public:
    void add(double x) {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }
    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    /// Sample standard deviation; 0 when fewer than two observations.
    double sd() const {
        return count_ < 2 ? 0.0 : std::sqrt(m2_ / static_cast<double>(count_ - 1));
    }
    double standard_error() const {
        return count_ == 0 ? 0.0 : sd() / std::sqrt(static_cast<double>(count_));
    }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace nonfrac
