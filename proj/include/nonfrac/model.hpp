#pragma once

/// Closed-form definitions of the two long-memory processes: fractional noise
/// I(d) and the cross-sectional aggregate CSA(a, b) of AR(1) units whose
/// squared coefficients are Beta(a, b) distributed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "nonfrac/error.hpp"
#include "nonfrac/specfun.hpp"

namespace nonfrac {

namespace detail {
inline std::string fmt_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}
}  // namespace detail

/// Memory parameter of fractional noise, d in (-1/2, 1/2).
class FracParams {
public:
    explicit FracParams(double d) : d_(d) {
        detail::require_domain(d > -0.5 && d < 0.5,
                               "FracParams: requires -1/2 < d < 1/2 (got d = " +
                                   detail::fmt_num(d) + ")");
    }
    double d() const { return d_; }

    friend bool operator==(const FracParams&, const FracParams&) = default;

private:
    double d_;
};

/// Beta(a, b) mixing parameters of a CSA process and its innovation scale.
class CsaParams {
public:
    CsaParams(double a, double b, double sigma_eps = 1.0) : a_(a), b_(b), sigma_eps_(sigma_eps) {
        detail::require_domain(a > 0.0, "CsaParams: requires a > 0 (got a = " +
                                            detail::fmt_num(a) + ")");
        detail::require_domain(b > 1.0, "CsaParams: requires b > 1 (got b = " +
                                            detail::fmt_num(b) + ")");
        detail::require_domain(sigma_eps > 0.0, "CsaParams: requires sigma_eps > 0 (got " +
                                                    detail::fmt_num(sigma_eps) + ")");
    }
    double a() const { return a_; }
    double b() const { return b_; }
    double sigma_eps() const { return sigma_eps_; }
    /// Memory parameter implied by the hyperbolic ACF decay, d = 1 - b/2.
    double memory() const { return 1.0 - b_ / 2.0; }

    /// CSA process with the same asymptotic ACF decay as I(d): b = 2(1 - d).
    static CsaParams matching(double a, double d, double sigma_eps = 1.0) {
        return CsaParams(a, 2.0 * (1.0 - d), sigma_eps);
    }

    friend bool operator==(const CsaParams&, const CsaParams&) = default;

private:
    double a_;
    double b_;
    double sigma_eps_;
};

enum class ProcessKind { fractional, csa };

using ProcessParams = std::variant<FracParams, CsaParams>;

/// Finite prefix of MA(infinity) weights; weights[0] == 1.
struct MaCoefficients {
    std::vector<double> weights;
    ProcessKind origin;
    ProcessParams params;
};

/// pi_0 = 1, pi_j = pi_{j-1} (j - 1 + d) / j.
inline MaCoefficients frac_ma_coeffs(const FracParams& p, std::size_t length) {
    detail::require_domain(length >= 1, "frac_ma_coeffs: length must be >= 1");
    std::vector<double> w(length);
    w[0] = 1.0;
    for (std::size_t j = 1; j < length; ++j) {
        const double dj = static_cast<double>(j);
        w[j] = w[j - 1] * (dj - 1.0 + p.d()) / dj;
    }
    return {std::move(w), ProcessKind::fractional, p};
}

/// phi_j = sqrt(B(a + j, b) / B(a, b)), built from the running Beta ratio.
inline MaCoefficients csa_ma_coeffs(const CsaParams& p, std::size_t length) {
    detail::require_domain(length >= 1, "csa_ma_coeffs: length must be >= 1");
    std::vector<double> w(length);
    double ratio = 1.0;
    w[0] = 1.0;
    for (std::size_t j = 1; j < length; ++j) {
        const double i = static_cast<double>(j - 1);
        ratio *= (p.a() + i) / (p.a() + p.b() + i);
        w[j] = std::sqrt(ratio);
    }
    return {std::move(w), ProcessKind::csa, p};
}

/// I(d) autocorrelation: gamma(0) = 1, gamma(k) = gamma(k-1) (k - 1 + d) / (k - d).
inline std::vector<double> acf_frac_sequence(const FracParams& p, std::size_t max_lag) {
    std::vector<double> r(max_lag + 1);
    r[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        const double dk = static_cast<double>(k);
        r[k] = r[k - 1] * (dk - 1.0 + p.d()) / (dk - p.d());
    }
    return r;
}

inline double acf_frac(const FracParams& p, std::size_t k) { return acf_frac_sequence(p, k)[k]; }

/// CSA autocorrelation B(a + k/2, b - 1) / B(a, b - 1).  The half-integer
/// shift rules out the product recursion, so log-gamma differences are used.
inline double acf_csa(const CsaParams& p, std::size_t k) {
    if (k == 0) return 1.0;
    const double a = p.a();
    const double bm1 = p.b() - 1.0;
    const double shifted = a + 0.5 * static_cast<double>(k);
    return std::exp(log_gamma(shifted) - log_gamma(shifted + bm1) - log_gamma(a) +
                    log_gamma(a + bm1));
}

inline std::vector<double> acf_csa_sequence(const CsaParams& p, std::size_t max_lag) {
    std::vector<double> r(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) r[k] = acf_csa(p, k);
    return r;
}

/// sigma^2 B(a, b - 1) / B(a, b) = sigma^2 (a + b - 1) / (b - 1).
inline double csa_variance(const CsaParams& p) {
    const double s2 = p.sigma_eps() * p.sigma_eps();
    return s2 * (p.a() + p.b() - 1.0) / (p.b() - 1.0);
}

/// I(d) variance sigma^2 Gamma(1 - 2d) / Gamma(1 - d)^2.
inline double frac_variance(const FracParams& p, double sigma_eps = 1.0) {
    return sigma_eps * sigma_eps *
           std::exp(log_gamma(1.0 - 2.0 * p.d()) - 2.0 * log_gamma(1.0 - p.d()));
}

/// sum_j w_j w_{j+k} / sum_j w_j^2 over a finite weight prefix.
inline double ma_autocorrelation(std::span<const double> weights, std::size_t k) {
    detail::CompensatedSum num, den;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        den.add(weights[j] * weights[j]);
        if (j + k < weights.size()) num.add(weights[j] * weights[j + k]);
    }
    return num.value() / den.value();
}

/// f(0) = sigma^2 / (2 pi) (sum_j phi_j)^2 for b > 2.  The series tail decays
/// like J^{1 - b/2}; partial sums are extrapolated to relative accuracy rel_tol.
inline double csa_spectrum_at_zero(const CsaParams& p, double rel_tol = 1e-10) {
    if (!(p.b() > 2.0)) {
        throw ConvergenceError("csa_spectrum_at_zero: sum of MA weights diverges for b <= 2 (got b = " +
                               detail::fmt_num(p.b()) + ")");
    }
    double ratio = 1.0;
    std::size_t j = 0;
    auto next = [&]() {
        const double weight = std::sqrt(ratio);
        const double i = static_cast<double>(j);
        ratio *= (p.a() + i) / (p.a() + p.b() + i);
        ++j;
        return weight;
    };
    const auto first_block = std::max<std::size_t>(256, static_cast<std::size_t>(32.0 * (p.a() + p.b())));
    const double sum = detail::extrapolated_series_sum(next, p.b() / 2.0 - 1.0, rel_tol,
                                                       first_block, 1ULL << 26,
                                                       "csa_spectrum_at_zero");
    const double s2 = p.sigma_eps() * p.sigma_eps();
    return s2 / (2.0 * std::numbers::pi) * sum * sum;
}

/// sigma^2 Gamma(b) zeta(b/2)^2 / (2 pi B(a, b)): the large-j approximation of
/// f(0) with Gamma(a + j)/Gamma(a + j + b) replaced by j^{-b}.  Agrees with
/// csa_spectrum_at_zero only in order of magnitude; kept for inspection.
inline double csa_spectrum_closed_form(const CsaParams& p) {
    if (!(p.b() > 2.0)) {
        throw ConvergenceError("csa_spectrum_closed_form: requires b > 2");
    }
    const double s2 = p.sigma_eps() * p.sigma_eps();
    const double z = riemann_zeta(p.b() / 2.0);
    return s2 * std::exp(log_gamma(p.b()) - log_beta(p.a(), p.b())) * z * z /
           (2.0 * std::numbers::pi);
}

}  // namespace nonfrac
