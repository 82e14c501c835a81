#pragma once

/// Population-level fits of misspecified models to a CSA(a, b) process and
/// their one-step forecast error variance relative to the optimal forecast.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "nonfrac/error.hpp"
#include "nonfrac/model.hpp"
#include "nonfrac/specfun.hpp"

namespace nonfrac {

enum class FittedModel { ar_p, pure_frac, arfima_1d0 };

struct EfficiencyReport {
    FittedModel model;
    std::vector<double> fitted_params;  // AR coefficients, or {alpha_I}
    double zeta;                        // relative one-step forecast error variance
    CsaParams csa;
};

/// Solves the Toeplitz system R alpha = r[1..order] with R_ij = r[|i-j|] by
/// the Levinson-Durbin recursion.  r[0] must be the lag-0 value.
inline std::vector<double> levinson_durbin(std::span<const double> r, std::size_t order) {
    detail::require_domain(order >= 1, "levinson_durbin: order must be >= 1");
    detail::require_domain(r.size() > order, "levinson_durbin: need autocorrelations up to the order");
    std::vector<double> phi(order + 1, 0.0), prev(order + 1, 0.0);
    double err = r[0];
    for (std::size_t k = 1; k <= order; ++k) {
        double acc = r[k];
        for (std::size_t j = 1; j < k; ++j) acc -= prev[j] * r[k - j];
        const double kappa = acc / err;
        phi[k] = kappa;
        for (std::size_t j = 1; j < k; ++j) phi[j] = prev[j] - kappa * prev[k - j];
        err *= (1.0 - kappa * kappa);
        if (!(err > 1e-14 * r[0])) {
            throw SingularMatrixError("levinson_durbin: Toeplitz matrix is numerically singular at order " +
                                      std::to_string(k));
        }
        prev = phi;
    }
    return {phi.begin() + 1, phi.end()};
}

/// Yule-Walker AR(order) coefficients for the CSA autocorrelations.
inline std::vector<double> fit_ar_population(const CsaParams& p, std::size_t order) {
    return levinson_durbin(acf_csa_sequence(p, order), order);
}

/// zeta_AR(p) = (B(a,b-1)/B(a,b)) [ (1 + sum alpha_i^2)
///               + 2 sum_i gamma(i) (-alpha_i + sum_{j <= p-i} alpha_j alpha_{j+i}) ]
inline double zeta_ar(const CsaParams& p, std::span<const double> coeffs) {
    const std::size_t order = coeffs.size();
    const auto rho = acf_csa_sequence(p, order);
    double bracket = 1.0;
    for (double a : coeffs) bracket += a * a;
    for (std::size_t i = 1; i <= order; ++i) {
        double cross = -coeffs[i - 1];
        for (std::size_t j = 1; j + i <= order; ++j) cross += coeffs[j - 1] * coeffs[j + i - 1];
        bracket += 2.0 * rho[i] * cross;
    }
    const double variance_ratio = (p.a() + p.b() - 1.0) / (p.b() - 1.0);
    return variance_ratio * bracket;
}

/// (B(a,b-1)/B(a,b)) (1 - gamma_CSA(1)^2)
inline double zeta_ar1_closed_form(const CsaParams& p) {
    const double r1 = acf_csa(p, 1);
    return (p.a() + p.b() - 1.0) / (p.b() - 1.0) * (1.0 - r1 * r1);
}

inline EfficiencyReport ar_efficiency(const CsaParams& p, std::size_t order) {
    auto coeffs = fit_ar_population(p, order);
    const double z = zeta_ar(p, coeffs);
    return {FittedModel::ar_p, std::move(coeffs), z, p};
}

namespace detail {
inline void require_frac_range(const CsaParams& p, const char* who) {
    require_domain(p.b() > 1.0 && p.b() < 2.0,
                   std::string(who) + ": requires 1 < b < 2 (got b = " + fmt_num(p.b()) + ")");
}
}  // namespace detail

/// sigma^2 Gamma(1+2d) / (Gamma(-d) Gamma(1+d)) * Gamma(-d-k) / Gamma(1+d-k), d = 1 - b/2,
/// evaluated with sign-tracked log-gamma.
inline double gamma_star(const CsaParams& p, std::size_t k) {
    detail::require_frac_range(p, "gamma_star");
    const double d = p.memory();
    const double dk = static_cast<double>(k);
    const SignedLog g_neg_d = signed_log_gamma(-d);
    const SignedLog g_num = signed_log_gamma(-d - dk);
    const SignedLog g_den = signed_log_gamma(1.0 + d - dk);
    const double log_mag = log_gamma(1.0 + 2.0 * d) - g_neg_d.log_abs - log_gamma(1.0 + d) +
                           g_num.log_abs - g_den.log_abs;
    const int sign = g_neg_d.sign * g_num.sign * g_den.sign;
    return sign * p.sigma_eps() * p.sigma_eps() * std::exp(log_mag);
}

/// The two 4F3 sums in the autocovariance of the d-differenced CSA process.
struct GammaZSeries {
    double f1;
    double f2;
};

inline GammaZSeries gamma_z_series(const CsaParams& p, std::size_t k, double rel_tol = 1e-12) {
    detail::require_frac_range(p, "gamma_z_series");
    const double a = p.a();
    const double b = p.b();
    const double d = p.memory();
    const double dk = static_cast<double>(k);

    auto f = [&](std::vector<double> num, std::vector<double> den) {
        return hypergeometric_pfq({std::move(num), std::move(den), 1.0}, rel_tol);
    };

    const double f1 = f({1.0, a, (1.0 - d + dk) / 2.0, (-d + dk) / 2.0},
                        {a + b - 1.0, (2.0 + d + dk) / 2.0, (1.0 + d + dk) / 2.0}) +
                      f({1.0, a, (1.0 - d - dk) / 2.0, (-d - dk) / 2.0},
                        {a + b - 1.0, (2.0 + d - dk) / 2.0, (1.0 + d - dk) / 2.0});
    const double f2 = (-d + dk) / (1.0 + d + dk) *
                          f({1.0, a + 0.5, (1.0 - d + dk) / 2.0, (2.0 - d + dk) / 2.0},
                            {a + b - 0.5, (2.0 + d + dk) / 2.0, (3.0 + d + dk) / 2.0}) +
                      (-d - dk) / (1.0 + d - dk) *
                          f({1.0, a + 0.5, (1.0 - d - dk) / 2.0, (2.0 - d - dk) / 2.0},
                            {a + b - 0.5, (2.0 + d - dk) / 2.0, (3.0 + d - dk) / 2.0});
    return {f1, f2};
}

/// Autocovariance at lag k of (1 - L)^d x_t for x_t ~ CSA(a, b), d = 1 - b/2,
/// b in (1, 2):
///   gamma*(k) / B(a,b) [ B(a,b-1) (F1(k) - 1) + B(a+1/2, b-1) F2(k) ].
inline double gamma_z(const CsaParams& p, std::size_t k, double rel_tol = 1e-12) {
    detail::require_frac_range(p, "gamma_z");
    const auto series = gamma_z_series(p, k, rel_tol);
    const double a = p.a();
    const double b = p.b();
    const double ratio_1 = (a + b - 1.0) / (b - 1.0);  // B(a,b-1)/B(a,b)
    const double ratio_2 = std::exp(log_beta(a + 0.5, b - 1.0) - log_beta(a, b));
    return gamma_star(p, k) * (ratio_1 * (series.f1 - 1.0) + ratio_2 * series.f2);
}

struct FractionalEfficiency {
    EfficiencyReport pure_frac;   // zeta = gamma_z(0)
    EfficiencyReport arfima_1d0;  // zeta = gamma_z(0) (1 - alpha_I^2)
    /// (gamma_z(0)^2 - gamma_z(1)^2) / gamma_z(0)^2 as displayed in the
    /// source formula; equals 1 - alpha_I^2 and cannot exceed 1.
    double arfima_zeta_displayed;
};

/// One-step efficiency of I(d) and ARFIMA(1, d, 0) fits with d = 1 - b/2.
inline FractionalEfficiency zeta_fractional(const CsaParams& p, double rel_tol = 1e-12) {
    const double g0 = gamma_z(p, 0, rel_tol);
    const double g1 = gamma_z(p, 1, rel_tol);
    const double alpha = g1 / g0;
    const double s2 = p.sigma_eps() * p.sigma_eps();
    return {
        {FittedModel::pure_frac, {}, g0 / s2, p},
        {FittedModel::arfima_1d0, {alpha}, g0 * (1.0 - alpha * alpha) / s2, p},
        (g0 * g0 - g1 * g1) / (g0 * g0),
    };
}

/// L(k, a, d) = sum_{i=0}^{k} (gamma_I(d)(i) - gamma_CSA(a, 2(1-d))(i))^2
inline double approximation_loss(std::size_t k, double a, double d) {
    detail::require_domain(k >= 1, "approximation_loss: k must be >= 1");
    const FracParams frac(d);
    const auto csa = CsaParams::matching(a, d);
    const auto rf = acf_frac_sequence(frac, k);
    const auto rc = acf_csa_sequence(csa, k);
    double loss = 0.0;
    for (std::size_t i = 0; i <= k; ++i) loss += (rf[i] - rc[i]) * (rf[i] - rc[i]);
    return loss;
}

struct MatchResult {
    double a_star;
    double loss;
};

/// argmin over a in (0, a_max] of approximation_loss(k, a, d): coarse grid
/// bracket followed by golden-section refinement.
inline MatchResult best_matching_a(std::size_t k, double d, double a_max = 5.0,
                                   std::size_t grid_points = 100) {
    detail::require_domain(k >= 1, "best_matching_a: k must be >= 1");
    detail::require_domain(a_max > 0.0 && grid_points >= 3,
                           "best_matching_a: need a_max > 0 and at least 3 grid points");
    auto loss = [&](double a) { return approximation_loss(k, a, d); };
    const double step = a_max / static_cast<double>(grid_points);

    std::size_t best = 1;
    double best_loss = loss(step);
    for (std::size_t i = 2; i <= grid_points; ++i) {
        const double v = loss(step * static_cast<double>(i));
        if (v < best_loss) {
            best_loss = v;
            best = i;
        }
    }
    if (best == 1 || best == grid_points) {
        throw BracketError("best_matching_a: coarse grid minimum at the boundary a = " +
                           detail::fmt_num(step * static_cast<double>(best)));
    }

    double lo = step * static_cast<double>(best - 1);
    double hi = step * static_cast<double>(best + 1);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = loss(x1);
    double f2 = loss(x2);
    while (hi - lo > 1e-12 * (1.0 + std::abs(lo))) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = loss(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = loss(x2);
        }
    }
    const double a_star = 0.5 * (lo + hi);
    return {a_star, loss(a_star)};
}

}  // namespace nonfrac
