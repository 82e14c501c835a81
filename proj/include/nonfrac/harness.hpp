#pragma once

/// Monte Carlo and analytic experiment runner for the GPH table, the forecast
/// efficiency tables, and the data behind the ACF / periodogram / AR(1) loss
/// figures.  Replication seeds are a pure function of (master seed, cell,
/// replication), and reductions run in index order, so results do not depend
/// on the number of workers.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nonfrac/estimate.hpp"
#include "nonfrac/fitloss.hpp"
#include "nonfrac/model.hpp"
#include "nonfrac/parallel.hpp"
#include "nonfrac/rng.hpp"
#include "nonfrac/simulate.hpp"
#include "nonfrac/stats.hpp"
#include "nonfrac/version.hpp"

namespace nonfrac {

enum class Experiment {
    table1,
    table2,
    table3,
    fig_acf_shortmem,
    fig_filter_match,
    fig_antipersistence_acf,
    fig_mean_periodogram,
    fig_ar1_loss,
};

inline constexpr std::string_view to_string(Experiment e) {
    switch (e) {
        case Experiment::table1: return "table1";
        case Experiment::table2: return "table2";
        case Experiment::table3: return "table3";
        case Experiment::fig_acf_shortmem: return "fig_acf_shortmem";
        case Experiment::fig_filter_match: return "fig_filter_match";
        case Experiment::fig_antipersistence_acf: return "fig_antipersistence_acf";
        case Experiment::fig_mean_periodogram: return "fig_mean_periodogram";
        case Experiment::fig_ar1_loss: return "fig_ar1_loss";
    }
    return "unknown";
}

inline std::optional<Experiment> parse_experiment(std::string_view name) {
    for (auto e : {Experiment::table1, Experiment::table2, Experiment::table3,
                   Experiment::fig_acf_shortmem, Experiment::fig_filter_match,
                   Experiment::fig_antipersistence_acf, Experiment::fig_mean_periodogram,
                   Experiment::fig_ar1_loss}) {
        if (to_string(e) == name) return e;
    }
    return std::nullopt;
}

enum class Scale { desk, full };

struct ExperimentConfig {
    Experiment experiment = Experiment::table1;
    std::size_t sample_size = 4096;
    std::size_t replications = 1000;
    std::uint64_t master_seed = 20180101;
    std::vector<ProcessParams> parameter_grid;
    std::size_t max_lag = 50;  // figure experiments with ACF curves
    std::size_t workers = 0;   // 0: resolve_workers()

    /// Grid and sizes for an experiment.  Desk scale is T = 4096 with
    /// 10^3 replications; full scale is T = 10^4 with 10^4 replications.
    static ExperimentConfig defaults(Experiment e, Scale scale = Scale::desk) {
        ExperimentConfig cfg;
        cfg.experiment = e;
        cfg.sample_size = scale == Scale::desk ? 4096 : 10000;
        cfg.replications = scale == Scale::desk ? 1000 : 10000;
        const std::vector<double> table_a{0.1, 0.5, 0.9, 1.3, 1.7};
        const std::vector<double> table_b{1.8, 1.6, 1.4, 1.2, 1.1};
        switch (e) {
            case Experiment::table1:
                for (double d : {0.4, 0.2, -0.2, -0.4}) {
                    cfg.parameter_grid.emplace_back(CsaParams::matching(0.2, d));
                    cfg.parameter_grid.emplace_back(FracParams(d));
                }
                break;
            case Experiment::table2:
            case Experiment::table3:
                for (double a : table_a)
                    for (double b : table_b) cfg.parameter_grid.emplace_back(CsaParams(a, b));
                cfg.replications = 1;
                break;
            case Experiment::fig_acf_shortmem:
                for (double a : table_a) cfg.parameter_grid.emplace_back(CsaParams(a, 1.6));
                cfg.replications = 1;
                break;
            case Experiment::fig_filter_match:
                cfg.parameter_grid = {FracParams(0.2), CsaParams(0.12, 1.6)};
                cfg.sample_size = 10000;
                cfg.replications = 1;
                break;
            case Experiment::fig_antipersistence_acf:
                cfg.parameter_grid = {FracParams(-0.2), CsaParams(0.09, 2.4)};
                cfg.max_lag = 110;
                cfg.replications = 1;
                break;
            case Experiment::fig_mean_periodogram:
                for (double d : {0.4, -0.4}) {
                    cfg.parameter_grid.emplace_back(FracParams(d));
                    cfg.parameter_grid.emplace_back(CsaParams::matching(0.2, d));
                }
                break;
            case Experiment::fig_ar1_loss:
                for (double b : {1.8, 1.6, 1.4, 1.2})
                    for (int i = 1; i <= 40; ++i)
                        cfg.parameter_grid.emplace_back(CsaParams(0.05 * i, b));
                cfg.replications = 1;
                break;
        }
        return cfg;
    }
};

struct Statistic {
    std::string name;
    std::size_t index = 0;  // lag, time, frequency or table column; 0 if scalar
    double mean = 0.0;
    double sd = 0.0;  // 0 when count < 2
    std::size_t count = 0;
};

struct CellResult {
    ProcessParams params;
    std::vector<Statistic> stats;

    friend bool operator==(const CellResult& x, const CellResult& y) {
        if (!(x.params == y.params) || x.stats.size() != y.stats.size()) return false;
        for (std::size_t i = 0; i < x.stats.size(); ++i) {
            const auto& s = x.stats[i];
            const auto& t = y.stats[i];
            if (s.name != t.name || s.index != t.index || s.mean != t.mean || s.sd != t.sd ||
                s.count != t.count)
                return false;
        }
        return true;
    }
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<CellResult> per_cell;  // one per grid entry, same order
    std::size_t workers = 1;
    double wall_seconds = 0.0;
    std::string code_version = kVersion;
};

namespace detail {

inline Statistic scalar_stat(std::string name, double value, std::size_t index = 0) {
    return {std::move(name), index, value, 0.0, 1};
}

inline Statistic moments_stat(std::string name, const RunningMoments& m, std::size_t index = 0) {
    return {std::move(name), index, m.mean(), m.sd(), m.count()};
}

inline FastGenerator make_generator(const ProcessParams& params, std::size_t length) {
    if (const auto* c = std::get_if<CsaParams>(&params)) return FastGenerator::csa(*c, length);
    return FastGenerator::frac(std::get<FracParams>(params), length);
}

inline std::vector<double> theoretical_acf(const ProcessParams& params, std::size_t max_lag) {
    if (const auto* c = std::get_if<CsaParams>(&params)) return acf_csa_sequence(*c, max_lag);
    return acf_frac_sequence(std::get<FracParams>(params), max_lag);
}

inline const CsaParams& require_csa(const ProcessParams& params, Experiment e) {
    const auto* c = std::get_if<CsaParams>(&params);
    if (!c) {
        throw DomainError(std::string(to_string(e)) + ": grid entries must be CSA processes");
    }
    return *c;
}

inline constexpr std::size_t kReplicationBlock = 256;

inline CellResult run_gph_cell(const ExperimentConfig& cfg, std::size_t cell, std::size_t workers) {
    const auto& params = cfg.parameter_grid[cell];
    const auto gen = make_generator(params, cfg.sample_size);
    RunningMoments d_hat;
    map_reduce_ordered(
        cfg.replications, workers, kReplicationBlock,
        [&](std::size_t rep) {
            const auto x = gen.sample(derive_seed(cfg.master_seed, cell, rep)).values;
            return gph_estimate(x).d_hat;
        },
        [&](std::size_t, double v) { d_hat.add(v); });
    const double nominal = std::holds_alternative<CsaParams>(params)
                               ? std::get<CsaParams>(params).memory()
                               : std::get<FracParams>(params).d();
    return {params, {moments_stat("d_hat", d_hat), scalar_stat("nominal_d", nominal)}};
}

inline CellResult run_mean_periodogram_cell(const ExperimentConfig& cfg, std::size_t cell,
                                            std::size_t workers) {
    const auto& params = cfg.parameter_grid[cell];
    const auto gen = make_generator(params, cfg.sample_size);
    std::vector<RunningMoments> ordinates;
    std::vector<double> frequencies;
    map_reduce_ordered(
        cfg.replications, workers, kReplicationBlock,
        [&](std::size_t rep) {
            return periodogram(gen.sample(derive_seed(cfg.master_seed, cell, rep)).values);
        },
        [&](std::size_t, const PeriodogramResult& pg) {
            if (ordinates.empty()) {
                ordinates.resize(pg.ordinates.size());
                frequencies = pg.frequencies;
            }
            for (std::size_t j = 0; j < pg.ordinates.size(); ++j) ordinates[j].add(pg.ordinates[j]);
        });
    CellResult out{params, {}};
    for (std::size_t j = 0; j < ordinates.size(); ++j) {
        out.stats.push_back(scalar_stat("frequency", frequencies[j], j + 1));
        out.stats.push_back(moments_stat("periodogram", ordinates[j], j + 1));
    }
    return out;
}

inline CellResult run_analytic_cell(const ExperimentConfig& cfg, std::size_t cell) {
    const auto& params = cfg.parameter_grid[cell];
    CellResult out{params, {}};
    switch (cfg.experiment) {
        case Experiment::table2: {
            const auto& p = require_csa(params, cfg.experiment);
            out.stats.push_back(scalar_stat("zeta_ar1", ar_efficiency(p, 1).zeta, 1));
            out.stats.push_back(scalar_stat("zeta_ar20", ar_efficiency(p, 20).zeta, 20));
            break;
        }
        case Experiment::table3: {
            const auto& p = require_csa(params, cfg.experiment);
            const auto fe = zeta_fractional(p);
            out.stats.push_back(scalar_stat("zeta_id", fe.pure_frac.zeta));
            out.stats.push_back(scalar_stat("zeta_arfima", fe.arfima_1d0.zeta));
            out.stats.push_back(scalar_stat("alpha_i", fe.arfima_1d0.fitted_params[0]));
            break;
        }
        case Experiment::fig_ar1_loss: {
            const auto& p = require_csa(params, cfg.experiment);
            out.stats.push_back(scalar_stat("alpha1", acf_csa(p, 1)));
            out.stats.push_back(scalar_stat("zeta_ar1", zeta_ar1_closed_form(p)));
            break;
        }
        case Experiment::fig_acf_shortmem:
        case Experiment::fig_antipersistence_acf: {
            const auto acf = theoretical_acf(params, cfg.max_lag);
            for (std::size_t k = 0; k < acf.size(); ++k) out.stats.push_back(scalar_stat("acf", acf[k], k));
            break;
        }
        case Experiment::fig_filter_match: {
            // every cell filters the same innovations (cell index 0 stream)
            const auto gen = make_generator(params, cfg.sample_size);
            const auto x = gen.sample(derive_seed(cfg.master_seed, 0, 0)).values;
            for (std::size_t t = 0; t < x.size(); ++t) out.stats.push_back(scalar_stat("series", x[t], t));
            const std::size_t lags = std::min(cfg.max_lag, x.size() - 1);
            const auto theory = theoretical_acf(params, lags);
            const auto sample = sample_acf(x, lags);
            for (std::size_t k = 0; k <= lags; ++k) out.stats.push_back(scalar_stat("acf_theory", theory[k], k));
            for (std::size_t k = 0; k <= lags; ++k) out.stats.push_back(scalar_stat("acf_sample", sample[k], k));
            break;
        }
        default:
            throw DomainError("run_analytic_cell: not an analytic experiment");
    }
    return out;
}

inline void validate(const ExperimentConfig& cfg) {
    require_domain(cfg.replications >= 1, "experiment: replications must be >= 1");
    require_domain(!cfg.parameter_grid.empty(), "experiment: parameter grid must be nonempty");
    require_domain(cfg.sample_size >= 16, "experiment: sample_size must be >= 16");
}

}  // namespace detail

/// Runs one experiment.  Per-cell statistics are identical for any worker
/// count; only `workers` and `wall_seconds` vary between runs.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    detail::validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult result;
    result.config = cfg;
    result.workers = resolve_workers(cfg.workers);
    const std::size_t cells = cfg.parameter_grid.size();
    result.per_cell.reserve(cells);
    for (const auto& params : cfg.parameter_grid) result.per_cell.push_back({params, {}});

    switch (cfg.experiment) {
        case Experiment::table1:
            for (std::size_t c = 0; c < cells; ++c)
                result.per_cell[c] = detail::run_gph_cell(cfg, c, result.workers);
            break;
        case Experiment::fig_mean_periodogram:
            for (std::size_t c = 0; c < cells; ++c)
                result.per_cell[c] = detail::run_mean_periodogram_cell(cfg, c, result.workers);
            break;
        default:
            parallel_for(cells, result.workers, [&](std::size_t c) {
                result.per_cell[c] = detail::run_analytic_cell(cfg, c);
            });
            break;
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

/// Looks up a statistic by name and index in one cell.
inline const Statistic* find_stat(const CellResult& cell, std::string_view name,
                                  std::size_t index = 0) {
    for (const auto& s : cell.stats)
        if (s.name == name && s.index == index) return &s;
    return nullptr;
}

}  // namespace nonfrac
