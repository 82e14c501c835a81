// nonfrac: command-line front end for simulation, forecasting, analysis and
// experiment reproduction.
//
// Exit codes: 0 success, 2 usage or validation error, 1 numerical failure.
// Data goes to --out (written to a temporary file and renamed into place) or
// stdout; diagnostics go to stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "nonfrac/nonfrac.hpp"

namespace fs = std::filesystem;
using namespace nonfrac;

namespace {

/// Usage problems detected after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) { return detail::format_double(v); }

/// Collects output in memory and publishes it atomically on commit().
class Output {
public:
    explicit Output(std::string path) : path_(std::move(path)) {}
    std::ostream& stream() { return buf_; }

    void commit() {
        if (path_.empty()) {
            std::cout << buf_.str() << std::flush;
            return;
        }
        const fs::path target(path_);
        fs::path tmp = target;
        tmp += ".tmp" + std::to_string(::getpid());
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f) throw UsageError("cannot open '" + tmp.string() + "' for writing");
            f << buf_.str();
            f.flush();
            if (!f) {
                std::error_code ec;
                fs::remove(tmp, ec);
                throw std::runtime_error("write to '" + tmp.string() + "' failed");
            }
        }
        fs::rename(tmp, target);
    }

private:
    std::string path_;
    std::ostringstream buf_;
};

std::vector<double> read_column(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open input '" + path + "'");
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
        if (ec != std::errc{} || ptr != body.data() + body.size()) {
            if (header_allowed) {
                header_allowed = false;
                continue;
            }
            throw UsageError(path + ":" + std::to_string(line_no) + ": not a number: '" + body + "'");
        }
        header_allowed = false;
        values.push_back(v);
    }
    if (values.empty()) throw UsageError(path + ": no numeric values");
    return values;
}

struct ProcessFlags {
    std::string process = "csa";
    double a = 0.2;
    double b = 1.6;
    double d = 0.2;
    double sigma = 1.0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--process", process, "csa or frac")->check(CLI::IsMember({"csa", "frac"}));
        cmd->add_option("--a", a, "first Beta parameter (csa)");
        cmd->add_option("--b", b, "second Beta parameter (csa), b > 1");
        cmd->add_option("--d", d, "memory parameter (frac), -1/2 < d < 1/2");
        cmd->add_option("--sigma", sigma, "innovation standard deviation");
    }
    CsaParams csa() const { return CsaParams(a, b, sigma); }
    FracParams frac() const { return FracParams(d); }
    std::string echo() const {
        return process == "csa" ? "process=csa a=" + num(a) + " b=" + num(b) + " sigma=" + num(sigma)
                                : "process=frac d=" + num(d) + " sigma=" + num(sigma);
    }
};

// ---------------------------------------------------------------------------

struct SimulateCmd {
    ProcessFlags proc;
    std::size_t length = 1024;
    std::uint64_t seed = 1;
    std::string method = "fast";
    std::size_t units = 0;
    std::optional<std::size_t> burn_in;
    std::string out;

    void run() {
        std::vector<double> x;
        std::string extra;
        if (proc.process == "frac") {
            if (method != "fast") throw UsageError("simulate: --method naive requires --process csa");
            x = generate_frac_fast(proc.frac(), length, seed, proc.sigma).values;
        } else if (method == "fast") {
            x = generate_csa_fast(proc.csa(), length, seed).values;
        } else {
            const std::size_t n = units == 0 ? length : units;
            const std::size_t burn = burn_in.value_or(default_burn_in(length));
            x = generate_csa_naive(proc.csa(), length, n, burn, seed).values;
            extra = " units=" + std::to_string(n) + " burnin=" + std::to_string(burn);
        }
        Output o(out);
        o.stream() << "# simulate " << proc.echo() << " length=" << length << " seed=" << seed
                   << " method=" << method << extra << "\nx\n";
        for (double v : x) o.stream() << num(v) << '\n';
        o.commit();
    }
};

struct ForecastCmd {
    std::string in;
    double a = 0.2;
    double b = 1.6;
    double sigma = 1.0;
    std::size_t horizon = 1;
    std::string out;

    void run() {
        if (horizon == 0) throw UsageError("forecast: --horizon must be >= 1");
        const CsaParams p(a, b, sigma);
        const auto x = read_column(in);
        const auto r = forecast_csa(x, p, horizon);
        Output o(out);
        o.stream() << "# forecast a=" << num(a) << " b=" << num(b) << " sigma=" << num(sigma)
                   << " horizon=" << horizon << " length=" << x.size()
                   << " reconstruction_error=" << num(r.reconstruction_error) << "\nh,forecast\n";
        for (std::size_t i = 0; i < r.point_forecasts.size(); ++i)
            o.stream() << i + 1 << ',' << num(r.point_forecasts[i]) << '\n';
        o.commit();
    }
};

struct AcfCmd {
    ProcessFlags proc;
    std::size_t max_lag = 50;
    std::string out;

    void run() {
        const auto acf = proc.process == "csa" ? acf_csa_sequence(proc.csa(), max_lag)
                                               : acf_frac_sequence(proc.frac(), max_lag);
        Output o(out);
        o.stream() << "# acf " << proc.echo() << " max_lag=" << max_lag << "\nlag,acf\n";
        for (std::size_t k = 0; k < acf.size(); ++k) o.stream() << k << ',' << num(acf[k]) << '\n';
        o.commit();
    }
};

struct SpectrumCmd {
    std::string in;
    double a = 0.09;
    double b = 2.4;
    double sigma = 1.0;
    bool no_demean = false;
    std::string out;

    void run() {
        Output o(out);
        if (!in.empty()) {
            const auto x = read_column(in);
            const auto pg = periodogram(x, !no_demean);
            o.stream() << "# periodogram in=" << in << " length=" << x.size()
                       << " demean=" << (no_demean ? 0 : 1) << "\nj,frequency,ordinate\n";
            for (std::size_t j = 0; j < pg.ordinates.size(); ++j)
                o.stream() << j + 1 << ',' << num(pg.frequencies[j]) << ',' << num(pg.ordinates[j]) << '\n';
        } else {
            const CsaParams p(a, b, sigma);
            if (!(b > 2.0)) {
                throw UsageError("spectrum: requires b > 2 (got b = " + num(b) +
                                 "); the spectral density diverges at the origin for b <= 2");
            }
            o.stream() << "# spectrum_at_zero a=" << num(a) << " b=" << num(b) << " sigma=" << num(sigma)
                       << "\na,b,spectrum_at_zero\n"
                       << num(a) << ',' << num(b) << ',' << num(csa_spectrum_at_zero(p)) << '\n';
        }
        o.commit();
    }
};

struct GphCmd {
    std::string in;
    std::size_t bandwidth = 0;
    bool no_demean = false;
    std::string out;

    void run() {
        const auto x = read_column(in);
        const auto est = gph_estimate(x, bandwidth, !no_demean);
        Output o(out);
        o.stream() << "# gph in=" << in << " length=" << x.size() << " bandwidth=" << est.bandwidth
                   << "\nd_hat,std_error,bandwidth\n"
                   << num(est.d_hat) << ',' << num(est.std_error) << ',' << est.bandwidth << '\n';
        o.commit();
    }
};

struct FitCmd {
    double a = 0.1;
    double b = 1.8;
    std::string model = "ar";
    std::size_t order = 1;
    std::string out;

    void run() {
        const CsaParams p(a, b);
        Output o(out);
        o.stream() << "# fit a=" << num(a) << " b=" << num(b) << " model=" << model;
        if (model == "ar") {
            const auto r = ar_efficiency(p, order);
            o.stream() << " order=" << order << "\nmodel,zeta,param_index,param\n";
            for (std::size_t i = 0; i < r.fitted_params.size(); ++i)
                o.stream() << "ar," << num(r.zeta) << ',' << i + 1 << ',' << num(r.fitted_params[i]) << '\n';
        } else {
            const auto r = zeta_fractional(p);
            o.stream() << "\nmodel,zeta,param_index,param\n";
            if (model == "frac") {
                o.stream() << "frac," << num(r.pure_frac.zeta) << ",,\n";
            } else {
                o.stream() << "arfima," << num(r.arfima_1d0.zeta) << ",1,"
                           << num(r.arfima_1d0.fitted_params[0]) << '\n';
            }
        }
        o.commit();
    }
};

struct MatchCmd {
    double d = 0.2;
    std::size_t k = 10;
    double a_max = 5.0;
    std::size_t grid = 100;
    std::string out;

    void run() {
        const auto r = best_matching_a(k, d, a_max, grid);
        Output o(out);
        o.stream() << "# match d=" << num(d) << " k=" << k << " a_max=" << num(a_max) << " grid=" << grid
                   << "\na_star,b,loss\n"
                   << num(r.a_star) << ',' << num(2.0 * (1.0 - d)) << ',' << num(r.loss) << '\n';
        o.commit();
    }
};

struct BenchmarkCmd {
    double a = 0.2;
    double b = 1.6;
    std::vector<std::size_t> sizes{100, 1000};
    std::size_t runs = 5;
    std::uint64_t seed = 1;
    std::string out;

    void run() {
        const auto rows = benchmark_generation(CsaParams(a, b), sizes, [](std::size_t t) { return t; }, runs, seed);
        Output o(out);
        o.stream() << "# benchmark a=" << num(a) << " b=" << num(b) << " runs=" << runs << " units=T\n"
                   << "length,units,fast_seconds,naive_seconds,speedup\n";
        for (const auto& r : rows)
            o.stream() << r.length << ',' << r.n_units << ',' << num(r.fast_seconds) << ','
                       << num(r.naive_seconds) << ',' << num(r.speedup) << '\n';
        o.commit();
    }
};

struct ExperimentCmd {
    std::string config;
    std::string name;
    std::string scale = "desk";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::optional<std::size_t> length;
    std::size_t workers = 0;
    std::string out;
    std::string json_out;

    ExperimentConfig build() const {
        ExperimentConfig cfg;
        if (!config.empty()) {
            cfg = load_config(config);
        } else {
            if (name.empty()) throw UsageError("experiment: give --config or --name");
            const auto e = parse_experiment(name);
            if (!e) throw UsageError("experiment: unknown experiment '" + name + "'");
            cfg = ExperimentConfig::defaults(*e, scale == "full" ? Scale::full : Scale::desk);
        }
        if (seed) cfg.master_seed = *seed;
        if (reps) cfg.replications = *reps;
        if (length) cfg.sample_size = *length;
        if (workers != 0) cfg.workers = workers;
        return cfg;
    }

    void run() {
        const auto result = run_experiment(build());
        Output o(out);
        write_csv(o.stream(), result);
        if (!json_out.empty()) {
            Output j(json_out);
            j.stream() << to_json(result).dump(2) << '\n';
            j.commit();
        }
        o.commit();
    }
};

struct TableCmd {
    int table = 2;
    std::string scale = "desk";
    std::optional<std::uint64_t> seed;
    std::size_t workers = 0;
    std::string out;

    void run() {
        const Experiment e = table == 1 ? Experiment::table1 : table == 2 ? Experiment::table2 : Experiment::table3;
        auto cfg = ExperimentConfig::defaults(e, scale == "full" ? Scale::full : Scale::desk);
        if (seed) cfg.master_seed = *seed;
        cfg.workers = workers;
        const auto result = run_experiment(cfg);
        Output o(out);
        write_table_csv(o.stream(), result);
        o.commit();
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Long-memory processes: fractional differencing and cross-sectional aggregation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SimulateCmd sim;
    auto* c_sim = app.add_subcommand("simulate", "generate a sample path");
    sim.proc.add_to(c_sim);
    c_sim->add_option("--length", sim.length, "sample size T")->check(CLI::PositiveNumber);
    c_sim->add_option("--seed", sim.seed, "RNG seed");
    c_sim->add_option("--method", sim.method, "fast or naive")->check(CLI::IsMember({"fast", "naive"}));
    c_sim->add_option("--units", sim.units, "AR(1) units for --method naive (default T)");
    c_sim->add_option("--burnin", sim.burn_in, "burn-in for --method naive (default max(2000, T))");
    c_sim->add_option("--out", sim.out, "output CSV (default stdout)");

    ForecastCmd fc;
    auto* c_fc = app.add_subcommand("forecast", "minimum-MSE CSA forecasts of a series");
    c_fc->add_option("--in", fc.in, "input CSV, one numeric column")->required();
    c_fc->add_option("--a", fc.a);
    c_fc->add_option("--b", fc.b);
    c_fc->add_option("--sigma", fc.sigma);
    c_fc->add_option("--horizon", fc.horizon, "forecast horizon h >= 1");
    c_fc->add_option("--out", fc.out);

    AcfCmd acf;
    auto* c_acf = app.add_subcommand("acf", "theoretical autocorrelations");
    acf.proc.add_to(c_acf);
    c_acf->add_option("--max-lag", acf.max_lag);
    c_acf->add_option("--out", acf.out);

    SpectrumCmd spec;
    auto* c_spec = app.add_subcommand("spectrum", "CSA spectral density at the origin, or a periodogram with --in");
    c_spec->add_option("--in", spec.in, "series to transform");
    c_spec->add_option("--a", spec.a);
    c_spec->add_option("--b", spec.b, "b > 2");
    c_spec->add_option("--sigma", spec.sigma);
    c_spec->add_flag("--no-demean", spec.no_demean);
    c_spec->add_option("--out", spec.out);

    GphCmd gph;
    auto* c_gph = app.add_subcommand("gph", "log-periodogram memory estimate");
    c_gph->add_option("--in", gph.in)->required();
    c_gph->add_option("--bandwidth", gph.bandwidth, "frequencies used (default floor(sqrt(T)))");
    c_gph->add_flag("--no-demean", gph.no_demean);
    c_gph->add_option("--out", gph.out);

    FitCmd fit;
    auto* c_fit = app.add_subcommand("fit", "population fit of a misspecified model and its efficiency loss");
    c_fit->add_option("--a", fit.a);
    c_fit->add_option("--b", fit.b);
    c_fit->add_option("--model", fit.model)->check(CLI::IsMember({"ar", "frac", "arfima"}));
    c_fit->add_option("--order", fit.order)->check(CLI::PositiveNumber);
    c_fit->add_option("--out", fit.out);

    MatchCmd match;
    auto* c_match = app.add_subcommand("match", "CSA parameter a closest to I(d) up to lag k");
    c_match->add_option("--d", match.d);
    c_match->add_option("--k", match.k)->check(CLI::PositiveNumber);
    c_match->add_option("--a-max", match.a_max);
    c_match->add_option("--grid", match.grid);
    c_match->add_option("--out", match.out);

    BenchmarkCmd bench;
    auto* c_bench = app.add_subcommand("benchmark", "fast vs naive CSA generation timings (N = T)");
    c_bench->add_option("--a", bench.a);
    c_bench->add_option("--b", bench.b);
    c_bench->add_option("--sizes", bench.sizes)->delimiter(',');
    c_bench->add_option("--runs", bench.runs)->check(CLI::PositiveNumber);
    c_bench->add_option("--seed", bench.seed);
    c_bench->add_option("--out", bench.out);

    ExperimentCmd exp;
    auto* c_exp = app.add_subcommand("experiment", "run a table or figure experiment");
    c_exp->add_option("--config", exp.config, "key = value config file");
    c_exp->add_option("--name", exp.name, "experiment name (when no --config)");
    c_exp->add_option("--scale", exp.scale)->check(CLI::IsMember({"desk", "full"}));
    c_exp->add_option("--seed", exp.seed);
    c_exp->add_option("--reps", exp.reps);
    c_exp->add_option("--length", exp.length);
    c_exp->add_option("--workers", exp.workers);
    c_exp->add_option("--out", exp.out, "CSV result (default stdout)");
    c_exp->add_option("--json", exp.json_out, "JSON result");

    TableCmd tab;
    auto* c_tab = app.add_subcommand("table", "reproduce a table in its printed layout");
    c_tab->add_option("--table", tab.table)->check(CLI::IsMember({1, 2, 3}));
    c_tab->add_option("--scale", tab.scale)->check(CLI::IsMember({"desk", "full"}));
    c_tab->add_option("--seed", tab.seed);
    c_tab->add_option("--workers", tab.workers);
    c_tab->add_option("--out", tab.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "nonfrac: " << e.what() << '\n';
        return 2;
    }

    try {
        if (c_sim->parsed()) sim.run();
        else if (c_fc->parsed()) fc.run();
        else if (c_acf->parsed()) acf.run();
        else if (c_spec->parsed()) spec.run();
        else if (c_gph->parsed()) gph.run();
        else if (c_fit->parsed()) fit.run();
        else if (c_match->parsed()) match.run();
        else if (c_bench->parsed()) bench.run();
        else if (c_exp->parsed()) exp.run();
        else if (c_tab->parsed()) tab.run();
    } catch (const UsageError& e) {
        std::cerr << "nonfrac: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "nonfrac: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "nonfrac: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
