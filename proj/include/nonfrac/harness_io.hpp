#pragma once

/// Experiment configuration files and result serialization.
///
/// Config files are `key = value` lines; `#` starts a comment.  Keys:
///
///   experiment    table1 | table2 | table3 | fig_acf_shortmem | fig_filter_match
///                 | fig_antipersistence_acf | fig_mean_periodogram | fig_ar1_loss
///   scale         desk | full   (selects the defaults the other keys override)
///   sample_size   positive integer
///   replications  positive integer
///   master_seed   unsigned 64-bit integer
///   max_lag       nonnegative integer
///   workers       nonnegative integer (0: all cores)
///   grid          entries separated by `;`, each `csa(a,b)`, `csa(a,b,sigma)` or `frac(d)`
///
/// `experiment` is required; every other key falls back to the defaults.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "nonfrac/error.hpp"
#include "nonfrac/harness.hpp"

namespace nonfrac {

class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
    const std::string s = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError(std::string(what) + ": cannot parse '" + s + "' as a number");
    }
    return value;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// Shortest representation that round-trips; keeps CSV output byte-stable.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace detail

/// Parses one grid entry: `csa(a,b)`, `csa(a,b,sigma)` or `frac(d)`.
inline ProcessParams parse_process(std::string_view text) {
    const std::string s = detail::trim(text);
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')') {
        throw ConfigError("grid entry '" + s + "': expected csa(a,b[,sigma]) or frac(d)");
    }
    const std::string name = detail::trim(std::string_view(s).substr(0, open));
    const auto args = detail::split(std::string_view(s).substr(open + 1, s.size() - open - 2), ',');
    std::vector<double> v;
    for (const auto& a : args) v.push_back(detail::parse_number<double>(a, "grid entry '" + s + "'"));
    if (name == "csa" && (v.size() == 2 || v.size() == 3)) {
        return CsaParams(v[0], v[1], v.size() == 3 ? v[2] : 1.0);
    }
    if (name == "frac" && v.size() == 1) return FracParams(v[0]);
    throw ConfigError("grid entry '" + s + "': expected csa(a,b[,sigma]) or frac(d)");
}

inline std::string describe(const ProcessParams& params) {
    if (const auto* c = std::get_if<CsaParams>(&params)) {
        std::string out = "csa(" + detail::format_double(c->a()) + "," + detail::format_double(c->b());
        if (c->sigma_eps() != 1.0) out += "," + detail::format_double(c->sigma_eps());
        return out + ")";
    }
    return "frac(" + detail::format_double(std::get<FracParams>(params).d()) + ")";
}

inline ExperimentConfig parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = detail::trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        static const std::vector<std::string> known{"experiment", "scale",   "sample_size", "replications",
                                                    "master_seed", "max_lag", "workers",     "grid"};
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }

    if (!kv.contains("experiment")) throw ConfigError("config: missing required key 'experiment'");
    const auto experiment = parse_experiment(kv["experiment"]);
    if (!experiment) throw ConfigError("config: unknown experiment '" + kv["experiment"] + "'");
    Scale scale = Scale::desk;
    if (auto it = kv.find("scale"); it != kv.end()) {
        if (it->second == "full") scale = Scale::full;
        else if (it->second != "desk") throw ConfigError("config: scale must be desk or full");
    }

    auto cfg = ExperimentConfig::defaults(*experiment, scale);
    if (auto it = kv.find("sample_size"); it != kv.end())
        cfg.sample_size = detail::parse_number<std::size_t>(it->second, "sample_size");
    if (auto it = kv.find("replications"); it != kv.end())
        cfg.replications = detail::parse_number<std::size_t>(it->second, "replications");
    if (auto it = kv.find("master_seed"); it != kv.end())
        cfg.master_seed = detail::parse_number<std::uint64_t>(it->second, "master_seed");
    if (auto it = kv.find("max_lag"); it != kv.end())
        cfg.max_lag = detail::parse_number<std::size_t>(it->second, "max_lag");
    if (auto it = kv.find("workers"); it != kv.end())
        cfg.workers = detail::parse_number<std::size_t>(it->second, "workers");
    if (auto it = kv.find("grid"); it != kv.end()) {
        cfg.parameter_grid.clear();
        for (const auto& entry : detail::split(it->second, ';')) {
            if (!entry.empty()) cfg.parameter_grid.push_back(parse_process(entry));
        }
    }
    if (cfg.replications < 1) throw ConfigError("config: replications must be >= 1");
    if (cfg.parameter_grid.empty()) throw ConfigError("config: grid must be nonempty");
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    return parse_config(in);
}

/// `#` metadata lines (config echo and version, no timing) followed by one
/// row per (cell, statistic, index).
inline void write_csv(std::ostream& out, const ExperimentResult& r) {
    const auto& c = r.config;
    out << "# experiment=" << to_string(c.experiment) << " sample_size=" << c.sample_size
        << " replications=" << c.replications << " master_seed=" << c.master_seed
        << " max_lag=" << c.max_lag << " version=" << r.code_version << '\n';
    out << "cell,process,a,b,d,sigma_eps,statistic,index,mean,sd,count\n";
    for (std::size_t i = 0; i < r.per_cell.size(); ++i) {
        const auto& cell = r.per_cell[i];
        std::string prefix;
        if (const auto* p = std::get_if<CsaParams>(&cell.params)) {
            prefix = "csa," + detail::format_double(p->a()) + "," + detail::format_double(p->b()) + "," +
                     detail::format_double(p->memory()) + "," + detail::format_double(p->sigma_eps());
        } else {
            prefix = "frac,,," + detail::format_double(std::get<FracParams>(cell.params).d()) + ",1";
        }
        for (const auto& s : cell.stats) {
            out << i << ',' << prefix << ',' << s.name << ',' << s.index << ','
                << detail::format_double(s.mean) << ',' << detail::format_double(s.sd) << ','
                << s.count << '\n';
        }
    }
}

inline nlohmann::json to_json(const ExperimentResult& r) {
    using nlohmann::json;
    const auto& c = r.config;
    json grid = json::array();
    for (const auto& p : c.parameter_grid) grid.push_back(describe(p));
    json cells = json::array();
    for (const auto& cell : r.per_cell) {
        json stats = json::array();
        for (const auto& s : cell.stats) {
            stats.push_back({{"name", s.name}, {"index", s.index}, {"mean", s.mean}, {"sd", s.sd},
                             {"count", s.count}});
        }
        cells.push_back({{"process", describe(cell.params)}, {"stats", std::move(stats)}});
    }
    return {
        {"config",
         {{"experiment", std::string(to_string(c.experiment))},
          {"sample_size", c.sample_size},
          {"replications", c.replications},
          {"master_seed", c.master_seed},
          {"max_lag", c.max_lag},
          {"grid", std::move(grid)}}},
        {"per_cell", std::move(cells)},
        {"metadata", {{"workers", r.workers}, {"wall_seconds", r.wall_seconds}, {"code_version", r.code_version}}},
    };
}

namespace detail {

inline std::vector<double> distinct_in_order(const ExperimentResult& r, double (CsaParams::*field)() const) {
    std::vector<double> out;
    for (const auto& cell : r.per_cell) {
        const double v = (std::get<CsaParams>(cell.params).*field)();
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return out;
}

inline const CellResult& cell_at(const ExperimentResult& r, double a, double b) {
    for (const auto& cell : r.per_cell) {
        const auto& p = std::get<CsaParams>(cell.params);
        if (p.a() == a && p.b() == b) return cell;
    }
    throw DomainError("table: grid is not a full a x b product");
}

inline std::string fixed(double v, int digits) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

}  // namespace detail

/// The result laid out like the printed tables: table1 has one column per
/// cell with mean and sd rows; table2 and table3 have one row per a and one
/// column per (model, b).  Values are rounded to the printed precision.
inline void write_table_csv(std::ostream& out, const ExperimentResult& r) {
    const auto& c = r.config;
    out << "# table=" << to_string(c.experiment) << " sample_size=" << c.sample_size
        << " replications=" << c.replications << " master_seed=" << c.master_seed << '\n';
    switch (c.experiment) {
        case Experiment::table1: {
            out << "row";
            for (const auto& cell : r.per_cell) {
                const bool csa = std::holds_alternative<CsaParams>(cell.params);
                const double d = csa ? std::get<CsaParams>(cell.params).memory()
                                     : std::get<FracParams>(cell.params).d();
                out << ',' << (csa ? "CSA" : "I") << "[d=" << detail::format_double(d) << ']';
            }
            out << "\nmean";
            for (const auto& cell : r.per_cell) out << ',' << detail::fixed(find_stat(cell, "d_hat")->mean, 4);
            out << "\nsd";
            for (const auto& cell : r.per_cell) out << ',' << detail::fixed(find_stat(cell, "d_hat")->sd, 4);
            out << '\n';
            return;
        }
        case Experiment::table2:
        case Experiment::table3: {
            const bool t2 = c.experiment == Experiment::table2;
            const auto as = detail::distinct_in_order(r, &CsaParams::a);
            const auto bs = detail::distinct_in_order(r, &CsaParams::b);
            const char* left = t2 ? "AR1" : "Id";
            const char* right = t2 ? "AR20" : "ARFIMA";
            out << "a,row";
            for (const char* model : {left, right})
                for (double b : bs) out << ',' << model << "[b=" << detail::format_double(b) << ']';
            out << '\n';
            for (double a : as) {
                out << detail::format_double(a) << ",zeta";
                for (const char* stat : t2 ? std::vector<const char*>{"zeta_ar1", "zeta_ar20"}
                                           : std::vector<const char*>{"zeta_id", "zeta_arfima"}) {
                    for (double b : bs) {
                        const auto& cell = detail::cell_at(r, a, b);
                        const Statistic* s = nullptr;
                        for (const auto& st : cell.stats)
                            if (st.name == stat) s = &st;
                        out << ',' << detail::fixed(s->mean, 3);
                    }
                }
                out << '\n';
                if (!t2) {
                    out << detail::format_double(a) << ",alpha";
                    for (std::size_t i = 0; i < bs.size(); ++i) out << ',';
                    for (double b : bs)
                        out << ',' << detail::fixed(find_stat(detail::cell_at(r, a, b), "alpha_i")->mean, 3);
                    out << '\n';
                }
            }
            return;
        }
        default:
            throw DomainError("write_table_csv: " + std::string(to_string(c.experiment)) +
                              " is not a table experiment");
    }
}

}  // namespace nonfrac
