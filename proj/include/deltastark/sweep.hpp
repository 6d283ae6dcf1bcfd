#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "dynamics.hpp"
#include "oracle.hpp"

namespace deltastark {

inline constexpr const char* library_version = "1.0.0";

// ---- fig1 table: y(r) against its leading-term approximation y_a(r) ----

struct Fig1Row {
    int r;
    double y, y_a, ratio;
};

// y and y_a share the prefactor 4 Gamma(1/2+r)/(sqrt(pi) r!^2) = 4 (2r)!/(4^r r!^3),
// and the 4F3 is a terminating sum of rationals, so both columns are exact until the final rounding
inline std::vector<Fig1Row> fig1_table(int r_max = 10) {
    using boost::multiprecision::cpp_rational;
    using boost::multiprecision::cpp_int;
    std::vector<Fig1Row> rows;
    for (int r = 0; r <= r_max; ++r) {
        cpp_int fact_r = 1, fact_2r = 1;
        for (int k = 1; k <= r; ++k) fact_r *= k;
        for (int k = 1; k <= 2 * r; ++k) fact_2r *= k;
        cpp_rational pref = cpp_rational(4 * fact_2r, cpp_int(1) << (2 * r)) / (fact_r * fact_r * fact_r);
        cpp_rational term = 1, sum = 1;
        const cpp_rational a1(1, 3), a2(2, 3), b1(5, 6), b2(7, 6), b3 = cpp_rational(1, 2) - r;
        for (int k = 0; k < r; ++k) {
            cpp_rational mr = cpp_rational(k - r);
            term *= (a1 + k) * (a2 + k) * mr * mr / ((b1 + k) * (b2 + k) * (b3 + k) * (k + 1));
            term = -term;
            sum += term;
        }
        rows.push_back({r, static_cast<double>(cpp_rational(pref * sum)), static_cast<double>(pref),
                        static_cast<double>(sum)});
    }
    return rows;
}

// the n-sum that y stands for, summed term by term in floating point
inline double fig1_direct_sum(int r) {
    double s = 0.0;
    for (int n = 0; n <= r; ++n) {
        double lg = std::lgamma(0.5 + n) + std::lgamma(2.0 + 6 * n) + std::lgamma(0.5 + r - n) -
                    2.0 * (std::lgamma(1.5 + 3 * n) + std::lgamma(1.0 + r - n) + std::lgamma(1.0 + n)) -
                    n * std::log(64.0);
        s += std::exp(lg);
    }
    return s;
}

// ---- configuration ----

struct SweepConfig {
    std::vector<double> f_values{1.0};
    double t_min = 0.0, t_max = 6.0;
    int t_steps = 200;
    int n_max = default_n_max;
    double tol = 1e-10;
    std::set<std::string> outputs{"ionization"};
    std::string output_path = "out";
    double slice_x_max = 5.0;
    int slice_points = 21;
    int threads = 0;
};

inline const std::set<std::string>& known_outputs() {
    static const std::set<std::string> k{"ionization", "lambda", "propagator_slice", "fig1", "oracle_report"};
    return k;
}

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw config_error("bad number for " + key + ": '" + v + "'");
    }
}

inline int parse_int(const std::string& key, const std::string& v) {
    double d = parse_double(key, v);
    if (d != std::floor(d)) throw config_error("expected an integer for " + key);
    return int(d);
}

inline void apply_setting(SweepConfig& c, const std::string& key, const std::string& value) {
    if (key == "f") {
        c.f_values.clear();
        for (auto& s : split_list(value)) c.f_values.push_back(parse_double(key, s));
    } else if (key == "t_min") {
        c.t_min = parse_double(key, value);
    } else if (key == "t_max") {
        c.t_max = parse_double(key, value);
    } else if (key == "t_steps") {
        c.t_steps = parse_int(key, value);
    } else if (key == "n_max") {
        c.n_max = parse_int(key, value);
    } else if (key == "tol") {
        c.tol = parse_double(key, value);
    } else if (key == "output") {
        c.outputs.clear();
        for (auto& s : split_list(value)) c.outputs.insert(s);
    } else if (key == "out_dir") {
        c.output_path = value;
    } else if (key == "slice_x_max") {
        c.slice_x_max = parse_double(key, value);
    } else if (key == "slice_points") {
        c.slice_points = parse_int(key, value);
    } else if (key == "threads") {
        c.threads = parse_int(key, value);
    } else {
        throw config_error("unknown key '" + key + "'");
    }
}

// flat key=value lines, '#' starts a comment; dashes in keys are accepted for underscores
inline void apply_config_text(SweepConfig& c, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw config_error("line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        std::replace(key.begin(), key.end(), '-', '_');
        apply_setting(c, key, value);
    }
}

inline void apply_config_file(SweepConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(c, ss.str());
}

inline void validate(const SweepConfig& c) {
    if (c.f_values.empty()) throw config_error("no field values");
    for (double f : c.f_values)
        if (!std::isfinite(f)) throw config_error("field values must be finite");
    if (!(c.t_min >= 0.0)) throw config_error("t_min must be >= 0");
    if (!(c.t_max > c.t_min)) throw config_error("t_max must exceed t_min");
    if (c.t_steps < 2) throw config_error("t_steps must be >= 2");
    if (!(c.tol > 0.0)) throw config_error("tol must be positive");
    if (c.n_max < 2 || c.n_max > n_max_cap) throw config_error("n_max out of range");
    if (c.outputs.empty()) throw config_error("no outputs requested");
    for (auto& o : c.outputs)
        if (!known_outputs().count(o)) throw config_error("unknown output '" + o + "'");
    if (c.slice_points < 2 || !(c.slice_x_max > 0.0)) throw config_error("bad propagator slice settings");
}

inline std::vector<double> time_grid(const SweepConfig& c) {
    std::vector<double> g(std::size_t(c.t_steps));
    for (int i = 0; i < c.t_steps; ++i)
        g[std::size_t(i)] = i + 1 == c.t_steps ? c.t_max : c.t_min + (c.t_max - c.t_min) * i / (c.t_steps - 1);
    return g;
}

// ---- helpers ----

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string f_tag(double f) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", f);
    return buf;
}

// results land in index order whatever the thread count
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, int threads, Fn&& fn) {
    std::vector<T> out(n);
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::size_t workers = std::min<std::size_t>(n, threads > 0 ? std::size_t(threads) : hw);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
        }));
    for (auto& j : jobs) j.get();
    return out;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
        text_ += '\n';
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
        text_ += '\n';
    }
    void save(const std::filesystem::path& p) const {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << text_;
    }

private:
    std::string text_;
};

struct RunReport {
    int exit_code = 0;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
    nlohmann::json non_converged = nlohmann::json::array();
    nlohmann::json manifest;
};

// ---- the sweep ----

namespace detail {

inline void flag(RunReport& rep, const std::string& output, double f, const char* axis, double at,
                 const std::string& why) {
    rep.non_converged.push_back({{"output", output}, {"f", f}, {axis, at}, {"reason", why}});
}

inline void run_ionization(const SweepConfig& c, double f, const std::filesystem::path& dir, RunReport& rep) {
    auto grid = time_grid(c);
    bool pad = grid.front() > 0.0;
    if (pad) grid.insert(grid.begin(), 0.0);
    auto curve = ionization_curve(grid, f, c.n_max, c.tol);
    CsvWriter w({"t", "amplitude_re", "amplitude_im", "probability", "decay_reference", "normalization_constant",
                 "amplitude_phi_re", "amplitude_phi_im", "amplitude_delta_re", "amplitude_delta_im", "converged"});
    for (std::size_t i = pad ? 1 : 0; i < grid.size(); ++i) {
        w.row({fmt17(grid[i]), fmt17(curve.amplitude[i].real()), fmt17(curve.amplitude[i].imag()),
               fmt17(curve.probability[i]), fmt17(curve.decay_reference[i]), fmt17(curve.normalization_constant[i]),
               fmt17(curve.amplitude_phi[i].real()), fmt17(curve.amplitude_phi[i].imag()),
               fmt17(curve.amplitude_delta[i].real()), fmt17(curve.amplitude_delta[i].imag()),
               curve.converged[i] ? "1" : "0"});
        if (!curve.converged[i]) flag(rep, "ionization", f, "t", grid[i], "amplitude or norm quadrature");
    }
    auto name = "ionization_f" + f_tag(f) + ".csv";
    w.save(dir / name);
    rep.files.push_back(name);
}

inline void run_lambda(const SweepConfig& c, double f, const std::filesystem::path& dir, RunReport& rep) {
    std::vector<double> grid;
    for (double t : time_grid(c))
        if (t > 0.0) grid.push_back(t);
    auto evals = parallel_map<LambdaProfile>(grid.size(), c.threads, [&](std::size_t i) {
        return lambda_a({grid[i]}, f, c.n_max, c.tol);
    });
    CsvWriter w({"t", "smooth_re", "smooth_im", "series_re", "series_im", "terms_used", "est_error", "converged"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto& p = evals[i];
        w.row({fmt17(grid[i]), fmt17(p.smooth_values[0].real()), fmt17(p.smooth_values[0].imag()),
               fmt17(p.remainder[0].real()), fmt17(p.remainder[0].imag()), std::to_string(p.diagnostics[0].terms_used),
               fmt17(p.diagnostics[0].est_error), p.diagnostics[0].converged ? "1" : "0"});
        if (!p.diagnostics[0].converged) flag(rep, "lambda", f, "t", grid[i], "n-series tail above tol");
    }
    auto name = "lambda_f" + f_tag(f) + ".csv";
    w.save(dir / name);
    rep.files.push_back(name);
}

inline void run_propagator_slice(const SweepConfig& c, double f, const std::filesystem::path& dir, RunReport& rep) {
    double t = c.t_max;
    auto prof = lambda_profile(t, f, c.n_max, c.tol);
    std::vector<double> xs(std::size_t(c.slice_points));
    for (int i = 0; i < c.slice_points; ++i)
        xs[std::size_t(i)] = -c.slice_x_max + 2.0 * c.slice_x_max * i / (c.slice_points - 1);
    auto vals = parallel_map<cplx>(xs.size(), c.threads, [&](std::size_t i) {
        return propagator_a(xs[i], 0.0, t, f, prof, std::max(c.tol, 1e-9));
    });
    CsvWriter w({"x", "x_prime", "t", "kernel_re", "kernel_im", "field_kernel_re", "field_kernel_im"});
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cplx k = kf(xs[i], 0.0, t, f);
        w.row({fmt17(xs[i]), "0", fmt17(t), fmt17(vals[i].real()), fmt17(vals[i].imag()), fmt17(k.real()),
               fmt17(k.imag())});
    }
    if (!prof.all_converged()) flag(rep, "propagator_slice", f, "t", t, "lambda profile");
    auto name = "propagator_slice_f" + f_tag(f) + ".csv";
    w.save(dir / name);
    rep.files.push_back(name);
}

inline void run_oracle_report(const SweepConfig& c, double f, const std::filesystem::path& dir, RunReport& rep) {
    auto grid = time_grid(c);
    bool pad = grid.front() > 0.0;
    if (pad) grid.insert(grid.begin(), 0.0);
    auto curve = ionization_curve(grid, f, c.n_max, c.tol);
    double tmax = grid.back();
    double h = tmax / std::ceil(tmax / 2e-3);
    auto v = volterra_solve(tmax, h, f);
    CsvWriter w({"t", "lambda_amplitude_re", "lambda_amplitude_im", "volterra_amplitude_re", "volterra_amplitude_im",
                 "abs_difference"});
    for (std::size_t i = pad ? 1 : 0; i < grid.size(); ++i) {
        double pos = grid[i] / h;
        std::size_t m = std::min(v.grid.size() - 2, std::size_t(pos));
        double frac = pos - double(m);
        cplx av = (1.0 - frac) * v.bound_amplitude(m) + frac * v.bound_amplitude(m + 1);
        cplx al = curve.amplitude[i];
        w.row({fmt17(grid[i]), fmt17(al.real()), fmt17(al.imag()), fmt17(av.real()), fmt17(av.imag()),
               fmt17(std::abs(al - av))});
    }
    auto name = "oracle_report_f" + f_tag(f) + ".csv";
    w.save(dir / name);
    rep.files.push_back(name);
}

inline void run_oracle_identities(const std::filesystem::path& dir, RunReport& rep) {
    std::string text;
    for (auto& chk : identity_checks()) {
        text += format_check(chk) + "\n";
        if (!chk.pass) rep.warnings.push_back("identity check failed: " + chk.name);
    }
    std::ofstream(dir / "oracle_identities.txt", std::ios::binary) << text;
    rep.files.push_back("oracle_identities.txt");
}

inline void run_fig1(const std::filesystem::path& dir, RunReport& rep) {
    CsvWriter w({"r", "y", "y_a", "ratio", "direct_sum"});
    for (auto& row : fig1_table())
        w.row({std::to_string(row.r), fmt17(row.y), fmt17(row.y_a), fmt17(row.ratio), fmt17(fig1_direct_sum(row.r))});
    w.save(dir / "fig1.csv");
    rep.files.push_back("fig1.csv");
}

}  // namespace detail

inline nlohmann::json config_json(const SweepConfig& c) {
    return {{"f", c.f_values},
            {"t_min", c.t_min},
            {"t_max", c.t_max},
            {"t_steps", c.t_steps},
            {"n_max", c.n_max},
            {"tol", c.tol},
            {"outputs", std::vector<std::string>(c.outputs.begin(), c.outputs.end())},
            {"slice_x_max", c.slice_x_max},
            {"slice_points", c.slice_points}};
}

// writes the CSVs and manifest.json under output_path; exit code 0 clean, 2 warnings, 1 errors
inline RunReport run(const SweepConfig& c) {
    RunReport rep;
    try {
        validate(c);
    } catch (const config_error& e) {
        rep.exit_code = 1;
        rep.warnings.push_back(std::string("invalid config: ") + e.what());
        return rep;
    }
    std::filesystem::path dir(c.output_path);
    bool errors = false;
    try {
        std::filesystem::create_directories(dir);
    } catch (const std::exception& e) {
        rep.exit_code = 1;
        rep.warnings.push_back(std::string("cannot create output directory: ") + e.what());
        return rep;
    }
    auto guarded = [&](const std::string& what, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            errors = true;
            rep.warnings.push_back(what + ": " + e.what());
        }
    };
    if (c.outputs.count("fig1")) guarded("fig1", [&] { detail::run_fig1(dir, rep); });
    if (c.outputs.count("oracle_report")) guarded("oracle identities", [&] { detail::run_oracle_identities(dir, rep); });
    for (double f : c.f_values) {
        std::string tag = " (f=" + f_tag(f) + ")";
        if (c.outputs.count("ionization")) guarded("ionization" + tag, [&] { detail::run_ionization(c, f, dir, rep); });
        if (c.outputs.count("lambda")) guarded("lambda" + tag, [&] { detail::run_lambda(c, f, dir, rep); });
        if (c.outputs.count("propagator_slice"))
            guarded("propagator_slice" + tag, [&] { detail::run_propagator_slice(c, f, dir, rep); });
        if (c.outputs.count("oracle_report"))
            guarded("oracle_report" + tag, [&] { detail::run_oracle_report(c, f, dir, rep); });
    }
    for (auto& nc : rep.non_converged) {
        std::string at = nc.contains("t") ? "t=" + fmt17(nc["t"].get<double>()) : "";
        rep.warnings.push_back("non-converged point: " + nc["output"].get<std::string>() + " f=" +
                               f_tag(nc["f"].get<double>()) + " " + at);
    }
    rep.manifest = {{"library_version", library_version},
                    {"config", config_json(c)},
                    {"files", rep.files},
                    {"non_converged", rep.non_converged},
                    {"warnings", rep.warnings}};
    std::ofstream(dir / "manifest.json", std::ios::binary) << rep.manifest.dump(2) << "\n";
    rep.exit_code = errors ? 1 : (rep.warnings.empty() ? 0 : 2);
    return rep;
}

}  // namespace deltastark
