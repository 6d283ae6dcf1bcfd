// Batch front end: sweeps over field strengths, writes CSV curves and a manifest.
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include <deltastark/sweep.hpp>

int main(int argc, char** argv) {
    CLI::App app{"delta-well ionization in a static field: curves, tables and oracle reports"};
    std::string config_path, f_list, outputs;
    std::optional<double> t_min, t_max, tol;
    std::optional<int> t_steps, n_max, threads;
    std::optional<std::string> out_dir;
    app.add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
    app.add_option("--f", f_list, "comma-separated field strengths");
    app.add_option("--t-min", t_min, "first time on the grid");
    app.add_option("--t-max", t_max, "last time on the grid");
    app.add_option("--t-steps", t_steps, "number of grid points");
    app.add_option("--n-max", n_max, "highest I_n kept before automatic extension");
    app.add_option("--tol", tol, "target tolerance");
    app.add_option("--output", outputs, "ionization,lambda,propagator_slice,fig1,oracle_report");
    app.add_option("--out-dir", out_dir, "directory for CSV files and manifest.json");
    app.add_option("--threads", threads, "worker threads (0 = hardware)");
    CLI11_PARSE(app, argc, argv);

    deltastark::SweepConfig cfg;
    try {
        if (!config_path.empty()) deltastark::apply_config_file(cfg, config_path);
        // command line wins over the file
        if (!f_list.empty()) deltastark::apply_setting(cfg, "f", f_list);
        if (!outputs.empty()) deltastark::apply_setting(cfg, "output", outputs);
        if (t_min) cfg.t_min = *t_min;
        if (t_max) cfg.t_max = *t_max;
        if (t_steps) cfg.t_steps = *t_steps;
        if (n_max) cfg.n_max = *n_max;
        if (tol) cfg.tol = *tol;
        if (threads) cfg.threads = *threads;
        if (out_dir) cfg.output_path = *out_dir;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    auto rep = deltastark::run(cfg);
    for (auto& w : rep.warnings) std::cerr << (rep.exit_code == 1 ? "error: " : "warning: ") << w << "\n";
    for (auto& f : rep.files) std::cout << cfg.output_path << "/" << f << "\n";
    return rep.exit_code;
}
