#include "tdcis/config.hpp"
#include "tdcis/errors.hpp"
#include "tdcis/io.hpp"
#include "tdcis/scenario.hpp"
#include "tdcis/threading.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"tdcis: strong-field ionization of closed-shell atoms"};
    app.require_subcommand(1);

    std::string config_path, yields_path, signal_path, output_dir;
    int threads = 0; // 0 = auto; TDCIS_THREADS overrides either way
    unsigned seed = 1;
    bool doubling = false;
    double tol = 1e-3;
    double w0 = 0, z0 = 0, n_phot = 0, z_min = 0, z_max = 0;
    int n_z = 128, n_u = 64;

    app.add_option("--output-dir", output_dir, "where run artifacts go (overrides the config)");
    app.add_option("--threads", threads, "worker threads (TDCIS_THREADS overrides)");
    app.add_option("--seed", seed, "seed for Monte Carlo cross-checks");

    auto* run = app.add_subcommand("run", "execute a scenario config");
    run->add_option("config", config_path, "config file")->required();

    auto* check = app.add_subcommand("check", "validate a config and echo its unit conversions");
    check->add_option("config", config_path, "config file")->required();
    check->add_flag("--doubling", doubling, "also probe convergence (dt/2, grid x2, cutoff x1.5)");
    check->add_option("--tol", tol, "relative-change threshold for the doubling report");

    auto* fit = app.add_subcommand("fit", "cross sections and order fits from a yields table");
    fit->add_option("yields", yields_path, "yields table")->required();

    auto* volume = app.add_subcommand("volume", "focal-volume integral of a sampled S(F) table");
    volume->add_option("signal", signal_path, "two-column table: fluence_au signal")->required();
    volume->add_option("--w0", w0, "beam waist (bohr)")->required();
    volume->add_option("--z0", z0, "Rayleigh length (bohr)")->required();
    volume->add_option("--n-phot", n_phot, "photons per pulse")->required();
    auto* zmin_opt = volume->add_option("--z-min", z_min, "acceptance start (bohr)");
    auto* zmax_opt = volume->add_option("--z-max", z_max, "acceptance end (bohr)");
    zmin_opt->needs(zmax_opt);
    zmax_opt->needs(zmin_opt);
    volume->add_option("--n-z", n_z, "axial quadrature nodes");
    volume->add_option("--n-u", n_u, "radial quadrature nodes");

    for (auto* sub : {run, check, fit, volume}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (threads > 0) tdcis::set_thread_budget(threads);

        if (run->parsed()) {
            tdcis::RunConfig cfg = tdcis::load_config(config_path);
            tdcis::RunOptions opt;
            opt.output_dir = output_dir;
            opt.seed = seed;
            const std::string dir = output_dir.empty() ? cfg.output_dir : output_dir;
            for (const auto& f : tdcis::run_scenario(cfg, opt))
                std::cout << dir << "/" << f << "\n";
        } else if (check->parsed()) {
            tdcis::RunConfig cfg = tdcis::load_config(config_path);
            tdcis::validate_config(cfg);
            std::cout << "ok " << tdcis::to_string(cfg.scenario) << " " << config_path << "\n";
            for (const auto& u : cfg.unit_log)
                std::cout << u.key << " = " << tdcis::format_num(u.given) << " " << u.unit
                          << " -> " << tdcis::format_num(u.au) << " au\n";
            if (doubling) std::cout << tdcis::doubling_check(cfg, tol).str();
        } else if (fit->parsed()) {
            std::cout << tdcis::fit_report_text(yields_path);
        } else if (volume->parsed()) {
            tdcis::BeamProfile beam = zmin_opt->count()
                                          ? tdcis::make_beam(w0, z0, n_phot, z_min, z_max)
                                          : tdcis::make_beam(w0, z0, n_phot);
            std::cout << tdcis::format_num(tdcis::volume_signal_from_file(signal_path, beam, n_z,
                                                                          n_u))
                      << "\n";
        }
    } catch (const tdcis::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tdcis::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
