#pragma once

#include "tdcis/beam.hpp"
#include "tdcis/config.hpp"

#include <string>
#include <vector>

namespace tdcis {

struct RunOptions {
    std::string output_dir; // overrides the config value when set
    unsigned seed = 1;      // Monte Carlo cross-checks only
};

// Executes the configured scenario.  All results are assembled in memory
// first and written in one pass at the end, so a failing run leaves no
// partial files.  Returns the file names written (manifest.txt included).
// Throws ConfigError / NumericalError; the CLI maps them to exit codes.
std::vector<std::string> run_scenario(const RunConfig& cfg, const RunOptions& opt = {});

// convergence probe: the scenario's headline observable re-computed with dt
// halved, the radial grid doubled and the basis cutoff raised 1.5x, one axis
// at a time
struct DoublingAxis {
    std::string name;
    double value = 0;
    double rel_delta = 0;
    bool flagged = false;
};

struct DoublingReport {
    std::string observable;
    double base = 0;
    double tol = 0;
    std::vector<DoublingAxis> axes;

    bool converged() const;
    std::string str() const;
};

DoublingReport doubling_check(const RunConfig& cfg, double tol = 1e-3);

// the scalar the doubling check watches; propagate: final ground population,
// pes: total electron yield, siegert-scan: width at the last scan point
double headline_observable(const RunConfig& cfg);

// `fit` verb: cross sections and power-law order fits from a yields table
std::string fit_report_text(const std::string& yields_path);

// `volume` verb: focal-volume integral of a sampled signal table (columns
// fluence_au signal)
double volume_signal_from_file(const std::string& signal_path, const BeamProfile& beam,
                               int n_z = 128, int n_u = 64);

} // namespace tdcis
