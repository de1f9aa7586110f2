#pragma once

#include "tdcis/cis.hpp"
#include "tdcis/grid.hpp"
#include "tdcis/propagator.hpp"
#include "tdcis/pulse.hpp"

#include <string>
#include <vector>

namespace tdcis {

enum class Scenario { Propagate, Pes, SiegertScan, IntensityScan, Analyze, BeamVolume };

std::string to_string(Scenario s);

struct ModelConfig {
    std::string potential = "soft-core"; // soft-core | coulomb | hfs
    double z = 0;                        // nuclear charge (coulomb, hfs)
    double depth = 0;                    // soft-core well depth
    double softness = 1.0;               // soft-core smoothing length
    int n_electrons = 2;
    int l_max = 1;
    double e_cut = 2.0;
    std::vector<int> active; // occupied-shell indices hosting holes; empty = all
};

struct GridConfig {
    GridMapping mapping = GridMapping::Uniform;
    double r_max = 0;
    int n_points = 0;
};

struct PulseConfig {
    double omega = 0;     // carrier, a.u.
    double intensity = 0; // peak intensity, a.u.
    double fwhm = 0;      // intensity-profile FWHM, a.u.
    double cep = 0;
    double t_center = 0;

    PulseParams params() const; // f0 = sqrt(intensity)
};

struct PropagationConfig {
    Integrator method = Integrator::Lanczos;
    Gauge gauge = Gauge::Velocity;
    double dt = 0.05;
    int krylov = 12;
    double sample = 1.0; // cadence of the population trace
};

struct SplittingConfig {
    double radius = 0;
    double width = 2.0;
    double cadence = 0;
    double drain = 0; // field-free tail appended after the pulse
};

struct PesConfig {
    double e_min = 0.01, e_max = 2.0;
    int n_energy = 200;
    int n_theta = 61;
    bool channel_mixing = true;
};

struct SiegertConfig {
    std::string scan = "field";     // field | eta
    std::string track = "diabatic"; // diabatic | adiabatic
    double e_start = 0;             // real seed energy of the tracked root
    double r_cap = 0;
    double eta = 0;                   // CAP strength (field scan)
    double f_min = 0, f_max = 0;      // field scan range
    int n_fields = 0;
    double field = 0;                 // fixed field (eta scan)
    double eta_min = 0, eta_max = 0;  // eta scan range, log spaced
    int n_eta = 0;
};

struct IntensityScanConfig {
    double i_min = 0, i_max = 0; // a.u., log-spaced scan
    int n_points = 0;
    // half-width of the yield windows around the one- and two-photon lines;
    // 0 picks the pulse bandwidth
    double window = 0;
};

struct AnalysisConfig {
    std::string yields; // path to an ionization-yields table
};

struct BeamConfig {
    double w0 = 0, z0 = 0;
    double n_phot = 0;
    double z_min = 0, z_max = 0;
    bool z_range_set = false;
    std::string signal; // path to a sampled single-atom S(F) table
    int n_z = 128, n_u = 64;
    long mc_samples = 0; // > 0 adds a Monte Carlo cross-check (CLI seed)
};

// one converted quantity, kept for the manifest
struct UnitLogEntry {
    std::string key; // section.name
    double given = 0;
    std::string unit;
    double au = 0;
};

struct RunConfig {
    Scenario scenario = Scenario::Propagate;
    ModelConfig model;
    GridConfig grid;
    PulseConfig pulse;
    PropagationConfig propagation;
    SplittingConfig splitting;
    PesConfig pes;
    SiegertConfig siegert;
    IntensityScanConfig scan;
    AnalysisConfig analysis;
    BeamConfig beam;
    std::string output_dir = "tdcis-out";

    std::string source_path;            // file the config came from
    std::string source_text;            // raw text, echoed into manifests
    std::vector<UnitLogEntry> unit_log; // every unit conversion performed
};

// Line-oriented `key = value [unit]` format with [section] headers and '#'
// comments.  Dimensioned values must carry a unit token (eV/hartree/au,
// fs/as/au, bohr/nm/au, W/cm2/au, rad); dimensionless ones must not.
// Unknown sections or keys are rejected.  Parsing converts everything to
// atomic units and records each conversion in unit_log.
RunConfig parse_config_text(const std::string& text, const std::string& name = "<string>");
RunConfig load_config(const std::string& path);

// cross-field consistency beyond single-key checks; throws ConfigError
void validate_config(const RunConfig& cfg);

} // namespace tdcis
