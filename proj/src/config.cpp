#include "tdcis/config.hpp"

#include "tdcis/constants.hpp"
#include "tdcis/errors.hpp"
#include "tdcis/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <type_traits>

namespace tdcis {

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::Propagate: return "propagate";
        case Scenario::Pes: return "pes";
        case Scenario::SiegertScan: return "siegert-scan";
        case Scenario::IntensityScan: return "intensity-scan";
        case Scenario::Analyze: return "analyze";
        case Scenario::BeamVolume: return "beam-volume";
    }
    return "?";
}

PulseParams PulseConfig::params() const {
    PulseParams p;
    p.f0 = std::sqrt(intensity);
    p.omega = omega;
    p.fwhm = fwhm;
    p.cep = cep;
    p.t_center = t_center;
    return p;
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

double parse_number(const std::string& tok, const std::string& where) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    require_config(pos == tok.size(), where + ": not a number: '" + tok + "'");
    return v;
}

enum class Dim { Energy, Time, Length, Intensity, Field, Angle };

double to_au(Dim d, double v, const std::string& unit, const std::string& where) {
    switch (d) {
        case Dim::Energy:
            if (unit == "eV") return units::ev_to_au(v);
            if (unit == "hartree" || unit == "au") return v;
            throw ConfigError(where + ": unit must be eV, hartree or au");
        case Dim::Time:
            if (unit == "fs") return units::fs_to_au(v);
            if (unit == "as") return units::as_to_au(v);
            if (unit == "au") return v;
            throw ConfigError(where + ": unit must be fs, as or au");
        case Dim::Length:
            if (unit == "nm") return units::nm_to_au(v);
            if (unit == "bohr" || unit == "au") return v;
            throw ConfigError(where + ": unit must be bohr, nm or au");
        case Dim::Intensity:
            if (unit == "W/cm2") return units::wcm2_to_au(v);
            if (unit == "au") return v;
            throw ConfigError(where + ": unit must be W/cm2 or au");
        case Dim::Field:
            if (unit == "au") return v;
            throw ConfigError(where + ": unit must be au");
        case Dim::Angle:
            if (unit == "rad") return v;
            throw ConfigError(where + ": unit must be rad");
    }
    throw ConfigError(where + ": unhandled dimension");
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Reader {
    std::map<std::string, Entry> entries;
    std::string name;
    RunConfig* cfg = nullptr;

    std::string where(const std::string& key, const Entry& e) const {
        return name + ":" + std::to_string(e.line) + ": " + key;
    }

    Entry* find(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    // dimensioned value: "<number> <unit>", converted and logged
    bool number(const std::string& key, Dim d, double& out) {
        Entry* e = find(key);
        if (!e) return false;
        auto tok = split_ws(e->value);
        require_config(tok.size() == 2, where(key, *e) + ": expected '<value> <unit>'");
        double given = parse_number(tok[0], where(key, *e));
        out = to_au(d, given, tok[1], where(key, *e));
        cfg->unit_log.push_back({key, given, tok[1], out});
        return true;
    }

    // dimensionless value: a single bare number
    bool bare(const std::string& key, double& out) {
        Entry* e = find(key);
        if (!e) return false;
        auto tok = split_ws(e->value);
        require_config(tok.size() == 1, where(key, *e) + ": expected a single number");
        out = parse_number(tok[0], where(key, *e));
        return true;
    }

    template <class Int>
    bool integer(const std::string& key, Int& out) {
        Entry* e = find(key);
        if (!e) return false;
        auto tok = split_ws(e->value);
        require_config(tok.size() == 1, where(key, *e) + ": expected a single integer");
        double v = parse_number(tok[0], where(key, *e));
        require_config(v == std::floor(v) && std::abs(v) < 1e15,
                       where(key, *e) + ": expected an integer");
        out = static_cast<Int>(v);
        return true;
    }

    bool toggle(const std::string& key, bool& out) {
        Entry* e = find(key);
        if (!e) return false;
        const std::string& v = e->value;
        if (v == "on" || v == "true" || v == "yes") out = true;
        else if (v == "off" || v == "false" || v == "no") out = false;
        else throw ConfigError(where(key, *e) + ": expected on/off");
        return true;
    }

    bool word(const std::string& key, const std::vector<std::string>& allowed, std::string& out) {
        Entry* e = find(key);
        if (!e) return false;
        for (const auto& a : allowed)
            if (e->value == a) {
                out = e->value;
                return true;
            }
        std::string opts;
        for (const auto& a : allowed) opts += (opts.empty() ? "" : "|") + a;
        throw ConfigError(where(key, *e) + ": expected one of " + opts);
    }

    bool path(const std::string& key, std::string& out) {
        Entry* e = find(key);
        if (!e) return false;
        require_config(split_ws(e->value).size() == 1, where(key, *e) + ": expected a path");
        out = e->value;
        return true;
    }

    bool int_list(const std::string& key, std::vector<int>& out) {
        Entry* e = find(key);
        if (!e) return false;
        out.clear();
        for (const auto& t : split_ws(e->value)) {
            double v = parse_number(t, where(key, *e));
            require_config(v == std::floor(v), where(key, *e) + ": expected integers");
            out.push_back(static_cast<int>(v));
        }
        return true;
    }
};

const std::vector<std::string> kSections = {"model",   "grid", "pulse",    "propagation",
                                            "splitting", "pes",  "siegert", "scan",
                                            "analysis", "beam", "output"};

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name) {
    RunConfig cfg;
    cfg.source_text = text;
    cfg.source_path = name;

    Reader rd;
    rd.name = name;
    rd.cfg = &cfg;

    std::istringstream in(text);
    std::string line, section;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        const std::string at = name + ":" + std::to_string(ln);
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            require_config(line.back() == ']', at + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            bool known =
                std::find(kSections.begin(), kSections.end(), section) != kSections.end();
            require_config(known, at + ": unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        require_config(eq != std::string::npos, at + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        require_config(!key.empty(), at + ": empty key");
        require_config(!value.empty(), at + ": empty value for '" + key + "'");
        std::string full = section.empty() ? key : section + "." + key;
        require_config(!rd.entries.count(full), at + ": duplicate key '" + full + "'");
        rd.entries[full] = Entry{value, ln, false};
    }

    std::string scen;
    rd.word("scenario",
            {"propagate", "pes", "siegert-scan", "intensity-scan", "analyze", "beam-volume"},
            scen);
    require_config(!scen.empty(), name + ": missing top-level 'scenario' key");
    if (scen == "propagate") cfg.scenario = Scenario::Propagate;
    else if (scen == "pes") cfg.scenario = Scenario::Pes;
    else if (scen == "siegert-scan") cfg.scenario = Scenario::SiegertScan;
    else if (scen == "intensity-scan") cfg.scenario = Scenario::IntensityScan;
    else if (scen == "analyze") cfg.scenario = Scenario::Analyze;
    else cfg.scenario = Scenario::BeamVolume;

    rd.word("model.potential", {"soft-core", "coulomb", "hfs"}, cfg.model.potential);
    rd.bare("model.z", cfg.model.z);
    rd.bare("model.depth", cfg.model.depth);
    rd.number("model.softness", Dim::Length, cfg.model.softness);
    rd.integer("model.n_electrons", cfg.model.n_electrons);
    rd.integer("model.l_max", cfg.model.l_max);
    rd.number("model.e_cut", Dim::Energy, cfg.model.e_cut);
    rd.int_list("model.active", cfg.model.active);

    std::string mapping = "uniform";
    rd.word("grid.mapping", {"uniform", "sqrt"}, mapping);
    cfg.grid.mapping = mapping == "sqrt" ? GridMapping::SqrtMapped : GridMapping::Uniform;
    rd.number("grid.r_max", Dim::Length, cfg.grid.r_max);
    rd.integer("grid.n_points", cfg.grid.n_points);

    rd.number("pulse.omega", Dim::Energy, cfg.pulse.omega);
    rd.number("pulse.intensity", Dim::Intensity, cfg.pulse.intensity);
    rd.number("pulse.fwhm", Dim::Time, cfg.pulse.fwhm);
    rd.number("pulse.cep", Dim::Angle, cfg.pulse.cep);
    rd.number("pulse.t_center", Dim::Time, cfg.pulse.t_center);

    std::string method = "lanczos", gauge = "velocity";
    rd.word("propagation.method", {"lanczos", "rk4"}, method);
    rd.word("propagation.gauge", {"velocity", "length"}, gauge);
    cfg.propagation.method = method == "rk4" ? Integrator::Rk4 : Integrator::Lanczos;
    cfg.propagation.gauge = gauge == "length" ? Gauge::Length : Gauge::Velocity;
    rd.number("propagation.dt", Dim::Time, cfg.propagation.dt);
    rd.integer("propagation.krylov", cfg.propagation.krylov);
    rd.number("propagation.sample", Dim::Time, cfg.propagation.sample);

    rd.number("splitting.radius", Dim::Length, cfg.splitting.radius);
    rd.number("splitting.width", Dim::Length, cfg.splitting.width);
    rd.number("splitting.cadence", Dim::Time, cfg.splitting.cadence);
    rd.number("splitting.drain", Dim::Time, cfg.splitting.drain);

    rd.number("pes.e_min", Dim::Energy, cfg.pes.e_min);
    rd.number("pes.e_max", Dim::Energy, cfg.pes.e_max);
    rd.integer("pes.n_energy", cfg.pes.n_energy);
    rd.integer("pes.n_theta", cfg.pes.n_theta);
    rd.toggle("pes.channel_mixing", cfg.pes.channel_mixing);

    rd.word("siegert.scan", {"field", "eta"}, cfg.siegert.scan);
    rd.word("siegert.track", {"diabatic", "adiabatic"}, cfg.siegert.track);
    rd.number("siegert.e_start", Dim::Energy, cfg.siegert.e_start);
    rd.number("siegert.r_cap", Dim::Length, cfg.siegert.r_cap);
    rd.number("siegert.eta", Dim::Field, cfg.siegert.eta);
    rd.number("siegert.f_min", Dim::Field, cfg.siegert.f_min);
    rd.number("siegert.f_max", Dim::Field, cfg.siegert.f_max);
    rd.integer("siegert.n_fields", cfg.siegert.n_fields);
    rd.number("siegert.field", Dim::Field, cfg.siegert.field);
    rd.number("siegert.eta_min", Dim::Field, cfg.siegert.eta_min);
    rd.number("siegert.eta_max", Dim::Field, cfg.siegert.eta_max);
    rd.integer("siegert.n_eta", cfg.siegert.n_eta);

    rd.number("scan.i_min", Dim::Intensity, cfg.scan.i_min);
    rd.number("scan.i_max", Dim::Intensity, cfg.scan.i_max);
    rd.integer("scan.n_points", cfg.scan.n_points);
    rd.number("scan.window", Dim::Energy, cfg.scan.window);

    rd.path("analysis.yields", cfg.analysis.yields);

    rd.number("beam.w0", Dim::Length, cfg.beam.w0);
    rd.number("beam.z0", Dim::Length, cfg.beam.z0);
    rd.bare("beam.n_phot", cfg.beam.n_phot);
    bool zmin_set = rd.number("beam.z_min", Dim::Length, cfg.beam.z_min);
    bool zmax_set = rd.number("beam.z_max", Dim::Length, cfg.beam.z_max);
    require_config(zmin_set == zmax_set, name + ": beam.z_min and beam.z_max go together");
    cfg.beam.z_range_set = zmin_set;
    rd.path("beam.signal", cfg.beam.signal);
    rd.integer("beam.n_z", cfg.beam.n_z);
    rd.integer("beam.n_u", cfg.beam.n_u);
    rd.integer("beam.mc_samples", cfg.beam.mc_samples);

    rd.path("output.dir", cfg.output_dir);

    std::string unknown;
    for (const auto& [key, e] : rd.entries)
        if (!e.used)
            unknown += (unknown.empty() ? "" : "\n") + name + ":" + std::to_string(e.line) +
                       ": unknown key '" + key + "'";
    require_config(unknown.empty(), unknown);

    return cfg;
}

RunConfig load_config(const std::string& path) {
    return parse_config_text(read_text_file(path), path);
}

void validate_config(const RunConfig& cfg) {
    const Scenario s = cfg.scenario;
    const bool model_based = s == Scenario::Propagate || s == Scenario::Pes ||
                             s == Scenario::IntensityScan || s == Scenario::SiegertScan;
    const bool cis_based =
        s == Scenario::Propagate || s == Scenario::Pes || s == Scenario::IntensityScan;
    const bool split_based = s == Scenario::Pes || s == Scenario::IntensityScan;

    if (model_based) {
        if (cfg.model.potential == "soft-core") {
            require_config(cfg.model.depth > 0, "model.depth must be positive for soft-core");
            require_config(cfg.model.softness > 0, "model.softness must be positive");
        } else {
            require_config(cfg.model.z > 0, "model.z must be positive");
        }
        require_config(cfg.model.l_max >= 0 && cfg.model.l_max <= 80,
                       "model.l_max must lie in [0, 80]");
        require_config(cfg.grid.r_max > 0, "grid.r_max must be set and positive");
        require_config(cfg.grid.n_points >= 16, "grid.n_points must be at least 16");
    }
    if (cis_based) {
        require_config(cfg.model.n_electrons >= 2 && cfg.model.n_electrons % 2 == 0,
                       "model.n_electrons must be a positive even count (closed shell)");
        require_config(cfg.pulse.omega > 0, "pulse.omega must be set and positive");
        require_config(cfg.pulse.fwhm > 0, "pulse.fwhm must be set and positive");
        require_config(cfg.pulse.intensity >= 0, "pulse.intensity must be non-negative");
        require_config(cfg.propagation.dt > 0, "propagation.dt must be positive");
        require_config(cfg.propagation.krylov >= 2, "propagation.krylov must be at least 2");
        require_config(cfg.propagation.sample > 0, "propagation.sample must be positive");
    }
    if (split_based) {
        require_config(cfg.propagation.gauge == Gauge::Velocity,
                       "photoelectron runs need propagation.gauge = velocity");
        require_config(cfg.splitting.radius > 0, "splitting.radius must be set");
        require_config(cfg.splitting.width > 0, "splitting.width must be positive");
        // same margins the splitter itself enforces, caught here so `check`
        // rejects the geometry without running anything
        require_config(cfg.splitting.radius >= 20.0 * cfg.splitting.width,
                       "splitting.radius must be at least 20 widths (mask tail at the origin)");
        require_config(cfg.splitting.radius <= cfg.grid.r_max - 5.0 * cfg.splitting.width,
                       "splitting.radius must sit at least 5 widths inside the box");
        require_config(cfg.splitting.cadence > 0, "splitting.cadence must be set");
        require_config(cfg.splitting.drain >= 0, "splitting.drain must be non-negative");
        require_config(cfg.pes.e_min > 0 && cfg.pes.e_max > cfg.pes.e_min,
                       "pes.e_min/e_max must be an increasing positive range");
        require_config(cfg.pes.n_energy >= 2, "pes.n_energy must be at least 2");
        require_config(cfg.pes.n_theta >= 3 && cfg.pes.n_theta % 2 == 1,
                       "pes.n_theta must be odd and at least 3");
    }
    if (s == Scenario::IntensityScan) {
        require_config(cfg.scan.i_min > 0 && cfg.scan.i_max > cfg.scan.i_min,
                       "scan.i_min/i_max must be an increasing positive range");
        require_config(cfg.scan.n_points >= 2, "scan.n_points must be at least 2");
        require_config(cfg.scan.window >= 0, "scan.window must be non-negative");
    }
    if (s == Scenario::SiegertScan) {
        require_config(cfg.siegert.e_start != 0, "siegert.e_start must be set");
        require_config(cfg.siegert.r_cap > 0 && cfg.siegert.r_cap < cfg.grid.r_max,
                       "siegert.r_cap must lie inside the box");
        require_config(cfg.model.e_cut > 0,
                       "model.e_cut must be positive (the scan needs continuum states)");
        if (cfg.siegert.scan == "field") {
            require_config(cfg.siegert.eta > 0, "siegert.eta must be positive");
            require_config(cfg.siegert.n_fields >= 1, "siegert.n_fields must be at least 1");
            require_config(cfg.siegert.f_min >= 0 && cfg.siegert.f_max >= cfg.siegert.f_min,
                           "siegert.f_min/f_max must be a non-decreasing range");
        } else {
            require_config(cfg.siegert.n_eta >= 2, "siegert.n_eta must be at least 2");
            require_config(cfg.siegert.eta_min > 0 && cfg.siegert.eta_max > cfg.siegert.eta_min,
                           "siegert.eta_min/eta_max must be an increasing positive range");
            require_config(cfg.siegert.field >= 0, "siegert.field must be non-negative");
        }
    }
    if (s == Scenario::Analyze)
        require_config(!cfg.analysis.yields.empty(),
                       "analysis.yields must point at a yields table");
    if (s == Scenario::BeamVolume) {
        require_config(cfg.beam.w0 > 0 && cfg.beam.z0 > 0 && cfg.beam.n_phot > 0,
                       "beam.w0, beam.z0 and beam.n_phot must be positive");
        require_config(!cfg.beam.signal.empty(), "beam.signal must point at a sampled table");
        if (cfg.beam.z_range_set)
            require_config(cfg.beam.z_max > cfg.beam.z_min, "beam.z_max must exceed beam.z_min");
        require_config(cfg.beam.n_z >= 8 && cfg.beam.n_u >= 8,
                       "beam.n_z and beam.n_u must be at least 8");
        require_config(cfg.beam.mc_samples >= 0, "beam.mc_samples must be non-negative");
    }
    require_config(!cfg.output_dir.empty(), "output.dir must not be empty");
}

} // namespace tdcis
