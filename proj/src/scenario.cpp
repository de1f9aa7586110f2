#include "tdcis/scenario.hpp"

#include "tdcis/analysis.hpp"
#include "tdcis/cis.hpp"
#include "tdcis/constants.hpp"
#include "tdcis/errors.hpp"
#include "tdcis/io.hpp"
#include "tdcis/numerics.hpp"
#include "tdcis/pes.hpp"
#include "tdcis/potential.hpp"
#include "tdcis/siegert.hpp"
#include "tdcis/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

namespace tdcis {

namespace {

struct Artifact {
    std::string name;
    std::string text;
};
using Artifacts = std::vector<Artifact>;

std::vector<double> model_potential(const ModelConfig& m, const RadialGrid& grid) {
    if (m.potential == "coulomb") return coulomb_potential(grid, m.z);
    if (m.potential == "soft-core") return soft_core_potential(grid, m.depth, m.softness);
    return hartree_fock_slater(grid, static_cast<int>(m.z), m.n_electrons).v;
}

struct Engine {
    RadialGrid grid;
    std::vector<double> v;
    CisBasis basis;
    CisMatrices mats;
};

Engine build_engine(const RunConfig& cfg) {
    Engine e;
    e.grid = build_grid(cfg.grid.mapping, cfg.grid.r_max, cfg.grid.n_points);
    e.v = model_potential(cfg.model, e.grid);
    e.basis = build_cis_basis(e.grid, e.v, cfg.model.n_electrons, cfg.model.l_max,
                              cfg.model.e_cut, cfg.model.active);
    e.mats = build_cis_matrices(e.basis, cfg.propagation.gauge);
    return e;
}

PropagatorOptions prop_options(const RunConfig& cfg) {
    PropagatorOptions o;
    o.method = cfg.propagation.method;
    o.dt = cfg.propagation.dt;
    o.krylov_dim = cfg.propagation.krylov;
    return o;
}

// energy of the least-bound active hole; the one-photon line sits at
// omega + eps0
double least_bound_hole(const CisBasis& basis) {
    require_numeric(!basis.channels.empty(), "no ionization channels in the basis");
    double e = basis.channels.front().energy;
    for (const auto& ch : basis.channels) e = std::max(e, ch.energy);
    return e;
}

std::vector<std::string> run_comments(const RunConfig& cfg) {
    std::vector<std::string> c;
    c.push_back(std::string("tdcis ") + kVersion + " " + to_string(cfg.scenario));
    const Scenario s = cfg.scenario;
    const bool model_based = s == Scenario::Propagate || s == Scenario::Pes ||
                             s == Scenario::IntensityScan || s == Scenario::SiegertScan;
    const bool cis_based =
        s == Scenario::Propagate || s == Scenario::Pes || s == Scenario::IntensityScan;
    const bool split_based = s == Scenario::Pes || s == Scenario::IntensityScan;
    if (model_based) {
        std::string m = "model potential=" + cfg.model.potential;
        if (cfg.model.potential == "soft-core")
            m += " depth=" + format_num(cfg.model.depth) +
                 " softness=" + format_num(cfg.model.softness);
        else
            m += " z=" + format_num(cfg.model.z);
        m += " n_electrons=" + std::to_string(cfg.model.n_electrons) +
             " l_max=" + std::to_string(cfg.model.l_max) + " e_cut=" + format_num(cfg.model.e_cut);
        c.push_back(m);
        c.push_back("grid mapping=" +
                    std::string(cfg.grid.mapping == GridMapping::SqrtMapped ? "sqrt" : "uniform") +
                    " r_max=" + format_num(cfg.grid.r_max) +
                    " n_points=" + std::to_string(cfg.grid.n_points));
    }
    if (cis_based) {
        c.push_back("pulse omega_au=" + format_num(cfg.pulse.omega) +
                    " intensity_au=" + format_num(cfg.pulse.intensity) +
                    " fwhm_au=" + format_num(cfg.pulse.fwhm) +
                    " cep_rad=" + format_num(cfg.pulse.cep) +
                    " t_center_au=" + format_num(cfg.pulse.t_center));
        c.push_back("propagation method=" +
                    std::string(cfg.propagation.method == Integrator::Rk4 ? "rk4" : "lanczos") +
                    " gauge=" +
                    std::string(cfg.propagation.gauge == Gauge::Length ? "length" : "velocity") +
                    " dt=" + format_num(cfg.propagation.dt) +
                    " krylov=" + std::to_string(cfg.propagation.krylov));
    }
    if (split_based)
        c.push_back("splitting radius=" + format_num(cfg.splitting.radius) +
                    " width=" + format_num(cfg.splitting.width) +
                    " cadence=" + format_num(cfg.splitting.cadence) +
                    " drain=" + format_num(cfg.splitting.drain));
    return c;
}

// ---- propagate ----

double propagate_core(const RunConfig& cfg, Table* trace) {
    Engine e = build_engine(cfg);
    Pulse pulse(cfg.pulse.params());
    std::function<double(double)> coef;
    if (cfg.propagation.gauge == Gauge::Velocity)
        coef = [&pulse](double t) { return pulse.vector_potential(t); };
    else
        coef = [&pulse](double t) { return pulse.field(t); };
    CisHamiltonian h(e.mats, coef);

    Eigen::VectorXcd alpha = Eigen::VectorXcd::Zero(e.basis.dim());
    alpha[0] = 1.0;

    const double t0 = pulse.t_start(), t1 = pulse.t_end();
    std::vector<double> times;
    for (double t = t0; t < t1 - 1e-9; t += cfg.propagation.sample) times.push_back(t);
    times.push_back(t1);

    if (trace) {
        trace->columns = {"t_au", "norm", "ground"};
        for (int c = 0; c < e.basis.n_channels(); ++c)
            trace->columns.push_back("p_ch" + std::to_string(c));
    }
    propagate(h, alpha, t0, t1, prop_options(cfg), times,
              [&](double t, Eigen::VectorXcd& a) {
                  if (!trace) return;
                  std::vector<double> row{t, cis_norm(a), std::norm(a[0])};
                  for (double p : channel_populations(e.basis, a)) row.push_back(p);
                  trace->rows.push_back(std::move(row));
              });
    return std::norm(alpha[0]);
}

Artifacts build_propagate(const RunConfig& cfg, Manifest& man) {
    Table trace;
    double ground = propagate_core(cfg, &trace);
    trace.comments = run_comments(cfg);
    man.section("result");
    man.kv("final_ground_population", ground);
    man.kv("final_norm", trace.rows.empty() ? 0.0 : trace.rows.back()[1]);
    return {{"populations.dat", trace.str()}};
}

// ---- pes ----

struct PesOutcome {
    PesSpectrum spec;
    double removed_norm2 = 0;
    double bound_norm2 = 0;
    double eps0 = 0;
    std::vector<Channel> channels;
};

PesOutcome pes_core(const RunConfig& cfg) {
    Engine e = build_engine(cfg);
    Pulse pulse(cfg.pulse.params());
    Splitter splitter(e.basis, cfg.splitting.radius, cfg.splitting.width);
    SplitRun run = propagate_with_splitting(e.basis, e.mats, pulse, splitter,
                                            cfg.splitting.cadence, cfg.splitting.drain,
                                            prop_options(cfg));
    PesParams pp;
    pp.e_min = cfg.pes.e_min;
    pp.e_max = cfg.pes.e_max;
    pp.n_energy = cfg.pes.n_energy;
    pp.n_theta = cfg.pes.n_theta;
    pp.channel_mixing = cfg.pes.channel_mixing;

    PesOutcome out{volkov_synthesis(e.basis, e.mats, pulse, run.events, run.t_final, pp), 0, 0,
                   least_bound_hole(e.basis), e.basis.channels};
    for (const auto& ev : run.events) out.removed_norm2 += ev.removed_norm2;
    out.bound_norm2 = run.alpha.squaredNorm();
    return out;
}

Artifacts build_pes(const RunConfig& cfg, Manifest& man) {
    PesOutcome out = pes_core(cfg);
    const PesSpectrum& spec = out.spec;
    const double to_ev = units::hartree_ev;
    const double eb_ev = -units::au_to_ev(out.eps0);

    auto comments = run_comments(cfg);
    comments.push_back("binding_ev=" + format_num(eb_ev));
    comments.push_back("one_photon_line_ev=" +
                       format_num(units::au_to_ev(cfg.pulse.omega + out.eps0)));
    comments.push_back("energies in eV; probabilities per eV (and per sr)");

    Table dpde;
    dpde.comments = comments;
    dpde.columns = {"e_ev", "dpde_per_ev"};
    for (size_t i = 0; i < spec.energy.size(); ++i)
        dpde.rows.push_back({spec.energy[i] * to_ev, spec.dpde[i] / to_ev});

    Table angle;
    angle.comments = comments;
    angle.columns = {"e_ev", "theta_rad", "d2p_per_ev_sr"};
    for (size_t i = 0; i < spec.energy.size(); ++i)
        for (size_t j = 0; j < spec.theta.size(); ++j)
            angle.rows.push_back(
                {spec.energy[i] * to_ev, spec.theta[j], spec.total(i, j) / to_ev});

    Table yields;
    yields.comments = comments;
    yields.columns = {"channel", "hole_l", "hole_m", "hole_energy_ev", "yield"};
    auto by_ch = spec.yield_by_channel();
    for (size_t c = 0; c < by_ch.size(); ++c) {
        const Channel& ch = out.channels[c];
        yields.rows.push_back({double(c), double(ch.l), double(ch.m),
                               units::au_to_ev(ch.energy), by_ch[c]});
    }

    man.section("result");
    man.kv("total_yield", spec.yield_total());
    man.kv("removed_norm2", out.removed_norm2);
    man.kv("bound_remainder_norm2", out.bound_norm2);
    man.kv("binding_ev", eb_ev);
    man.kv("one_photon_line_ev", units::au_to_ev(cfg.pulse.omega + out.eps0));

    return {{"spectrum.dat", dpde.str()},
            {"spectrum_angle.dat", angle.str()},
            {"yields.dat", yields.str()}};
}

// ---- intensity scan ----

double window_integral(const std::vector<double>& e, const std::vector<double>& f, double center,
                       double halfwidth) {
    const double lo = center - halfwidth, hi = center + halfwidth;
    double acc = 0;
    for (size_t i = 0; i + 1 < e.size(); ++i) {
        double a = std::max(e[i], lo), b = std::min(e[i + 1], hi);
        if (b <= a) continue;
        double h = e[i + 1] - e[i];
        double fa = f[i] + (f[i + 1] - f[i]) * (a - e[i]) / h;
        double fb = f[i] + (f[i + 1] - f[i]) * (b - e[i]) / h;
        acc += 0.5 * (fa + fb) * (b - a);
    }
    return acc;
}

Artifacts build_intensity_scan(const RunConfig& cfg, Manifest& man) {
    Engine e = build_engine(cfg);
    Splitter splitter(e.basis, cfg.splitting.radius, cfg.splitting.width);
    const double eps0 = least_bound_hole(e.basis);
    const double omega = cfg.pulse.omega;
    // yield windows around the one- and two-photon lines; default half-width
    // is the pulse bandwidth
    const double halfwidth =
        cfg.scan.window > 0 ? cfg.scan.window : units::gaussian_tbp / cfg.pulse.fwhm;
    const double e1 = omega + eps0, e2 = 2 * omega + eps0;
    require_config(e1 - halfwidth > cfg.pes.e_min && e2 + halfwidth < cfg.pes.e_max,
                   "pes.e_min/e_max do not bracket the one- and two-photon windows");

    const int np = cfg.scan.n_points;
    std::vector<double> ivals(np);
    for (int k = 0; k < np; ++k)
        ivals[k] = cfg.scan.i_min *
                   std::pow(cfg.scan.i_max / cfg.scan.i_min, np == 1 ? 0.0 : k / (np - 1.0));

    PesParams pp;
    pp.e_min = cfg.pes.e_min;
    pp.e_max = cfg.pes.e_max;
    pp.n_energy = cfg.pes.n_energy;
    pp.n_theta = cfg.pes.n_theta;
    pp.channel_mixing = cfg.pes.channel_mixing;

    std::vector<IonizationRecord> recs(np);
    for (int k = 0; k < np; ++k) {
        PulseConfig pc = cfg.pulse;
        pc.intensity = ivals[k];
        Pulse pulse(pc.params());
        SplitRun run = propagate_with_splitting(e.basis, e.mats, pulse, splitter,
                                                cfg.splitting.cadence, cfg.splitting.drain,
                                                prop_options(cfg));
        PesSpectrum spec = volkov_synthesis(e.basis, e.mats, pulse, run.events, run.t_final, pp);
        IonizationRecord rec;
        rec.omega_ev = units::au_to_ev(omega);
        rec.intensity_wcm2 = units::au_to_wcm2(ivals[k]);
        rec.tau_fs = units::au_to_fs(cfg.pulse.fwhm);
        rec.p_n = {window_integral(spec.energy, spec.dpde, e1, halfwidth),
                   window_integral(spec.energy, spec.dpde, e2, halfwidth)};
        rec.by_channel = spec.yield_by_channel();
        recs[k] = std::move(rec);
    }

    Table yt = yields_table(recs);
    yt.comments = run_comments(cfg);
    yt.comments.push_back("window_center_ev p1=" + format_num(units::au_to_ev(e1)) +
                          " p2=" + format_num(units::au_to_ev(e2)) +
                          " halfwidth_ev=" + format_num(units::au_to_ev(halfwidth)));

    Table fits;
    fits.comments = yt.comments;
    fits.columns = {"order", "slope", "stderr_slope", "intercept"};
    man.section("result");
    if (np >= 3) {
        for (int n = 1; n <= 2; ++n) {
            OrderFit f = order_fit(recs, n);
            fits.rows.push_back({double(n), f.slope, f.stderr_slope, f.intercept});
            man.kv("slope_order" + std::to_string(n), f.slope);
        }
    }
    man.kv("window_halfwidth_au", halfwidth);

    Artifacts arts = {{"scan_yields.dat", yt.str()}};
    if (!fits.rows.empty()) arts.push_back({"fit_report.dat", fits.str()});
    return arts;
}

// ---- siegert scan ----

std::vector<ScanPoint> siegert_core(const RunConfig& cfg, bool* eta_scan) {
    RadialGrid grid = build_grid(cfg.grid.mapping, cfg.grid.r_max, cfg.grid.n_points);
    std::vector<double> v = model_potential(cfg.model, grid);
    SaeSpectralModel sae =
        build_sae_spectral(grid, v, cfg.model.l_max, cfg.model.e_cut, cfg.siegert.r_cap);
    const std::complex<double> seed{cfg.siegert.e_start, 0.0};
    if (cfg.siegert.scan == "field") {
        if (eta_scan) *eta_scan = false;
        std::vector<double> fields(cfg.siegert.n_fields);
        for (int k = 0; k < cfg.siegert.n_fields; ++k)
            fields[k] = cfg.siegert.n_fields == 1
                            ? cfg.siegert.f_min
                            : cfg.siegert.f_min + (cfg.siegert.f_max - cfg.siegert.f_min) * k /
                                                      (cfg.siegert.n_fields - 1.0);
        DressedFn dressed = [&](double f) { return sae.dressed(f, cfg.siegert.eta); };
        return cfg.siegert.track == "adiabatic" ? scan_adiabatic(dressed, fields, seed)
                                                : scan_diabatic(dressed, fields, seed);
    }
    if (eta_scan) *eta_scan = true;
    std::vector<double> etas(cfg.siegert.n_eta);
    for (int k = 0; k < cfg.siegert.n_eta; ++k)
        etas[k] = cfg.siegert.eta_min *
                  std::pow(cfg.siegert.eta_max / cfg.siegert.eta_min,
                           k / (cfg.siegert.n_eta - 1.0));
    DressedFn dressed = [&](double eta) { return sae.dressed(cfg.siegert.field, eta); };
    return scan_adiabatic(dressed, etas, seed);
}

Artifacts build_siegert(const RunConfig& cfg, Manifest& man) {
    bool eta_scan = false;
    auto pts = siegert_core(cfg, &eta_scan);
    Table t;
    t.comments = run_comments(cfg);
    t.comments.push_back(
        "siegert scan=" + cfg.siegert.scan + " track=" + cfg.siegert.track +
        " e_start=" + format_num(cfg.siegert.e_start) + " r_cap=" + format_num(cfg.siegert.r_cap) +
        (eta_scan ? " field=" + format_num(cfg.siegert.field)
                  : " eta=" + format_num(cfg.siegert.eta)));
    t.columns = {eta_scan ? "eta_au" : "field_au", "re_e_au", "im_e_au", "gamma_au", "overlap"};
    for (const auto& p : pts)
        t.rows.push_back({p.field, p.energy.real(), p.energy.imag(), width_of(p.energy),
                          p.overlap});
    man.section("result");
    man.kv("points", long(pts.size()));
    if (!pts.empty()) {
        man.kv("last_re_e_au", pts.back().energy.real());
        man.kv("last_gamma_au", width_of(pts.back().energy));
    }
    return {{"siegert_scan.dat", t.str()}};
}

// ---- analyze / fit ----

struct AnalyzeTables {
    Table sigma;
    Table fits;
};

AnalyzeTables analyze_records(const std::vector<IonizationRecord>& recs) {
    AnalyzeTables out;
    require_config(!recs.empty(), "yields table has no rows");
    const size_t n_orders = recs.front().p_n.size();
    require_config(n_orders >= 1, "yields table has no probability columns");
    out.sigma.columns = {"omega_ev",      "intensity_wcm2", "tau_fs",    "order",
                         "fluence_n_au",  "sigma_au",       "sigma_cgs", "perturbative"};
    for (const auto& rec : recs) {
        validate(rec);
        require_config(rec.p_n.size() == n_orders, "records disagree on the order count");
        PulseParams pp;
        pp.f0 = std::sqrt(units::wcm2_to_au(rec.intensity_wcm2));
        pp.omega = units::ev_to_au(rec.omega_ev);
        pp.fwhm = units::fs_to_au(rec.tau_fs);
        Pulse pulse(pp);
        for (size_t n = 1; n <= n_orders; ++n) {
            double fl = fluence(pulse, static_cast<int>(n));
            CrossSection cs = cross_section_from_yield(rec.p_n[n - 1], fl, static_cast<int>(n));
            out.sigma.rows.push_back({rec.omega_ev, rec.intensity_wcm2, rec.tau_fs, double(n),
                                      fl, cs.value_au, cs.value_cgs,
                                      cs.perturbative ? 1.0 : 0.0});
        }
    }
    out.fits.columns = {"order", "slope", "stderr_slope", "intercept"};
    if (recs.size() >= 3) {
        for (size_t n = 1; n <= n_orders; ++n) {
            OrderFit f = order_fit(recs, static_cast<int>(n));
            out.fits.rows.push_back({double(n), f.slope, f.stderr_slope, f.intercept});
        }
    }
    return out;
}

Artifacts build_analyze(const RunConfig& cfg, Manifest& man) {
    const std::string text = read_text_file(cfg.analysis.yields);
    auto recs = yields_records(parse_table(text, cfg.analysis.yields));
    AnalyzeTables tabs = analyze_records(recs);
    std::string src = "input " + cfg.analysis.yields + " " + hash_string(fnv1a(text));
    tabs.sigma.comments = {std::string("tdcis ") + kVersion + " analyze", src};
    tabs.fits.comments = tabs.sigma.comments;
    man.section("inputs");
    man.raw(src);
    man.section("result");
    man.kv("records", long(recs.size()));
    for (const auto& row : tabs.fits.rows)
        man.kv("slope_order" + format_num(row[0]), row[1]);
    Artifacts arts = {{"cross_sections.dat", tabs.sigma.str()}};
    if (!tabs.fits.rows.empty()) arts.push_back({"fit_report.dat", tabs.fits.str()});
    return arts;
}

// ---- beam volume ----

struct SignalSamples {
    std::vector<double> f, s;
};

SignalSamples read_signal(const std::string& path) {
    Table t = read_table(path);
    require_config(!t.rows.empty() && t.rows.front().size() >= 2,
                   path + ": need two columns (fluence, signal)");
    SignalSamples out;
    for (const auto& row : t.rows) {
        out.f.push_back(row[0]);
        out.s.push_back(row[1]);
    }
    return out;
}

double beam_mc_estimate(const SignalSamples& sig, const BeamProfile& beam, long samples,
                        unsigned seed) {
    Pchip interp(sig.f, sig.s);
    const double rho_max =
        6.0 * std::sqrt(waist2(beam, std::max(std::abs(beam.z_min), std::abs(beam.z_max))));
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> uz(beam.z_min, beam.z_max);
    std::uniform_real_distribution<double> ur(0.0, rho_max);
    double acc = 0;
    const double two_pi = 6.283185307179586;
    for (long i = 0; i < samples; ++i) {
        double z = uz(gen), rho = ur(gen);
        double w2 = waist2(beam, z);
        double fl = peak_fluence(beam, z) * std::exp(-rho * rho / w2);
        acc += two_pi * rho * interp(fl);
    }
    return acc / double(samples) * (beam.z_max - beam.z_min) * rho_max;
}

Artifacts build_beam(const RunConfig& cfg, const RunOptions& opt, Manifest& man) {
    const std::string text = read_text_file(cfg.beam.signal);
    SignalSamples sig;
    {
        Table t = parse_table(text, cfg.beam.signal);
        require_config(!t.rows.empty() && t.rows.front().size() >= 2,
                       cfg.beam.signal + ": need two columns (fluence, signal)");
        for (const auto& row : t.rows) {
            sig.f.push_back(row[0]);
            sig.s.push_back(row[1]);
        }
    }
    BeamProfile beam = cfg.beam.z_range_set
                           ? make_beam(cfg.beam.w0, cfg.beam.z0, cfg.beam.n_phot, cfg.beam.z_min,
                                       cfg.beam.z_max)
                           : make_beam(cfg.beam.w0, cfg.beam.z0, cfg.beam.n_phot);
    double val = volume_signal(sig.f, sig.s, beam, cfg.beam.n_z, cfg.beam.n_u);

    Table t;
    t.comments = run_comments(cfg);
    t.comments.push_back("beam w0=" + format_num(beam.w0) + " z0=" + format_num(beam.z0) +
                         " n_phot=" + format_num(beam.n_phot) +
                         " z_min=" + format_num(beam.z_min) + " z_max=" + format_num(beam.z_max));
    t.comments.push_back("input " + cfg.beam.signal + " " + hash_string(fnv1a(text)));
    man.section("inputs");
    man.raw("input " + cfg.beam.signal + " " + hash_string(fnv1a(text)));
    man.section("result");
    man.kv("volume_signal", val);
    if (cfg.beam.mc_samples > 0) {
        double mc = beam_mc_estimate(sig, beam, cfg.beam.mc_samples, opt.seed);
        double rel = std::abs(mc - val) / std::max(std::abs(val), 1e-300);
        t.columns = {"volume_signal", "mc_estimate", "mc_rel_dev"};
        t.rows.push_back({val, mc, rel});
        man.kv("mc_estimate", mc);
        man.kv("mc_rel_dev", rel);
    } else {
        t.columns = {"volume_signal"};
        t.rows.push_back({val});
    }
    return {{"volume.dat", t.str()}};
}

Manifest base_manifest(const RunConfig& cfg, const RunOptions& opt) {
    Manifest m;
    m.kv("version", std::string(kVersion));
    m.kv("scenario", to_string(cfg.scenario));
    m.kv("config", cfg.source_path);
    m.kv("config_hash", hash_string(fnv1a(cfg.source_text)));
    m.kv("seed", long(opt.seed));
    m.section("units");
    for (const auto& u : cfg.unit_log)
        m.raw(u.key + " = " + format_num(u.given) + " " + u.unit + " -> " + format_num(u.au) +
              " au");
    return m;
}

} // namespace

std::vector<std::string> run_scenario(const RunConfig& cfg0, const RunOptions& opt) {
    RunConfig cfg = cfg0;
    if (!opt.output_dir.empty()) cfg.output_dir = opt.output_dir;
    validate_config(cfg);

    Manifest man = base_manifest(cfg, opt);
    Artifacts arts;
    switch (cfg.scenario) {
        case Scenario::Propagate: arts = build_propagate(cfg, man); break;
        case Scenario::Pes: arts = build_pes(cfg, man); break;
        case Scenario::IntensityScan: arts = build_intensity_scan(cfg, man); break;
        case Scenario::SiegertScan: arts = build_siegert(cfg, man); break;
        case Scenario::Analyze: arts = build_analyze(cfg, man); break;
        case Scenario::BeamVolume: arts = build_beam(cfg, opt, man); break;
    }

    man.section("files");
    for (const auto& a : arts) man.raw(a.name);
    man.section("config");
    {
        std::istringstream in(cfg.source_text);
        std::string line;
        while (std::getline(in, line)) man.raw("> " + line);
    }

    // everything computed; only now touch the filesystem
    std::filesystem::create_directories(cfg.output_dir);
    std::vector<std::string> written;
    for (const auto& a : arts) {
        write_text_file(cfg.output_dir + "/" + a.name, a.text);
        written.push_back(a.name);
    }
    man.write(cfg.output_dir + "/manifest.txt");
    written.push_back("manifest.txt");
    return written;
}

double headline_observable(const RunConfig& cfg) {
    switch (cfg.scenario) {
        case Scenario::Propagate: return propagate_core(cfg, nullptr);
        case Scenario::Pes: return pes_core(cfg).spec.yield_total();
        case Scenario::SiegertScan: {
            auto pts = siegert_core(cfg, nullptr);
            require_numeric(!pts.empty(), "siegert scan returned no points");
            return width_of(pts.back().energy);
        }
        default:
            throw ConfigError("doubling check supports propagate, pes and siegert-scan runs");
    }
}

bool DoublingReport::converged() const {
    for (const auto& a : axes)
        if (a.flagged) return false;
    return true;
}

std::string DoublingReport::str() const {
    std::string out;
    out += "observable = " + observable + "\n";
    out += "base = " + format_num(base) + "\n";
    out += "tol = " + format_num(tol) + "\n";
    for (const auto& a : axes)
        out += "axis " + a.name + ": value = " + format_num(a.value) +
               " rel_delta = " + format_num(a.rel_delta) + (a.flagged ? " FLAGGED" : " ok") +
               "\n";
    out += std::string("converged = ") + (converged() ? "yes" : "no") + "\n";
    return out;
}

DoublingReport doubling_check(const RunConfig& cfg, double tol) {
    validate_config(cfg);
    require_config(tol > 0, "doubling check: tol must be positive");
    DoublingReport rep;
    rep.tol = tol;
    switch (cfg.scenario) {
        case Scenario::Propagate: rep.observable = "final_ground_population"; break;
        case Scenario::Pes: rep.observable = "total_yield"; break;
        case Scenario::SiegertScan: rep.observable = "gamma_last"; break;
        default: rep.observable = "unsupported"; break;
    }
    rep.base = headline_observable(cfg);
    auto probe = [&](const std::string& name, const RunConfig& mod) {
        double v = headline_observable(mod);
        double rel = std::abs(v - rep.base) / std::max(std::abs(rep.base), 1e-300);
        rep.axes.push_back({name, v, rel, rel > tol});
    };
    if (cfg.scenario != Scenario::SiegertScan) {
        RunConfig m = cfg;
        m.propagation.dt *= 0.5;
        probe("dt/2", m);
    }
    {
        RunConfig m = cfg;
        m.grid.n_points *= 2;
        probe("n_points*2", m);
    }
    {
        RunConfig m = cfg;
        m.model.e_cut *= 1.5;
        probe("e_cut*1.5", m);
    }
    return rep;
}

std::string fit_report_text(const std::string& yields_path) {
    const std::string text = read_text_file(yields_path);
    auto recs = yields_records(parse_table(text, yields_path));
    AnalyzeTables tabs = analyze_records(recs);
    std::string head = "# tdcis " + std::string(kVersion) + " fit\n# input " + yields_path + " " +
                       hash_string(fnv1a(text)) + "\n";
    std::string out = head + tabs.sigma.str();
    if (!tabs.fits.rows.empty()) out += tabs.fits.str();
    return out;
}

double volume_signal_from_file(const std::string& signal_path, const BeamProfile& beam, int n_z,
                               int n_u) {
    SignalSamples sig = read_signal(signal_path);
    return volume_signal(sig.f, sig.s, beam, n_z, n_u);
}

} // namespace tdcis
