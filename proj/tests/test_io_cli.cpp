#include "doctest.h"

#include "tdcis/beam.hpp"
#include "tdcis/config.hpp"
#include "tdcis/errors.hpp"
#include "tdcis/io.hpp"
#include "tdcis/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace tdcis;
namespace fs = std::filesystem;

namespace {

const char* bin_path() {
    const char* p = std::getenv("TDCIS_BIN");
    REQUIRE_MESSAGE(p != nullptr, "TDCIS_BIN must point at the CLI binary");
    return p;
}

const char* config_dir() {
    const char* p = std::getenv("TDCIS_CONFIG_DIR");
    REQUIRE_MESSAGE(p != nullptr, "TDCIS_CONFIG_DIR must point at the bundled configs");
    return p;
}

struct CliResult {
    int code = -1;
    std::string out; // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd = env_prefix + std::string(bin_path()) + " " + args + " 2>&1";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    CliResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
    int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

// fresh scratch directory per test case
fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / "tdcis_io_cli" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

void put(const fs::path& p, const std::string& text) { write_text_file(p.string(), text); }

// small weak-field propagation that finishes in well under a second
std::string propagate_cfg(const std::string& out_dir, const std::string& extra = "") {
    return "scenario = propagate\n"
           "[model]\n"
           "potential = soft-core\n"
           "depth = 1.0\n"
           "softness = 1.0 bohr\n"
           "l_max = 1\n"
           "e_cut = 1.5 hartree\n"
           "[grid]\n"
           "r_max = 30 bohr\n"
           "n_points = 150\n"
           "[pulse]\n"
           "omega = 0.8 hartree\n"
           "intensity = 5e13 W/cm2\n"
           "fwhm = 8.0 au\n"
           "[propagation]\n"
           "dt = 0.1 au\n"
           "krylov = 12\n"
           "sample = 10 au\n" +
           extra + "[output]\ndir = " + out_dir + "\n";
}

double manifest_value(const std::string& text, const std::string& key) {
    size_t pos = text.find("\n" + key + " = ");
    REQUIRE(pos != std::string::npos);
    return std::strtod(text.c_str() + pos + key.size() + 4, nullptr);
}

} // namespace

TEST_CASE("format_num keeps integers plain") {
    CHECK(format_num(0.0) == "0");
    CHECK(format_num(40.0) == "40");
    CHECK(format_num(-3.0) == "-3");
    CHECK(format_num(1e15) == "1e+15");
    CHECK(format_num(0.5) == "0.5");
}

TEST_CASE("format_num output parses back to the same bits") {
    const double vals[] = {0.1,   1.0 / 3.0, 3.141592653589793, 6.62607015e-34,
                           1e300, 2.5e-15,   27.211386245988,   -1.602176634e-19,
                           1e-7,  123456789.123456789};
    for (double v : vals) {
        std::string s = format_num(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("fnv1a matches the published reference vectors") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
    CHECK(hash_string(fnv1a("")) == "fnv1a:cbf29ce484222325");
}

TEST_CASE("tables round-trip through their text form") {
    Table t;
    t.comments = {"tdcis test", "second line"};
    t.columns = {"x", "y", "z"};
    t.rows = {{1.0, 0.5, -2e-15}, {40.0, 1.0 / 3.0, 1e300}};
    Table back = parse_table(t.str());
    CHECK(back.columns == t.columns);
    REQUIRE(back.rows.size() == 2);
    for (size_t i = 0; i < t.rows.size(); ++i)
        for (size_t j = 0; j < t.rows[i].size(); ++j) CHECK(back.rows[i][j] == t.rows[i][j]);
    CHECK(back.column("y") == 1);
    CHECK(back.column("missing") == -1);

    // CRLF and a bare '#' line are tolerated
    Table crlf = parse_table("# columns: a b\r\n#\r\n1 2\r\n");
    CHECK(crlf.rows[0][1] == 2.0);

    CHECK_THROWS_AS(parse_table("# columns: a b\n1 2 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_table("# columns: a b\n1 nope\n"), ConfigError);
    CHECK_THROWS_AS(parse_table("1 2\n"), ConfigError); // no header
}

TEST_CASE("yields tables carry ionization records faithfully") {
    IonizationRecord a;
    a.omega_ev = 21.7691;
    a.intensity_wcm2 = 1e12;
    a.tau_fs = 0.7257;
    a.p_n = {1e-6, 3e-10};
    IonizationRecord b = a;
    b.intensity_wcm2 = 1e13;
    b.p_n = {1e-5, 3e-8};
    Table t = yields_table({a, b});
    CHECK(t.columns == std::vector<std::string>{"omega_ev", "intensity_wcm2", "tau_fs", "p1",
                                                "p2"});
    auto recs = yields_records(t);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].p_n[1] == 3e-10);
    CHECK(recs[1].intensity_wcm2 == 1e13);

    Table bad = t;
    bad.columns[0] = "omega";
    CHECK_THROWS_AS(yields_records(bad), ConfigError);
}

TEST_CASE("config parsing converts units and logs every conversion") {
    RunConfig cfg = parse_config_text(propagate_cfg("x"));
    CHECK(cfg.scenario == Scenario::Propagate);
    CHECK(cfg.pulse.omega == 0.8);
    CHECK(cfg.grid.r_max == 30.0);
    CHECK(cfg.propagation.dt == 0.1);
    CHECK(cfg.output_dir == "x");
    // 5e13 W/cm2 in atomic units of intensity
    CHECK(cfg.pulse.intensity == doctest::Approx(5e13 / 3.50944758e16).epsilon(1e-9));

    bool logged = false;
    for (const auto& u : cfg.unit_log)
        if (u.key == "pulse.intensity") {
            logged = true;
            CHECK(u.given == 5e13);
            CHECK(u.unit == "W/cm2");
            CHECK(u.au == cfg.pulse.intensity);
        }
    CHECK(logged);

    // eV and femtoseconds convert on the way in
    RunConfig ev = parse_config_text(
        "scenario = propagate\n[model]\npotential = soft-core\ndepth = 1.0\n"
        "[grid]\nr_max = 30 bohr\nn_points = 64\n"
        "[pulse]\nomega = 27.211386245988 eV\nintensity = 1e12 W/cm2\nfwhm = 1 fs\n");
    CHECK(ev.pulse.omega == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev.pulse.fwhm == doctest::Approx(41.341373335335).epsilon(1e-9));
}

TEST_CASE("config parsing rejects malformed input with file and line") {
    auto with_line = [](const std::string& text, const char* frag) {
        try {
            parse_config_text(text, "probe.conf");
            FAIL_CHECK("expected ConfigError for: " << frag);
        } catch (const ConfigError& e) {
            CHECK_MESSAGE(std::string(e.what()).find("probe.conf") != std::string::npos,
                          e.what());
        }
    };
    const std::string ok = propagate_cfg("x");

    with_line(ok + "stray = 1\n", "unknown key in output section");
    with_line(ok + "[nosuch]\nkey = 1\n", "unknown section");
    with_line("scenario = propagate\n[pulse]\nomega = 0.8\n", "missing unit");
    with_line("scenario = propagate\n[pulse]\nomega = 0.8 bohr\n", "wrong unit kind");
    with_line("scenario = propagate\n[pulse]\nomega = 0.8 eV\nomega = 0.9 eV\n", "duplicate");
    with_line("[pulse]\nomega = 0.8 eV\n", "missing scenario");
    with_line("scenario = propagate\n[grid]\nn_points = 1.5\n", "non-integer count");
    with_line("scenario = propagate\n[pulse]\nomega = eV\n", "missing number");

    // beam z-range must come as a pair
    with_line("scenario = beam-volume\n[beam]\nw0 = 1 bohr\nz0 = 2 bohr\nn_phot = 1e9\n"
              "signal = s.dat\nz_min = -1 bohr\n",
              "z_min without z_max");
}

TEST_CASE("config validation enforces cross-field constraints") {
    auto expect_reject = [](const std::string& text) {
        RunConfig cfg = parse_config_text(text);
        CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    };
    const std::string pes_head = "scenario = pes\n"
                                 "[model]\npotential = soft-core\ndepth = 1.0\n"
                                 "[grid]\nr_max = 60 bohr\nn_points = 200\n"
                                 "[pulse]\nomega = 0.8 hartree\nintensity = 1e13 W/cm2\n"
                                 "fwhm = 8 au\n"
                                 "[splitting]\nradius = 40 bohr\ncadence = 15 au\n";

    // photoelectron synthesis needs the velocity gauge
    expect_reject(pes_head + "[propagation]\ngauge = length\n");
    // even angle counts break the Simpson mesh
    expect_reject(pes_head + "[pes]\nn_theta = 20\n");
    // splitting radius must sit inside the box
    expect_reject("scenario = pes\n"
                  "[model]\npotential = soft-core\ndepth = 1.0\n"
                  "[grid]\nr_max = 30 bohr\nn_points = 200\n"
                  "[pulse]\nomega = 0.8 hartree\nintensity = 1e13 W/cm2\nfwhm = 8 au\n"
                  "[splitting]\nradius = 40 bohr\ncadence = 15 au\n");
    // CAP must sit inside the box
    expect_reject("scenario = siegert-scan\n"
                  "[model]\npotential = soft-core\ndepth = 1.0\n"
                  "[grid]\nr_max = 30 bohr\nn_points = 200\n"
                  "[siegert]\ne_start = -0.275 hartree\nr_cap = 45 bohr\neta = 1e-3 au\n"
                  "f_min = 0 au\nf_max = 0.05 au\nn_fields = 3\n");
    // soft-core needs a positive depth
    expect_reject("scenario = propagate\n[model]\npotential = soft-core\n"
                  "[grid]\nr_max = 30 bohr\nn_points = 100\n"
                  "[pulse]\nomega = 0.8 hartree\nintensity = 1e12 W/cm2\nfwhm = 8 au\n");

    RunConfig good = parse_config_text(propagate_cfg("x"));
    CHECK_NOTHROW(validate_config(good));
}

TEST_CASE("check verb validates every bundled config") {
    for (const char* name : {"model_propagate.conf", "model_pes.conf", "model_scan.conf",
                             "siegert_scan.conf", "analyze_example.conf", "beam_volume.conf"}) {
        CliResult r = run_cli("check " + (fs::path(config_dir()) / name).string());
        CHECK_MESSAGE(r.code == 0, name << ": " << r.out);
        CHECK(r.out.rfind("ok ", 0) == 0);
    }
    CliResult pes = run_cli("check " + (fs::path(config_dir()) / "model_pes.conf").string());
    CHECK(pes.out.find("ok pes") == 0);
    CHECK(pes.out.find("pulse.omega = 21.7691 eV -> ") != std::string::npos);
}

TEST_CASE("run verb writes a complete propagate artifact set, reproducibly") {
    fs::path d = scratch("prop");
    put(d / "run.conf", propagate_cfg((d / "out").string()));

    CliResult r = run_cli("run " + (d / "run.conf").string());
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(r.out.find("populations.dat") != std::string::npos);
    CHECK(r.out.find("manifest.txt") != std::string::npos);
    REQUIRE(fs::exists(d / "out" / "populations.dat"));
    REQUIRE(fs::exists(d / "out" / "manifest.txt"));

    Table pops = read_table((d / "out" / "populations.dat").string());
    int c_norm = pops.column("norm");
    int c_ground = pops.column("ground");
    REQUIRE(c_norm >= 0);
    REQUIRE(c_ground >= 0);
    CHECK(pops.rows.front()[c_norm] == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& row : pops.rows) {
        CHECK(row[c_norm] <= 1.0 + 1e-9);
        CHECK(row[c_ground] <= row[c_norm] + 1e-12);
    }

    std::string manifest = read_text_file((d / "out" / "manifest.txt").string());
    CHECK(manifest.find("version = ") != std::string::npos);
    CHECK(manifest.find("config_hash = fnv1a:") != std::string::npos);
    CHECK(manifest.find("[units]") != std::string::npos);
    CHECK(manifest.find("[config]") != std::string::npos);
    double ground = manifest_value(manifest, "final_ground_population");
    CHECK(ground > 0.5);
    CHECK(ground < 1.0);

    // a second run and a run with a different thread budget give the same bytes
    std::string pops1 = read_text_file((d / "out" / "populations.dat").string());
    CliResult r2 = run_cli("run " + (d / "run.conf").string());
    REQUIRE(r2.code == 0);
    CHECK(read_text_file((d / "out" / "populations.dat").string()) == pops1);
    CHECK(read_text_file((d / "out" / "manifest.txt").string()) == manifest);

    CliResult r3 = run_cli("--threads 2 run " + (d / "run.conf").string());
    REQUIRE(r3.code == 0);
    CHECK(read_text_file((d / "out" / "populations.dat").string()) == pops1);

    CliResult r4 = run_cli("run " + (d / "run.conf").string(), "TDCIS_THREADS=3 ");
    REQUIRE(r4.code == 0);
    CHECK(read_text_file((d / "out" / "populations.dat").string()) == pops1);

    // --output-dir overrides the config destination
    CliResult r5 =
        run_cli("--output-dir " + (d / "other").string() + " run " + (d / "run.conf").string());
    REQUIRE(r5.code == 0);
    CHECK(fs::exists(d / "other" / "manifest.txt"));
}

TEST_CASE("run verb produces a photoelectron spectrum with the expected line") {
    fs::path d = scratch("pes");
    put(d / "pes.conf",
        "scenario = pes\n"
        "[model]\npotential = soft-core\ndepth = 1.0\nsoftness = 1.0 bohr\n"
        "l_max = 1\ne_cut = 1.5 hartree\n"
        "[grid]\nr_max = 60 bohr\nn_points = 240\n"
        "[pulse]\nomega = 21.7691 eV\nintensity = 1e13 W/cm2\nfwhm = 0.3 fs\n"
        "[propagation]\ndt = 0.1 au\nkrylov = 12\n"
        "[splitting]\nradius = 40 bohr\nwidth = 2.0 bohr\ncadence = 15 au\ndrain = 80 au\n"
        "[pes]\ne_min = 0.2 hartree\ne_max = 1.2 hartree\nn_energy = 101\nn_theta = 21\n"
        "[output]\ndir = " +
            (d / "out").string() + "\n");

    CliResult r = run_cli("run " + (d / "pes.conf").string());
    REQUIRE_MESSAGE(r.code == 0, r.out);
    for (const char* f : {"spectrum.dat", "spectrum_angle.dat", "yields.dat", "manifest.txt"})
        REQUIRE(fs::exists(d / "out" / f));

    std::string manifest = read_text_file((d / "out" / "manifest.txt").string());
    double line_ev = manifest_value(manifest, "one_photon_line_ev");
    double total = manifest_value(manifest, "total_yield");
    CHECK(line_ev > 13.0);
    CHECK(line_ev < 16.0);
    CHECK(total > 0.0);

    Table sp = read_table((d / "out" / "spectrum.dat").string());
    int ce = sp.column("e_ev"), cy = sp.column("dpde_per_ev");
    REQUIRE(ce >= 0);
    REQUIRE(cy >= 0);
    size_t ipk = 0;
    for (size_t i = 1; i < sp.rows.size(); ++i)
        if (sp.rows[i][cy] > sp.rows[ipk][cy]) ipk = i;
    // peak within one pulse bandwidth of the one-photon line
    const double fwhm_au = 0.3 * 41.341373335335;
    const double bandwidth_ev = 2.765 / fwhm_au * 27.211386245988;
    CHECK(std::abs(sp.rows[ipk][ce] - line_ev) < bandwidth_ev);

    // an s hole ionized by one linearly polarized photon emits a p wave
    Table ang = read_table((d / "out" / "spectrum_angle.dat").string());
    int ae = ang.column("e_ev"), at = ang.column("theta_rad"), av = ang.column("d2p_per_ev_sr");
    REQUIRE(av >= 0);
    double peak_e = sp.rows[ipk][ce];
    // the theta = 0 value sets the p-wave amplitude
    double a0 = 0;
    for (const auto& row : ang.rows)
        if (std::abs(row[ae] - peak_e) < 1e-9 && row[at] == 0.0) a0 = row[av];
    REQUIRE(a0 > 0);
    for (const auto& row : ang.rows) {
        if (std::abs(row[ae] - peak_e) > 1e-9) continue;
        double c = std::cos(row[at]);
        CHECK(std::abs(row[av] - a0 * c * c) <= 0.02 * a0);
    }

    Table yl = read_table((d / "out" / "yields.dat").string());
    REQUIRE(yl.rows.size() >= 1);
    int cyield = yl.column("yield");
    REQUIRE(cyield >= 0);
    double sum = 0;
    for (const auto& row : yl.rows) sum += row[cyield];
    CHECK(sum == doctest::Approx(total).epsilon(1e-9));
}

TEST_CASE("malformed configs exit with code 2 and leave no artifacts") {
    fs::path d = scratch("bad");
    put(d / "bad.conf", propagate_cfg((d / "out").string()) + "typo = 1\n");
    CliResult r = run_cli("run " + (d / "bad.conf").string());
    CHECK(r.code == 2);
    CHECK(r.out.find("config error:") != std::string::npos);
    CHECK(!fs::exists(d / "out"));

    // validation failures behave the same way
    put(d / "bad2.conf", "scenario = propagate\n[model]\npotential = soft-core\ndepth = 1.0\n"
                         "[grid]\nr_max = 30 bohr\nn_points = 8\n"
                         "[pulse]\nomega = 0.8 hartree\nintensity = 1e12 W/cm2\nfwhm = 8 au\n"
                         "[output]\ndir = " +
                             (d / "out2").string() + "\n");
    CliResult r2 = run_cli("run " + (d / "bad2.conf").string());
    CHECK(r2.code == 2);
    CHECK(!fs::exists(d / "out2"));

    CHECK(run_cli("run " + (d / "missing.conf").string()).code == 2);
    CHECK(run_cli("nosuchverb").code == 2);
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("volume " + (d / "missing.dat").string()).code == 2); // lacks --w0/--z0
}

TEST_CASE("fit verb recovers the orders planted in the bundled example") {
    fs::path yields = fs::path(config_dir()) / "example_yields.dat";
    CliResult r = run_cli("fit " + yields.string());
    REQUIRE_MESSAGE(r.code == 0, r.out);
    CHECK(r.out.find("# columns: omega_ev intensity_wcm2") != std::string::npos);
    // the report ends with the order-fit table
    size_t last = r.out.rfind("# columns:");
    REQUIRE(last != std::string::npos);
    Table rep = parse_table(r.out.substr(last));
    int co = rep.column("order"), cs = rep.column("slope");
    REQUIRE(co >= 0);
    REQUIRE(cs >= 0);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0][co] == 1.0);
    CHECK(rep.rows[0][cs] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.rows[1][co] == 2.0);
    CHECK(rep.rows[1][cs] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("analyze rejects unphysical yields with the numerical exit code") {
    fs::path d = scratch("analyze3");
    put(d / "bad_yields.dat", "# columns: omega_ev intensity_wcm2 tau_fs p1\n"
                              "21.7691 1e12 0.7257 1.5\n"
                              "21.7691 1e13 0.7257 1.6\n"
                              "21.7691 1e14 0.7257 1.7\n");
    put(d / "an.conf", "scenario = analyze\n[analysis]\nyields = " +
                           (d / "bad_yields.dat").string() + "\n[output]\ndir = " +
                           (d / "out").string() + "\n");
    CliResult r = run_cli("run " + (d / "an.conf").string());
    CHECK(r.code == 3);
    CHECK(r.out.find("numerical error:") != std::string::npos);
    CHECK(!fs::exists(d / "out"));
}

TEST_CASE("volume verb matches the linear closed form") {
    fs::path d = scratch("vol");
    const double c = 2.5e-7, w0 = 100, z0 = 400, n = 1e9;
    std::string table = "# columns: fluence_au signal\n";
    for (int i = 0; i <= 50; ++i) {
        double f = 2000.0 * i;
        table += format_num(f) + " " + format_num(c * f) + "\n";
    }
    put(d / "signal.dat", table);

    const double ln2 = 0.6931471805599453;
    CliResult r = run_cli("volume " + (d / "signal.dat").string() +
                          " --w0 100 --z0 400 --n-phot 1e9");
    REQUIRE_MESSAGE(r.code == 0, r.out);
    double got = std::strtod(r.out.c_str(), nullptr);
    double expect = c * 4.0 * n * ln2 * (6.0 * z0); // default acceptance is +-3 z0
    CHECK(got == doctest::Approx(expect).epsilon(1e-8));

    CliResult r2 = run_cli("volume " + (d / "signal.dat").string() +
                           " --w0 100 --z0 400 --n-phot 1e9 --z-min -100 --z-max 500");
    REQUIRE(r2.code == 0);
    double got2 = std::strtod(r2.out.c_str(), nullptr);
    CHECK(got2 == doctest::Approx(c * 4.0 * n * ln2 * 600.0).epsilon(1e-8));

    // same numbers through the library entry point the verb wraps
    double lib = volume_signal_from_file((d / "signal.dat").string(),
                                         make_beam(w0, z0, n));
    CHECK(lib == got);
}

TEST_CASE("beam-volume scenario reruns bit-identically under a fixed seed") {
    fs::path d = scratch("beam");
    const double c = 1.2e-6;
    std::string table = "# columns: fluence_au signal\n";
    for (int i = 0; i <= 60; ++i) {
        double f = 1500.0 * i;
        table += format_num(f) + " " + format_num(c * f * f) + "\n";
    }
    put(d / "signal.dat", table);
    std::string cfg = "scenario = beam-volume\n[beam]\nw0 = 100 bohr\nz0 = 400 bohr\n"
                      "n_phot = 1e9\nsignal = " +
                      (d / "signal.dat").string() +
                      "\nmc_samples = 20000\n[output]\ndir = " + (d / "out").string() + "\n";
    put(d / "bv.conf", cfg);

    CliResult r = run_cli("--seed 7 run " + (d / "bv.conf").string());
    REQUIRE_MESSAGE(r.code == 0, r.out);
    std::string vol1 = read_text_file((d / "out" / "volume.dat").string());
    std::string man1 = read_text_file((d / "out" / "manifest.txt").string());
    CHECK(man1.find("seed = 7") != std::string::npos);

    CliResult r2 = run_cli("--seed 7 run " + (d / "bv.conf").string());
    REQUIRE(r2.code == 0);
    CHECK(read_text_file((d / "out" / "volume.dat").string()) == vol1);
    CHECK(read_text_file((d / "out" / "manifest.txt").string()) == man1);

    CliResult r3 = run_cli("--seed 8 run " + (d / "bv.conf").string());
    REQUIRE(r3.code == 0);
    Table t1 = parse_table(vol1);
    Table t3 = read_table((d / "out" / "volume.dat").string());
    int cm = t1.column("mc_estimate");
    REQUIRE(cm >= 0);
    CHECK(t1.rows[0][cm] != t3.rows[0][cm]);
    // while the deterministic quadrature stays put
    int cv = t1.column("volume_signal");
    CHECK(t1.rows[0][cv] == t3.rows[0][cv]);
    // and the Monte Carlo stays within a loose band of it
    CHECK(std::abs(t1.rows[0][cm] - t1.rows[0][cv]) < 0.1 * t1.rows[0][cv]);
}

TEST_CASE("doubling check reports per-axis convergence") {
    fs::path d = scratch("doubling");
    put(d / "run.conf", propagate_cfg((d / "out").string()));

    CliResult ok = run_cli("check --doubling --tol 1e-2 " + (d / "run.conf").string());
    REQUIRE_MESSAGE(ok.code == 0, ok.out);
    CHECK(ok.out.find("observable = final_ground_population") != std::string::npos);
    CHECK(ok.out.find("axis dt/2") != std::string::npos);
    CHECK(ok.out.find("axis n_points*2") != std::string::npos);
    CHECK(ok.out.find("axis e_cut*1.5") != std::string::npos);
    CHECK(ok.out.find("converged = yes") != std::string::npos);

    // an absurd tolerance flags every axis but still exits cleanly
    CliResult tight = run_cli("check --doubling --tol 1e-18 " + (d / "run.conf").string());
    REQUIRE(tight.code == 0);
    CHECK(tight.out.find("FLAGGED") != std::string::npos);
    CHECK(tight.out.find("converged = no") != std::string::npos);

    // the report itself is deterministic
    CliResult again = run_cli("check --doubling --tol 1e-2 " + (d / "run.conf").string());
    CHECK(again.out == ok.out);
}
