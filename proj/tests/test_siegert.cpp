#include "doctest.h"

#include "tdcis/errors.hpp"
#include "tdcis/numerics.hpp"
#include "tdcis/potential.hpp"
#include "tdcis/propagator.hpp"
#include "tdcis/siegert.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace tdcis;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd random_complex(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cd(u(rng), 0.1 * u(rng));
    return m;
}

// all eigenvalues via the dense solver, sorted by distance to the shift
std::vector<cd> reference_nearest(const Eigen::MatrixXcd& m, cd shift) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<cd> v(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
    std::sort(v.begin(), v.end(),
              [&](cd a, cd b) { return std::abs(a - shift) < std::abs(b - shift); });
    return v;
}

} // namespace

TEST_CASE("eigs_near agrees with a full dense reference") {
    for (int n : {90, 420}) { // below and above the direct-solve cutoff
        Eigen::MatrixXcd m = random_complex(n, 7u + n);
        // cluster the spectrum scale so distances are O(1)
        m *= 0.1;
        cd shift(0.3, -0.05);
        auto ref = reference_nearest(m, shift);
        auto got = eigs_near(m, shift, 6);
        REQUIRE(got.size() == 6);
        for (int i = 0; i < 6; ++i) {
            CHECK(std::abs(got[i].value - ref[i]) < 1e-8);
            CHECK(got[i].residual < 1e-9);
            // residual recomputed from scratch
            double r = (m * got[i].vector - got[i].value * got[i].vector).norm();
            CHECK(r < 1e-8);
        }
    }
}

TEST_CASE("hydrogen static dipole response") {
    auto grid = build_grid(GridMapping::SqrtMapped, 40.0, 1600);
    auto v = coulomb_potential(grid, 1.0);
    auto model = build_sae_spectral(grid, v, 1, 12.0, grid.r_max); // no absorber range
    const double e0 = model.states[0][0].energy;
    CHECK(e0 == doctest::Approx(-0.5).epsilon(2e-3));

    // second-order perturbation sum over the same discrete basis
    double alpha_pt = 0;
    for (size_t k = 0; k < model.states[1].size(); ++k) {
        double z = model.z_up[0](k, 0);
        alpha_pt += 2.0 * z * z / (model.states[1][k].energy - e0);
    }
    CHECK(alpha_pt == doctest::Approx(4.5).epsilon(0.015));

    // quadratic Stark shift of the dressed ground eigenvalue; Richardson in
    // the field strength removes the quartic hyperpolarizability term
    auto alpha_at = [&](double f) {
        auto pairs = eigs_near(model.dressed(f, 0.0), cd(e0 - 1e-4, 0), 1);
        return -2.0 * (pairs.front().value.real() - e0) / (f * f);
    };
    double a1 = alpha_at(2e-3), a2 = alpha_at(1e-3);
    double alpha_dressed = (4.0 * a2 - a1) / 3.0;
    CHECK(alpha_dressed == doctest::Approx(alpha_pt).epsilon(1e-5));
}

TEST_CASE("static-field resonance: spectral width vs time-domain decay") {
    // soft-core single-electron model; uniform grid shared by both routes so
    // the comparison carries no discretization mismatch
    auto grid = build_grid(GridMapping::Uniform, 60.0, 400);
    auto v = soft_core_potential(grid, 1.0, 1.0);
    const double f_hold = 0.03;
    const double eta = 4e-3, r_cap = 40.0;
    const int l_max = 8;

    auto model = build_sae_spectral(grid, v, l_max, 6.0, r_cap);
    const double e0 = model.states[0][0].energy;

    std::vector<double> fields = {0.01, 0.015, 0.02, 0.025, f_hold};
    auto dressed = [&](double eta_pick) {
        return [&model, eta_pick](double f) { return model.dressed(f, eta_pick); };
    };
    auto scan = scan_adiabatic(dressed(eta), fields, cd(e0, 0));
    const cd e_res = scan.back().energy;
    const double gamma_spectral = width_of(e_res);
    CHECK(gamma_spectral > 1e-3);
    CHECK(gamma_spectral < 2e-2);

    SUBCASE("width sits on an absorber-strength plateau") {
        for (double eta2 : {2e-3, 8e-3}) {
            auto scan2 = scan_adiabatic(dressed(eta2), fields, cd(e0, 0));
            CHECK(width_of(scan2.back().energy) ==
                  doctest::Approx(gamma_spectral).epsilon(0.04));
        }
    }

    SUBCASE("norm decay of the ramped-and-held state matches the width") {
        const double t_ramp = 60.0, t_end = 460.0;
        auto field = [&](double t) {
            if (t >= t_ramp) return f_hold;
            double s = std::sin(0.5 * 3.14159265358979323846 * t / t_ramp);
            return f_hold * s * s;
        };
        SaeGridHamiltonian h(grid, v, l_max, field, eta, r_cap, 180.0);
        Eigen::VectorXcd psi = h.eigenstate(0, 0);

        std::vector<double> ts, lnp;
        std::vector<double> samples;
        for (double t = t_ramp + 80.0; t <= t_end; t += 10.0) samples.push_back(t);
        PropagatorOptions opt;
        opt.method = Integrator::Lanczos;
        opt.dt = 0.05;
        opt.krylov_dim = 14;
        propagate(h, psi, 0.0, t_end, opt, samples, [&](double t, Eigen::VectorXcd& p) {
            ts.push_back(t);
            lnp.push_back(std::log(p.squaredNorm()));
        });
        auto [slope, icept] = fit_line(ts, lnp);
        (void)icept;
        double gamma_decay = -slope;
        CHECK(gamma_decay == doctest::Approx(gamma_spectral).epsilon(0.06));
    }
}

TEST_CASE("avoided crossing: adiabatic continuation vs diabatic overlap") {
    // two-level model with linearly counter-moving diagonals; the coupling g
    // opens a gap 2g at the crossing field f* = 1
    const double a = 0.1, g = 0.01;
    const cd loss(0, -0.01);
    auto dressed = [&](double f) {
        Eigen::MatrixXcd h(2, 2);
        h(0, 0) = cd(-0.5 + a * f, 0);
        h(1, 1) = cd(-0.3 - a * f, 0) + loss;
        h(0, 1) = h(1, 0) = cd(g, 0);
        return h;
    };
    std::vector<double> fields;
    for (double f = 0.0; f <= 2.0001; f += 0.02) fields.push_back(f);

    auto ad = scan_adiabatic(dressed, fields, cd(-0.5, 0));
    auto di = scan_diabatic(dressed, fields, cd(-0.5, 0), 2);

    // past the crossing the adiabatic curve rides the other diagonal while
    // the diabatic curve keeps its original slope (and stays lossless)
    CHECK(std::abs(ad.back().energy - (cd(-0.5, 0) + loss)) < 5e-3);
    CHECK(std::abs(di.back().energy - cd(-0.3, 0)) < 5e-3);
    CHECK(std::abs(di.back().energy.imag()) < 2e-3);

    // the tracked character is pure away from the crossing and drops to the
    // 50/50 mixing value (1/sqrt 2) only inside the gap region
    CHECK(di.front().overlap > 0.99);
    CHECK(di.back().overlap > 0.95);
    int mixed = 0;
    for (const auto& p : di) {
        CHECK(p.overlap > 0.65);
        if (p.overlap < 0.9) ++mixed;
    }
    CHECK(mixed <= 15);

    // both trackers see exactly one eigenvalue at every field
    for (size_t i = 0; i < fields.size(); ++i) {
        CHECK(ad[i].field == fields[i]);
        CHECK(di[i].field == fields[i]);
    }
}

TEST_CASE("dressed CIS matrix: field term and absorber placement") {
    auto grid = build_grid(GridMapping::Uniform, 24.0, 240);
    auto v = soft_core_potential(grid, 2.0, 1.0);
    auto basis = build_cis_basis(grid, v, 2, 1, 3.0);
    auto mats = build_cis_matrices(basis, Gauge::Length);

    const double f = 0.01;
    Eigen::MatrixXcd h0f = dressed_cis_matrix(basis, mats, f, 0.0, 12.0);
    CHECK((h0f - (mats.h0 + f * mats.dip).cast<cd>()).cwiseAbs().maxCoeff() == 0.0);

    const double eta = 5e-3;
    Eigen::MatrixXcd h = dressed_cis_matrix(basis, mats, f, eta, 12.0);

    // asymmetry lives only in the ground coupling, where the row carries 2x
    // the bare element and the column sqrt(2)x
    const int nd = basis.dim();
    Eigen::MatrixXcd asym = h - h.transpose();
    CHECK(asym.bottomRightCorner(nd - 1, nd - 1).cwiseAbs().maxCoeff() < 1e-14);
    int coupled = 0;
    for (int j = 1; j < nd; ++j) {
        if (std::abs(h(j, 0)) < 1e-12) continue;
        ++coupled;
        CHECK(std::abs(h(0, j) - std::sqrt(2.0) * h(j, 0)) < 1e-12);
    }
    CHECK(coupled > 0);

    Eigen::MatrixXd w = -(h - h0f).imag() / eta;
    CHECK((h - h0f).real().cwiseAbs().maxCoeff() < 1e-14);
    // absorber never touches the ground amplitude
    CHECK(w.row(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(w.col(0).cwiseAbs().maxCoeff() == 0.0);

    // block structure: same-l entries match the quadratic overlap, cross-l
    // entries vanish
    const auto& refs = basis.channel_virt[0];
    auto w0 = cap_quadratic_matrix(grid, basis.virtuals.by_l[0], 12.0);
    auto w1 = cap_quadratic_matrix(grid, basis.virtuals.by_l[1], 12.0);
    for (size_t i = 0; i < refs.size(); ++i) {
        for (size_t j = 0; j < refs.size(); ++j) {
            double expect = 0;
            if (refs[i].l == refs[j].l)
                expect = (refs[i].l == 0 ? w0 : w1)(refs[i].j, refs[j].j);
            CHECK(w(basis.index(0, i), basis.index(0, j)) == doctest::Approx(expect));
        }
    }

    // eigenvalues of the absorber block are nonnegative
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        w.bottomRightCorner(basis.dim() - 1, basis.dim() - 1));
    CHECK(es.eigenvalues().minCoeff() > -1e-12);

    // velocity-gauge matrices are rejected
    auto mats_v = build_cis_matrices(basis, Gauge::Velocity);
    CHECK_THROWS_AS((void)dressed_cis_matrix(basis, mats_v, f, eta, 12.0), ConfigError);
}

TEST_CASE("quasistatic rate models") {
    const double pi = 3.14159265358979323846;

    SUBCASE("cycle average closed forms") {
        // rate = c |F|  ->  (2/pi) c f;  rate = c F^2  ->  c f^2 / 2
        auto lin = [](double f) { return 3.0 * f; };
        auto quad = [](double f) { return 3.0 * f * f; };
        CHECK(cycle_averaged_rate(lin, 0.7) == doctest::Approx(2.0 * 3.0 * 0.7 / pi).epsilon(1e-12));
        CHECK(cycle_averaged_rate(quad, 0.7) == doctest::Approx(0.5 * 3.0 * 0.49).epsilon(1e-12));
    }

    SUBCASE("survival under a constant field") {
        std::vector<double> fs = {0.2, 0.4, 0.6, 0.8, 1.0};
        std::vector<double> gs;
        for (double f : fs) gs.push_back(0.05 * f); // linear rate: pchip is exact
        auto field = [](double) { return 0.5; };
        double p = tunneling_survival(field, 0.0, 30.0, fs, gs);
        CHECK(p == doctest::Approx(std::exp(-0.05 * 0.5 * 30.0)).epsilon(1e-10));
    }

    SUBCASE("survival over full cycles of a cosine field") {
        std::vector<double> fs = {0.2, 0.4, 0.6, 0.8, 1.0};
        std::vector<double> gs;
        for (double f : fs) gs.push_back(0.05 * f);
        const double w = 0.31;
        auto field = [&](double t) { return 0.8 * std::cos(w * t); };
        // int |cos| over one period is 4/w
        double expect = std::exp(-0.05 * 0.8 * 4.0 / w);
        double p = tunneling_survival(field, 0.0, 2.0 * pi / w, fs, gs);
        CHECK(p == doctest::Approx(expect).epsilon(1e-7));
    }

    SUBCASE("monotone interpolation stays monotone and clamps") {
        std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
        std::vector<double> y = {0.0, 0.1, 0.5, 2.5, 2.6};
        Pchip p(x, y);
        double prev = -1;
        for (int i = 0; i <= 400; ++i) {
            double val = p(4.0 * i / 400);
            CHECK(val >= prev - 1e-12);
            prev = val;
        }
        CHECK(p(-3.0) == 0.0);
        CHECK(p(9.0) == 2.6);
        for (size_t i = 0; i < x.size(); ++i) CHECK(p(x[i]) == doctest::Approx(y[i]));
    }

    SUBCASE("quadrature and line fit helpers") {
        auto ex = [](double t) { return std::exp(t); };
        CHECK(gl_integrate(ex, 0.0, 1.0, 32) == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-14));
        CHECK(adaptive_simpson(ex, 0.0, 1.0, 1e-13) ==
              doctest::Approx(std::exp(1.0) - 1).epsilon(1e-12));
        std::vector<double> xs = {0, 1, 2, 3}, ys = {1, 3, 5, 7};
        auto [m, b] = fit_line(xs, ys);
        CHECK(m == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(b == doctest::Approx(1.0).epsilon(1e-14));
    }
}
