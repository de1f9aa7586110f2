#include "doctest.h"

#include "tdcis/beam.hpp"
#include "tdcis/errors.hpp"
#include "tdcis/numerics.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace tdcis;

namespace {
const double kPi = 3.14159265358979323846;
const double kLn2 = 0.6931471805599453;

double fluence_at(const BeamProfile& b, double rho, double z) {
    return peak_fluence(b, z) * std::exp(-rho * rho / waist2(b, z));
}
} // namespace

TEST_CASE("beam geometry") {
    auto b = make_beam(2.0, 50.0, 1e11);
    CHECK(b.z_min == -150.0);
    CHECK(b.z_max == 150.0);
    CHECK(waist2(b, 0.0) == 4.0);
    CHECK(waist2(b, 50.0) == 8.0);
    CHECK(waist2(b, 100.0) == doctest::Approx(4.0 * 5.0).epsilon(1e-15));
    CHECK(peak_fluence(b, 0.0) == doctest::Approx(4e11 * kLn2 / (4 * kPi)).epsilon(1e-15));
    // on-axis fluence decreases away from the focus
    CHECK(peak_fluence(b, 10.0) < peak_fluence(b, 0.0));
    CHECK(peak_fluence(b, -80.0) < peak_fluence(b, -20.0));

    CHECK_THROWS_AS(make_beam(-1.0, 50.0, 1e11), ConfigError);
    CHECK_THROWS_AS(make_beam(2.0, 50.0, 0.0), ConfigError);
    CHECK_THROWS_AS(make_beam(2.0, 50.0, 1e11, 10.0, -10.0), ConfigError);
}

TEST_CASE("linear signal integrates in closed form") {
    // S = sigma F: every z-slice contributes sigma * 4 n ln2 regardless of
    // the local spot size, so the volume integral is proportional to the
    // slab thickness
    const double sigma = 3.7e-20;
    auto b = make_beam(1.5, 40.0, 2.4e12);
    double got = volume_signal([&](double f) { return sigma * f; }, b);
    double expect = sigma * 4.0 * 2.4e12 * kLn2 * (b.z_max - b.z_min);
    CHECK(got == doctest::Approx(expect).epsilon(1e-10));

    auto asym = make_beam(1.5, 40.0, 2.4e12, -13.0, 91.0);
    double got2 = volume_signal([&](double f) { return sigma * f; }, asym);
    CHECK(got2 == doctest::Approx(sigma * 4.0 * 2.4e12 * kLn2 * 104.0).epsilon(1e-10));

    CHECK(volume_signal([](double) { return 0.0; }, b) == 0.0);
}

TEST_CASE("quadratic signal against Monte Carlo") {
    auto b = make_beam(2.0, 30.0, 5e11);
    auto s2 = [](double f) { return 1e-40 * f * f; };
    double quad = volume_signal(s2, b);

    // plain 2-D Monte Carlo over (rho, z) with the cylindrical measure
    std::mt19937 rng(20260814u);
    const double rho_max = 6.0 * std::sqrt(waist2(b, b.z_max));
    std::uniform_real_distribution<double> uz(b.z_min, b.z_max), ur(0.0, rho_max);
    const long long n = 4'000'000;
    double acc = 0;
    for (long long i = 0; i < n; ++i) {
        double z = uz(rng), rho = ur(rng);
        acc += 2 * kPi * rho * s2(fluence_at(b, rho, z));
    }
    double mc = acc / n * (b.z_max - b.z_min) * rho_max;
    CHECK(quad == doctest::Approx(mc).epsilon(5e-3));
}

TEST_CASE("change of variables equals direct cylindrical quadrature") {
    auto b = make_beam(1.2, 25.0, 8e11, -40.0, 75.0);
    auto s = [](double f) { return 2.0e-20 * f + 3.0e-41 * f * f + 5.0e-62 * f * f * f; };

    double fast = volume_signal(s, b);

    auto slice = [&](double z) {
        const double w2 = waist2(b, z);
        const double rmax = 7.0 * std::sqrt(w2);
        auto rad = [&](double rho) { return 2 * kPi * rho * s(fluence_at(b, rho, z)); };
        return gl_integrate(rad, 0.0, rmax, 200);
    };
    double direct = gl_integrate(slice, b.z_min, b.z_max, 200);
    CHECK(fast == doctest::Approx(direct).epsilon(1e-3));
}

TEST_CASE("photon-number scaling keeps the signal order") {
    auto b1 = make_beam(2.0, 30.0, 1e11);
    auto b3 = make_beam(2.0, 30.0, 3e11);
    auto s2 = [](double f) { return 4e-41 * f * f; };
    double y1 = volume_signal(s2, b1);
    double y3 = volume_signal(s2, b3);
    CHECK(y3 == doctest::Approx(9.0 * y1).epsilon(1e-12));
}

TEST_CASE("sampled signal curves") {
    auto b = make_beam(2.0, 30.0, 5e11);
    const double sigma = 2.5e-20;
    const double fmax = peak_fluence(b, 0.0);

    std::vector<double> f(400), s(400);
    for (int i = 0; i < 400; ++i) {
        f[i] = fmax * 1.02 * i / 399;
        s[i] = sigma * f[i];
    }
    // monotone cubic interpolation reproduces linear data exactly
    double got = volume_signal(f, s, b);
    double expect = sigma * 4.0 * 5e11 * kLn2 * (b.z_max - b.z_min);
    CHECK(got == doctest::Approx(expect).epsilon(1e-9));

    SUBCASE("curve must cover the fluence range") {
        std::vector<double> f_short(f.begin(), f.begin() + 200),
            s_short(s.begin(), s.begin() + 200);
        CHECK_THROWS_AS(volume_signal(f_short, s_short, b), ConfigError);
        std::vector<double> f_off = f;
        for (double& x : f_off) x += 0.2 * fmax;
        CHECK_THROWS_AS(volume_signal(f_off, s, b), ConfigError);
    }

    SUBCASE("range away from the focus needs less coverage") {
        auto far = make_beam(2.0, 30.0, 5e11, 60.0, 90.0);
        // F0 at z=60 is fmax/5; a curve reaching only fmax/4 suffices
        std::vector<double> f2(200), s2(200);
        for (int i = 0; i < 200; ++i) {
            f2[i] = 0.25 * fmax * i / 199;
            s2[i] = sigma * f2[i];
        }
        double y = volume_signal(f2, s2, far);
        CHECK(y == doctest::Approx(sigma * 4.0 * 5e11 * kLn2 * 30.0).epsilon(1e-9));
    }
}
