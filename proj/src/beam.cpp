#include "tdcis/beam.hpp"

#include "tdcis/errors.hpp"
#include "tdcis/numerics.hpp"

#include <cmath>

namespace tdcis {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.6931471805599453;
constexpr double kUMax = 6.0; // fluence floor F0 e^{-36}

void check(const BeamProfile& b) {
    require_config(b.w0 > 0 && b.z0 > 0, "beam: waist and Rayleigh length must be positive");
    require_config(b.n_phot > 0, "beam: photon number must be positive");
    require_config(b.z_min < b.z_max, "beam: empty axial range");
}
} // namespace

BeamProfile make_beam(double w0, double z0, double n_phot) {
    return make_beam(w0, z0, n_phot, -3.0 * z0, 3.0 * z0);
}

BeamProfile make_beam(double w0, double z0, double n_phot, double z_min, double z_max) {
    BeamProfile b{w0, z0, n_phot, z_min, z_max};
    check(b);
    return b;
}

double waist2(const BeamProfile& beam, double z) {
    const double s = z / beam.z0;
    return beam.w0 * beam.w0 * (1.0 + s * s);
}

double peak_fluence(const BeamProfile& beam, double z) {
    return 4.0 * beam.n_phot * kLn2 / (kPi * waist2(beam, z));
}

double volume_signal(const std::function<double(double)>& s_of_f, const BeamProfile& beam,
                     int n_z, int n_u) {
    check(beam);
    require_config(n_z >= 2 && n_u >= 2, "beam: quadrature orders too small");

    auto slice = [&](double z) {
        const double w2 = waist2(beam, z);
        const double f0 = peak_fluence(beam, z);
        auto inner = [&](double u) { return u * s_of_f(f0 * std::exp(-u * u)); };
        return 2.0 * kPi * w2 * gl_integrate(inner, 0.0, kUMax, n_u);
    };
    return gl_integrate(slice, beam.z_min, beam.z_max, n_z);
}

double volume_signal(const std::vector<double>& f_samples, const std::vector<double>& s_samples,
                     const BeamProfile& beam, int n_z, int n_u) {
    check(beam);
    require_config(f_samples.size() == s_samples.size() && f_samples.size() >= 2,
                   "beam: signal curve needs matching F/S samples");

    // the axial maximum of F0(z) is at the point of the range nearest the focus
    double z_near = 0.0;
    if (beam.z_min > 0) z_near = beam.z_min;
    if (beam.z_max < 0) z_near = beam.z_max;
    const double f_need = peak_fluence(beam, z_near);
    require_config(f_samples.front() <= 1e-12 * f_need,
                   "beam: signal curve must start at zero fluence");
    require_config(f_samples.back() >= f_need * (1.0 - 1e-12),
                   "beam: signal curve does not reach the peak fluence");

    Pchip curve(f_samples, s_samples);
    return volume_signal([&](double f) { return curve(f); }, beam, n_z, n_u);
}

} // namespace tdcis
