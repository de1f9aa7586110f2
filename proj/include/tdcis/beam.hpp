#pragma once

#include <functional>
#include <vector>

namespace tdcis {

// Gaussian focus: w(z)^2 = w0^2 (1 + (z/z0)^2), on-axis peak fluence
// F0(z) = 4 n_phot ln2 / (pi w(z)^2), radial profile F = F0(z) e^{-rho^2/w^2}.
struct BeamProfile {
    double w0 = 0;     // waist
    double z0 = 0;     // Rayleigh length
    double n_phot = 0; // photons per pulse
    double z_min = 0, z_max = 0;
};

// acceptance range defaults to +-3 z0
BeamProfile make_beam(double w0, double z0, double n_phot);
BeamProfile make_beam(double w0, double z0, double n_phot, double z_min, double z_max);

double waist2(const BeamProfile& beam, double z);
double peak_fluence(const BeamProfile& beam, double z);

// focal-volume integral of a single-atom signal S(F):
//   signal = int dz int 2 pi rho d rho S(F(rho, z))
// evaluated after the change of variables u = sqrt(ln(F0(z)/F)), which turns
// the inner integral into 2 pi w^2(z) int_0^umax u S(F0 e^{-u^2}) du with the
// logarithmic edge removed; the truncation at umax = 6 leaves fluences below
// F0 e^{-36} out, so S must vanish with F for the volume integral to exist.
double volume_signal(const std::function<double(double)>& s_of_f, const BeamProfile& beam,
                     int n_z = 128, int n_u = 64);

// same, for a signal sampled on a fluence grid (monotone cubic interpolation);
// the samples must cover [0, max_z F0(z)]
double volume_signal(const std::vector<double>& f_samples, const std::vector<double>& s_samples,
                     const BeamProfile& beam, int n_z = 128, int n_u = 64);

} // namespace tdcis
