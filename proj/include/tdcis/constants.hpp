#pragma once

#include <cmath>

// Atomic units are used internally everywhere.  Laboratory quantities cross
// this table exactly once, on the way in (config parsing) or out (reports).
namespace tdcis::units {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double hartree_ev   = 27.211386245988;
inline constexpr double bohr_cm      = 5.29177210903e-9;
inline constexpr double bohr_nm      = 5.29177210903e-2;
inline constexpr double au_time_s    = 2.4188843265857e-17;
inline constexpr double au_time_fs   = 2.4188843265857e-2;
inline constexpr double au_time_as   = 24.188843265857;
inline constexpr double hbar_ev_fs   = hartree_ev * au_time_fs; // 0.65821196...
inline constexpr double c_au         = 137.035999084;

// Intensity convention: I[W/cm^2] = intensity_au_wcm2 * F0^2 with F0 the peak
// electric field in a.u.  This is the convention entering the Keldysh
// parameter and the ponderomotive energy U_p = I/(4 omega^2).
inline constexpr double intensity_au_wcm2 = 3.50944758e16;

// Gaussian time-bandwidth product: FWHM(omega) * FWHM(t) for a Gaussian
// envelope, quoted at the documented precision used in peak-position checks.
inline constexpr double gaussian_tbp = 2.765;

inline double ev_to_au(double e)    { return e / hartree_ev; }
inline double au_to_ev(double e)    { return e * hartree_ev; }
inline double fs_to_au(double t)    { return t / au_time_fs; }
inline double au_to_fs(double t)    { return t * au_time_fs; }
inline double as_to_au(double t)    { return t / au_time_as; }
inline double au_to_as(double t)    { return t * au_time_as; }
inline double nm_to_au(double x)    { return x / bohr_nm; }
inline double cm_to_au(double x)    { return x / bohr_cm; }

inline double wcm2_to_au(double i)  { return i / intensity_au_wcm2; }
inline double au_to_wcm2(double i)  { return i * intensity_au_wcm2; }
// peak field from intensity and back
inline double wcm2_to_field(double i) { return std::sqrt(wcm2_to_au(i)); }
inline double field_to_wcm2(double f) { return au_to_wcm2(f * f); }

// cross sections: sigma^(N) carries cm^{2N} s^{N-1}
inline double sigma1_au_to_cm2(double s)    { return s * bohr_cm * bohr_cm; }
inline double sigma2_au_to_cm4s(double s) {
    const double a2 = bohr_cm * bohr_cm;
    return s * a2 * a2 * au_time_s;
}

// photon flux j = I/omega: a.u. -> photons / (cm^2 s)
inline double flux_au_to_cgs(double j) { return j / (bohr_cm * bohr_cm * au_time_s); }

} // namespace tdcis::units
