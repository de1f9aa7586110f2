#pragma once

#include "tdcis/constants.hpp"
#include "tdcis/pulse.hpp"

#include <complex>
#include <vector>

namespace tdcis {

// Adiabaticity parameter gamma = 2 omega sqrt(I_p / (2 I)); evaluated both
// directly and through the ponderomotive form sqrt(I_p / (2 U_p)),
// U_p = I/(4 omega^2), which must agree to rounding.  All inputs atomic units
// with I = F0^2.
double keldysh(double intensity, double omega, double ip);

// cycle-averaged intensity of the pulse at time t, I(t) = (c/8pi) F0^2 env^2,
// and the photon number flux j(t) = I(t)/omega (both atomic units)
double cycle_intensity(const Pulse& pulse, double t);
double photon_flux(const Pulse& pulse, double t);

// N-photon fluence  F^(N) = int j(t)^N dt.  Closed forms for the Gaussian
// envelope at N = 1, 2; adaptive quadrature above.
double fluence(const Pulse& pulse, int n);

// one atom exposed to the pulse: dP0/dt = -sum_N sigma_N j^N P0 and
// dP_N/dt = +sigma_N j^N P0, integrated with RK4.  sigma[k] is the
// generalized cross section for (k+1)-photon absorption, atomic units.
// with depletion switched off P0 is held at 1 and P_N = sigma_N F^(N).
struct RateHistory {
    std::vector<double> t;
    std::vector<double> p0;
    std::vector<std::vector<double>> p_n; // [order-1][time index]

    double final_p0() const { return p0.back(); }
    double final_yield(int n) const { return p_n.at(n - 1).back(); }
};

RateHistory rate_solve(const std::vector<double>& sigma, const Pulse& pulse, bool depletion,
                       int n_steps = 4000);

// generalized cross section sigma^(N) = P_N / F^(N); the cgs value carries
// the textbook units cm^{2N} s^{N-1}
struct CrossSection {
    double value_au = 0;
    double value_cgs = 0;
    int order = 0;
    bool perturbative = true; // false once P_N > 0.05
};

CrossSection cross_section_from_yield(double p_n, double fluence_n, int n);

// single run of the intensity scan: lab-unit pulse parameters plus the
// per-order (and optionally per-channel) ionization probabilities
struct IonizationRecord {
    double omega_ev = 0;
    double intensity_wcm2 = 0;
    double tau_fs = 0;
    std::vector<double> p_n;
    std::vector<double> by_channel;
};

void validate(const IonizationRecord& rec);

// least-squares slope of ln P vs ln I; stderr_slope from the residuals
struct OrderFit {
    double slope = 0;
    double intercept = 0;
    double stderr_slope = 0;
};

OrderFit order_fit(const std::vector<double>& intensity, const std::vector<double>& yield);
OrderFit order_fit(const std::vector<IonizationRecord>& records, int n);

// two-step model of the two-photon cross section: resonant first step given
// by sigma1(omega), second (continuum-continuum) step entering through the
// photoelectron-energy factor E_kin^{-l-7/2} with E_kin = 2 omega - e_bind
// (the final photoelectron energy; e_bind and the grid share one unit).
// The returned curve is scaled to unit maximum.
std::vector<double> two_step_sigma2(const std::vector<double>& omega,
                                    const std::vector<double>& sigma1, int l_intermediate,
                                    double e_bind);

// coherent sum over intermediate resonances:
//   sigma2(E) = | sum_M num_M / (E - E_M + i Gamma_M/2 + e_offset) |^2
struct Resonance {
    double e_res = 0;
    double gamma = 0;
    std::complex<double> num{1.0, 0.0};
};

struct ResonanceModel {
    std::vector<Resonance> resonances;
    double e_offset = 0;
};

double width_from_lifetime(double tau_fs);
std::vector<double> multi_resonance_sigma2(const ResonanceModel& model,
                                           const std::vector<double>& e_grid);

} // namespace tdcis
