#pragma once

#include <vector>

namespace tdcis {

struct PulseParams {
    double f0 = 0;       // peak field amplitude
    double omega = 0;    // carrier angular frequency
    double fwhm = 0;     // intensity FWHM of the envelope
    double cep = 0;      // carrier-envelope phase
    double t_center = 0; // envelope peak
};

// F(t) = f0 exp(-2 ln2 (t-tc)^2 / fwhm^2) cos(omega (t-tc) + cep)
// A(t) = -int_{-inf}^t F, with cumulative tables for int A and int A^2 so the
// free-electron phase can be evaluated to quadrature accuracy.
class Pulse {
  public:
    explicit Pulse(const PulseParams& p);

    const PulseParams& params() const { return par_; }
    double envelope(double t) const;
    double field(double t) const;
    double vector_potential(double t) const;
    double int_a(double t0, double t1) const;  // int_{t0}^{t1} A dt
    double int_a2(double t0, double t1) const; // int_{t0}^{t1} A^2 dt

    double t_start() const { return t_lo_; }
    double t_end() const { return t_hi_; }

    // worst free-electron phase change p_max*|dIA| + |dIA2|/2 when the
    // internal tables are rebuilt twice as fine, probed across the pulse
    double refine_phase_error(double p_max) const;

  private:
    Pulse(const PulseParams& p, int cells_per_scale);

    PulseParams par_;
    double t_lo_ = 0, t_hi_ = 0, h_ = 0;
    int cells_per_scale_ = 0;
    std::vector<double> a_;   // A at cell boundaries
    std::vector<double> ia_;  // cumulative int A at cell boundaries
    std::vector<double> ia2_; // cumulative int A^2 at cell boundaries

    double a_partial(int cell, double t) const;
    double cum_ia(double t) const;
    double cum_ia2(double t) const;
};

} // namespace tdcis
