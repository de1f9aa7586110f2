#include "tdcis/pulse.hpp"

#include "tdcis/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tdcis {

namespace {

// 7-point Gauss-Legendre on [-1, 1]
const double gl_x[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                        0.0,
                        0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
const double gl_w[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                        0.4179591836734694,
                        0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

constexpr double two_ln2 = 2.0 * 0.6931471805599453;

template <class F>
double gl7(F&& f, double a, double b) {
    double c = 0.5 * (a + b), s = 0.5 * (b - a), acc = 0;
    for (int i = 0; i < 7; ++i) acc += gl_w[i] * f(c + s * gl_x[i]);
    return acc * s;
}

} // namespace

Pulse::Pulse(const PulseParams& p) : Pulse(p, 32) {}

Pulse::Pulse(const PulseParams& p, int cells_per_scale) : par_(p), cells_per_scale_(cells_per_scale) {
    require_config(p.omega > 0, "pulse: omega must be positive");
    require_config(p.fwhm > 0, "pulse: fwhm must be positive");
    require_config(p.f0 >= 0, "pulse: negative amplitude");

    const double half_support = 5.5 * p.fwhm; // envelope < 1e-18 outside
    t_lo_ = p.t_center - half_support;
    t_hi_ = p.t_center + half_support;
    const double scale = std::min(2.0 * 3.14159265358979323846 / p.omega, p.fwhm);
    int n_cells = static_cast<int>(std::ceil((t_hi_ - t_lo_) / (scale / cells_per_scale)));
    h_ = (t_hi_ - t_lo_) / n_cells;

    a_.resize(n_cells + 1);
    ia_.resize(n_cells + 1);
    ia2_.resize(n_cells + 1);
    a_[0] = ia_[0] = ia2_[0] = 0.0;
    for (int c = 0; c < n_cells; ++c) {
        double lo = t_lo_ + c * h_, hi = lo + h_;
        a_[c + 1] = a_[c] - gl7([&](double t) { return field(t); }, lo, hi);
        auto a_in = [&](double t) { return a_[c] - gl7([&](double s) { return field(s); }, lo, t); };
        ia_[c + 1] = ia_[c] + gl7(a_in, lo, hi);
        ia2_[c + 1] = ia2_[c] + gl7([&](double t) { double a = a_in(t); return a * a; }, lo, hi);
    }
}

double Pulse::envelope(double t) const {
    double x = (t - par_.t_center) / par_.fwhm;
    return std::exp(-two_ln2 * x * x);
}

double Pulse::field(double t) const {
    if (t <= t_lo_ || t >= t_hi_) return 0.0;
    return par_.f0 * envelope(t) * std::cos(par_.omega * (t - par_.t_center) + par_.cep);
}

double Pulse::a_partial(int cell, double t) const {
    double lo = t_lo_ + cell * h_;
    return a_[cell] - gl7([&](double s) { return field(s); }, lo, t);
}

double Pulse::vector_potential(double t) const {
    if (t <= t_lo_) return 0.0;
    if (t >= t_hi_) return a_.back();
    int c = std::min<int>(static_cast<int>((t - t_lo_) / h_), static_cast<int>(a_.size()) - 2);
    return a_partial(c, t);
}

double Pulse::cum_ia(double t) const {
    if (t <= t_lo_) return 0.0;
    if (t >= t_hi_) return ia_.back() + a_.back() * (t - t_hi_);
    int c = std::min<int>(static_cast<int>((t - t_lo_) / h_), static_cast<int>(a_.size()) - 2);
    double lo = t_lo_ + c * h_;
    return ia_[c] + gl7([&](double s) { return a_partial(c, s); }, lo, t);
}

double Pulse::cum_ia2(double t) const {
    if (t <= t_lo_) return 0.0;
    if (t >= t_hi_) return ia2_.back() + a_.back() * a_.back() * (t - t_hi_);
    int c = std::min<int>(static_cast<int>((t - t_lo_) / h_), static_cast<int>(a_.size()) - 2);
    double lo = t_lo_ + c * h_;
    return ia2_[c] + gl7([&](double s) { double a = a_partial(c, s); return a * a; }, lo, t);
}

double Pulse::int_a(double t0, double t1) const { return cum_ia(t1) - cum_ia(t0); }

double Pulse::int_a2(double t0, double t1) const { return cum_ia2(t1) - cum_ia2(t0); }

double Pulse::refine_phase_error(double p_max) const {
    Pulse fine(par_, 2 * cells_per_scale_);
    double worst = 0;
    const int n_probe = 64;
    for (int i = 0; i <= n_probe; ++i) {
        double t = t_lo_ + (t_hi_ + 20.0 - t_lo_) * i / n_probe;
        double dia = int_a(t_lo_, t) - fine.int_a(t_lo_, t);
        double dia2 = int_a2(t_lo_, t) - fine.int_a2(t_lo_, t);
        worst = std::max(worst, std::abs(p_max * dia) + 0.5 * std::abs(dia2));
    }
    return worst;
}

} // namespace tdcis
