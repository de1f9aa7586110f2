#include "tdcis/analysis.hpp"

#include "tdcis/errors.hpp"
#include "tdcis/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace tdcis {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.6931471805599453;
} // namespace

double keldysh(double intensity, double omega, double ip) {
    require_config(intensity > 0 && omega > 0 && ip > 0, "keldysh: inputs must be positive");
    const double direct = 2.0 * omega * std::sqrt(ip / (2.0 * intensity));
    const double u_p = intensity / (4.0 * omega * omega);
    const double pond = std::sqrt(ip / (2.0 * u_p));
    require_numeric(std::abs(direct - pond) <= 1e-12 * direct,
                    "keldysh: formula cross-check failed");
    return direct;
}

double cycle_intensity(const Pulse& pulse, double t) {
    const double f = pulse.params().f0 * pulse.envelope(t);
    return units::c_au / (8.0 * kPi) * f * f;
}

double photon_flux(const Pulse& pulse, double t) {
    return cycle_intensity(pulse, t) / pulse.params().omega;
}

double fluence(const Pulse& pulse, int n) {
    require_config(n >= 1, "fluence: order must be >= 1");
    const double f0 = pulse.params().f0;
    const double omega = pulse.params().omega;
    const double tau = pulse.params().fwhm;
    const double j0 = units::c_au / (8.0 * kPi) * f0 * f0 / omega;
    if (n == 1) return j0 * tau * std::sqrt(kPi / (4.0 * kLn2));
    if (n == 2) return j0 * j0 * tau * std::sqrt(kPi / (8.0 * kLn2));
    auto jn = [&](double t) { return std::pow(photon_flux(pulse, t), n); };
    double peak = std::pow(j0, n);
    if (peak <= 0) return 0.0;
    return adaptive_simpson(jn, pulse.t_start(), pulse.t_end(), 1e-13 * peak * tau);
}

RateHistory rate_solve(const std::vector<double>& sigma, const Pulse& pulse, bool depletion,
                       int n_steps) {
    require_config(!sigma.empty(), "rate_solve: need at least one cross section");
    for (double s : sigma) require_config(s >= 0, "rate_solve: negative cross section");
    require_config(n_steps >= 2, "rate_solve: too few steps");

    const int n_ord = static_cast<int>(sigma.size());
    const double t0 = pulse.t_start(), t1 = pulse.t_end();
    const double h = (t1 - t0) / n_steps;

    // state y = (P0, P_1, ..., P_K)
    std::vector<double> y(n_ord + 1, 0.0);
    y[0] = 1.0;
    auto deriv = [&](double t, const std::vector<double>& s, std::vector<double>& d) {
        const double j = photon_flux(pulse, t);
        const double p0 = depletion ? s[0] : 1.0;
        double loss = 0;
        double jn = 1.0;
        for (int k = 0; k < n_ord; ++k) {
            jn *= j;
            const double rate = sigma[k] * jn * p0;
            d[k + 1] = rate;
            loss += rate;
        }
        d[0] = depletion ? -loss : 0.0;
    };

    RateHistory out;
    out.t.reserve(n_steps + 1);
    out.p0.reserve(n_steps + 1);
    out.p_n.assign(n_ord, {});
    auto record = [&](double t) {
        out.t.push_back(t);
        out.p0.push_back(y[0]);
        for (int k = 0; k < n_ord; ++k) out.p_n[k].push_back(y[k + 1]);
    };
    record(t0);

    std::vector<double> k1(n_ord + 1), k2(n_ord + 1), k3(n_ord + 1), k4(n_ord + 1),
        tmp(n_ord + 1);
    for (int step = 0; step < n_steps; ++step) {
        const double t = t0 + step * h;
        deriv(t, y, k1);
        for (int i = 0; i <= n_ord; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        deriv(t + 0.5 * h, tmp, k2);
        for (int i = 0; i <= n_ord; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        deriv(t + 0.5 * h, tmp, k3);
        for (int i = 0; i <= n_ord; ++i) tmp[i] = y[i] + h * k3[i];
        deriv(t + h, tmp, k4);
        for (int i = 0; i <= n_ord; ++i)
            y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        record(t0 + (step + 1) * h);
    }
    return out;
}

CrossSection cross_section_from_yield(double p_n, double fluence_n, int n) {
    require_config(n >= 1, "cross section: order must be >= 1");
    require_config(p_n >= 0, "cross section: negative yield");
    require_numeric(fluence_n > 0, "cross section: zero fluence, sigma undefined");
    CrossSection cs;
    cs.order = n;
    cs.value_au = p_n / fluence_n;
    cs.value_cgs =
        cs.value_au * std::pow(units::bohr_cm * units::bohr_cm, n) *
        std::pow(units::au_time_s, n - 1);
    cs.perturbative = (p_n <= 0.05);
    return cs;
}

void validate(const IonizationRecord& rec) {
    require_numeric(rec.omega_ev > 0 && rec.intensity_wcm2 > 0 && rec.tau_fs > 0,
                    "ionization record: nonpositive pulse parameter");
    double total = 0;
    for (double p : rec.p_n) {
        require_numeric(p >= 0, "ionization record: negative yield");
        total += p;
    }
    require_numeric(total <= 1.0 + 1e-12, "ionization record: yields exceed unity");
}

OrderFit order_fit(const std::vector<double>& intensity, const std::vector<double>& yield) {
    require_config(intensity.size() == yield.size(), "order fit: size mismatch");
    require_config(intensity.size() >= 3, "order fit: need at least 3 points");
    const int n = static_cast<int>(intensity.size());
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        require_config(intensity[i] > 0 && yield[i] > 0,
                       "order fit: log-log needs positive data");
        x[i] = std::log(intensity[i]);
        y[i] = std::log(yield[i]);
    }
    auto [slope, intercept] = fit_line(x, y);

    double xbar = 0;
    for (double v : x) xbar += v;
    xbar /= n;
    double sxx = 0, ss_res = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        const double r = y[i] - (slope * x[i] + intercept);
        ss_res += r * r;
    }
    OrderFit fit;
    fit.slope = slope;
    fit.intercept = intercept;
    fit.stderr_slope = (n > 2) ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
    return fit;
}

OrderFit order_fit(const std::vector<IonizationRecord>& records, int n) {
    require_config(n >= 1, "order fit: order must be >= 1");
    std::vector<double> intensity, yield;
    for (const auto& rec : records) {
        require_config(static_cast<int>(rec.p_n.size()) >= n,
                       "order fit: record lacks the requested order");
        intensity.push_back(rec.intensity_wcm2);
        yield.push_back(rec.p_n[n - 1]);
    }
    return order_fit(intensity, yield);
}

std::vector<double> two_step_sigma2(const std::vector<double>& omega,
                                    const std::vector<double>& sigma1, int l_intermediate,
                                    double e_bind) {
    require_config(omega.size() == sigma1.size() && !omega.empty(),
                   "two-step model: grid/curve mismatch");
    require_config(l_intermediate >= 0, "two-step model: negative angular momentum");
    std::vector<double> out(omega.size());
    const double expo = -(l_intermediate + 3.5);
    double peak = 0;
    for (size_t i = 0; i < omega.size(); ++i) {
        const double e_kin = 2.0 * omega[i] - e_bind;
        require_config(e_kin > 0, "two-step model: photoelectron energy not positive");
        require_config(sigma1[i] >= 0, "two-step model: negative cross section");
        out[i] = sigma1[i] * std::pow(e_kin, expo);
        peak = std::max(peak, out[i]);
    }
    require_numeric(peak > 0, "two-step model: vanishing curve");
    for (double& v : out) v /= peak;
    return out;
}

double width_from_lifetime(double tau_fs) {
    require_config(tau_fs > 0, "lifetime must be positive");
    // hbar in eV*fs, rounded to the four digits used when quoting widths.
    return 0.6582 / tau_fs;
}

std::vector<double> multi_resonance_sigma2(const ResonanceModel& model,
                                           const std::vector<double>& e_grid) {
    require_config(!model.resonances.empty(), "resonance model: no resonances");
    for (const auto& r : model.resonances)
        require_config(r.gamma > 0, "resonance model: width must be positive");
    std::vector<double> out(e_grid.size());
    for (size_t i = 0; i < e_grid.size(); ++i) {
        std::complex<double> amp = 0;
        for (const auto& r : model.resonances)
            amp += r.num /
                   std::complex<double>(e_grid[i] - r.e_res + model.e_offset, 0.5 * r.gamma);
        out[i] = std::norm(amp);
    }
    return out;
}

} // namespace tdcis
