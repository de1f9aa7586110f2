#include "tdcis/pes.hpp"

#include "tdcis/angular.hpp"
#include "tdcis/errors.hpp"
#include "tdcis/threading.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace tdcis {

namespace {

using Cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

// composite Simpson weights over an odd-length uniform mesh
std::vector<double> simpson_weights(int n, double h) {
    std::vector<double> w(n, 0.0);
    for (int i = 0; i + 2 < n; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    return w;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0;
    for (size_t i = 0; i + 1 < x.size(); ++i)
        acc += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return acc;
}

} // namespace

double PesSpectrum::yield_total() const { return trapezoid(energy, dpde); }

std::vector<double> PesSpectrum::yield_by_channel() const {
    std::vector<double> out;
    out.reserve(dpde_by_channel.size());
    for (const auto& d : dpde_by_channel) out.push_back(trapezoid(energy, d));
    return out;
}

PesSpectrum volkov_synthesis(const CisBasis& basis, const CisMatrices& mats, const Pulse& pulse,
                             const std::vector<SplitEvent>& events, double t_final,
                             const PesParams& par) {
    require_config(mats.gauge == Gauge::Velocity,
                   "volkov_synthesis: velocity-gauge matrices required");
    require_config(par.n_energy >= 2, "volkov_synthesis: need at least two energies");
    require_config(par.n_theta >= 3 && par.n_theta % 2 == 1,
                   "volkov_synthesis: angle count must be odd (Simpson mesh)");
    require_config(par.e_min >= 0 && par.e_max > par.e_min,
                   "volkov_synthesis: bad energy window");
    require_config(!events.empty(), "volkov_synthesis: no split events");

    const int nc = basis.n_channels();
    const int np = par.n_energy, nt = par.n_theta;
    const int n = basis.grid.n();
    const int n_lv = static_cast<int>(basis.virtuals.by_l.size());

    std::vector<double> times;
    times.reserve(events.size());
    for (const auto& ev : events) {
        require_config(static_cast<int>(ev.packets.size()) == nc,
                       "volkov_synthesis: event/basis channel mismatch");
        times.push_back(ev.t);
    }

    PesSpectrum sp;
    sp.energy.resize(np);
    sp.theta.resize(nt);
    for (int i = 0; i < np; ++i)
        sp.energy[i] = par.e_min + (par.e_max - par.e_min) * i / (np - 1);
    for (int i = 0; i < nt; ++i) sp.theta[i] = kPi * i / (nt - 1);
    std::vector<double> p(np);
    for (int i = 0; i < np; ++i) p[i] = std::sqrt(2.0 * sp.energy[i]);

    std::vector<char> l_used(n_lv, 0);
    for (const auto& ev : events)
        for (const auto& ch : ev.packets)
            for (size_t l = 0; l < ch.size(); ++l)
                if (ch[l].size() > 0) {
                    require_config(ch[l].size() == n, "volkov_synthesis: packet size mismatch");
                    l_used[l] = 1;
                }

    // <p,l|packet> radial tables: row ip is j_l(p_ip r) r w on the nodes
    std::vector<Eigen::MatrixXd> b_tab(n_lv);
    for (int l = 0; l < n_lv; ++l) {
        if (!l_used[l]) continue;
        b_tab[l].resize(np, n);
        Eigen::MatrixXd& b = b_tab[l];
        parallel_for(np, [&](int ip) {
            for (int k = 0; k < n; ++k)
                b(ip, k) =
                    std::sph_bessel(unsigned(l), p[ip] * basis.grid.r[k]) * basis.grid.r[k] *
                    basis.grid.w[k];
        });
    }

    auto u_ops =
        ion_evolution(basis, mats, pulse, times, t_final, par.channel_mixing, par.ion_dt);

    // spherical harmonics at phi = 0 per channel m
    std::vector<Eigen::MatrixXcd> ytab(nc);
    for (int ch = 0; ch < nc; ++ch) {
        ytab[ch] = Eigen::MatrixXcd::Zero(n_lv, nt);
        const int m = basis.channels[ch].m;
        for (int l = std::abs(m); l < n_lv; ++l)
            for (int it = 0; it < nt; ++it) ytab[ch](l, it) = y_lm_theta(l, m, sp.theta[it]);
    }
    std::vector<Cplx> mil(n_lv); // (-i)^l
    mil[0] = 1.0;
    for (int l = 1; l < n_lv; ++l) mil[l] = mil[l - 1] * Cplx(0, -1);

    const double pref = std::sqrt(2.0 / kPi);
    std::vector<Eigen::MatrixXcd> amp(nc, Eigen::MatrixXcd::Zero(np, nt));
    Eigen::MatrixXcd phase(np, nt), g(np, nt);
    std::vector<double> cth(nt);
    for (int it = 0; it < nt; ++it) cth[it] = std::cos(sp.theta[it]);

    for (size_t iv = 0; iv < events.size(); ++iv) {
        const SplitEvent& ev = events[iv];
        const double dt_fin = t_final - ev.t;
        const double ia = pulse.int_a(ev.t, t_final);
        const double ia2 = pulse.int_a2(ev.t, t_final);
        for (int ip = 0; ip < np; ++ip) {
            const double base = 0.5 * p[ip] * p[ip] * dt_fin + 0.5 * ia2;
            for (int it = 0; it < nt; ++it)
                phase(ip, it) = std::exp(Cplx(0, -(base + p[ip] * cth[it] * ia)));
        }
        for (int i0 = 0; i0 < nc; ++i0) {
            g.setZero();
            bool any = false;
            for (int l = 0; l < static_cast<int>(ev.packets[i0].size()); ++l) {
                const Eigen::VectorXcd& f = ev.packets[i0][l];
                if (f.size() == 0) continue;
                Eigen::VectorXcd radial =
                    (b_tab[l] * f.real()).cast<Cplx>() + Cplx(0, 1) * (b_tab[l] * f.imag());
                g.noalias() += (mil[l] * radial) * ytab[i0].row(l);
                any = true;
            }
            if (!any) continue;
            for (int j = 0; j < nc; ++j) {
                const Cplx u = u_ops[iv](j, i0);
                if (u == 0.0) continue;
                amp[j].array() += (pref * u) * phase.array() * g.array();
            }
        }
    }

    sp.by_channel.assign(nc, Eigen::MatrixXd::Zero(np, nt));
    sp.total = Eigen::MatrixXd::Zero(np, nt);
    for (int j = 0; j < nc; ++j) {
        for (int ip = 0; ip < np; ++ip)
            for (int it = 0; it < nt; ++it)
                sp.by_channel[j](ip, it) = p[ip] * std::norm(amp[j](ip, it));
        sp.total += sp.by_channel[j];
    }

    auto wth = simpson_weights(nt, kPi / (nt - 1));
    sp.dpde_by_channel.assign(nc, std::vector<double>(np, 0.0));
    sp.dpde.assign(np, 0.0);
    for (int j = 0; j < nc; ++j) {
        for (int ip = 0; ip < np; ++ip) {
            double acc = 0;
            for (int it = 0; it < nt; ++it)
                acc += wth[it] * std::sin(sp.theta[it]) * sp.by_channel[j](ip, it);
            sp.dpde_by_channel[j][ip] = 2.0 * kPi * acc;
            sp.dpde[ip] += sp.dpde_by_channel[j][ip];
        }
    }
    return sp;
}

SplitRun propagate_with_splitting(const CisBasis& basis, const CisMatrices& mats,
                                  const Pulse& pulse, const Splitter& splitter, double cadence,
                                  double drain_time, const PropagatorOptions& opt) {
    require_config(cadence > 0, "propagate_with_splitting: cadence must be positive");
    require_config(drain_time >= 0, "propagate_with_splitting: negative drain time");
    const double t0 = pulse.t_start();
    const double t1 = pulse.t_end() + drain_time;

    SplitRun run;
    run.t_final = t1;
    run.alpha = Eigen::VectorXcd::Zero(basis.dim());
    run.alpha(0) = 1.0;

    std::function<double(double)> coef;
    if (mats.gauge == Gauge::Velocity)
        coef = [&pulse](double t) { return pulse.vector_potential(t); };
    else
        coef = [&pulse](double t) { return pulse.field(t); };
    CisHamiltonian h(mats, coef);

    std::vector<double> samples;
    for (double t = t0 + cadence; t < t1 - 1e-9; t += cadence) samples.push_back(t);
    samples.push_back(t1);

    propagate(h, run.alpha, t0, t1, opt, samples, [&](double t, Eigen::VectorXcd& a) {
        run.events.push_back(splitter.split(t, a));
    });
    return run;
}

} // namespace tdcis
