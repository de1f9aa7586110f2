#include "tdcis/splitting.hpp"

#include "tdcis/errors.hpp"
#include "tdcis/propagator.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace tdcis {

namespace {

using Cplx = std::complex<double>;

// grid-column matrix of one l block of virtuals
Eigen::MatrixXd virtual_columns(const CisBasis& basis, int l) {
    const auto& states = basis.virtuals.by_l[l];
    const int n = basis.grid.n();
    Eigen::MatrixXd m(n, states.size());
    for (size_t j = 0; j < states.size(); ++j)
        for (int k = 0; k < n; ++k) m(k, j) = states[j].u[k];
    return m;
}

} // namespace

Splitter::Splitter(const CisBasis& basis, double r_c, double delta)
    : basis_(&basis), r_c_(r_c), delta_(delta) {
    require_config(delta > 0, "Splitter: width must be positive");
    require_config(r_c >= 20.0 * delta, "Splitter: sigmoid tail reaches the origin");
    require_config(r_c <= basis.grid.r_max - 5.0 * delta,
                   "Splitter: split region extends past the box");
    const auto& g = basis.grid;
    s_.resize(g.n());
    for (int k = 0; k < g.n(); ++k) s_[k] = 1.0 / (1.0 + std::exp(-(g.r[k] - r_c) / delta));

    const int n_l = static_cast<int>(basis.virtuals.by_l.size());
    smat_.resize(n_l);
    for (int l = 0; l < n_l; ++l) {
        Eigen::MatrixXd u = virtual_columns(basis, l);
        Eigen::VectorXd ws(g.n());
        for (int k = 0; k < g.n(); ++k) ws(k) = g.w[k] * s_[k];
        smat_[l] = u.transpose() * ws.asDiagonal() * u;
    }
}

SplitEvent Splitter::split(double t, Eigen::VectorXcd& alpha) const {
    const CisBasis& b = *basis_;
    require_config(alpha.size() == b.dim(), "Splitter: amplitude size mismatch");
    const int n = b.grid.n();
    const int n_l = static_cast<int>(b.virtuals.by_l.size());

    SplitEvent ev;
    ev.t = t;
    ev.packets.resize(b.n_channels());
    for (int ch = 0; ch < b.n_channels(); ++ch) {
        ev.packets[ch].resize(n_l);
        const auto& refs = b.channel_virt[ch];
        size_t pos = 0;
        while (pos < refs.size()) {
            const int l = refs[pos].l;
            size_t end = pos;
            while (end < refs.size() && refs[end].l == l) ++end;
            const int cnt = static_cast<int>(end - pos);

            Eigen::VectorXcd beta(cnt);
            for (int i = 0; i < cnt; ++i) {
                Cplx acc = 0;
                for (int j = 0; j < cnt; ++j)
                    acc += smat_[l](refs[pos + i].j, refs[pos + j].j) *
                           alpha(b.index(ch, static_cast<int>(pos) + j));
                beta(i) = acc;
            }
            Eigen::VectorXcd f = Eigen::VectorXcd::Zero(n);
            for (int i = 0; i < cnt; ++i) {
                const int idx = b.index(ch, static_cast<int>(pos) + i);
                alpha(idx) -= beta(i);
                ev.removed_norm2 += std::norm(beta(i));
                const auto& u = b.virt(refs[pos + i]).u;
                for (int k = 0; k < n; ++k) f(k) += beta(i) * u[k];
            }
            ev.packets[ch][l] = std::move(f);
            pos = end;
        }
    }
    return ev;
}

namespace {

// i dU/dt = [-diag(eps) - c(t) hole_dip^T] U, columnwise
class IonHamiltonian final : public HamiltonianOp {
  public:
    IonHamiltonian(const Eigen::VectorXd& eps, const Eigen::MatrixXd& q_t, Gauge gauge,
                   const Pulse* pulse)
        : meps_((-eps).cast<Cplx>()), q_t_(q_t.cast<Cplx>()), gauge_(gauge), pulse_(pulse) {}

    int dim() const override { return static_cast<int>(meps_.size()); }

    void apply(double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const override {
        out.array() = meps_.array() * in.array();
        Cplx c = gauge_ == Gauge::Velocity ? Cplx(0, -pulse_->vector_potential(t))
                                           : Cplx(pulse_->field(t), 0);
        if (c != 0.0 && q_t_.size() > 0) out.noalias() -= c * (q_t_ * in);
    }

  private:
    Eigen::VectorXcd meps_;
    Eigen::MatrixXcd q_t_;
    Gauge gauge_;
    const Pulse* pulse_;
};

} // namespace

std::vector<Eigen::MatrixXcd> ion_evolution(const CisBasis& basis, const CisMatrices& mats,
                                            const Pulse& pulse, const std::vector<double>& times,
                                            double t_final, bool channel_mixing, double dt) {
    if (times.empty()) return {};
    require_config(dt > 0, "ion_evolution: step must be positive");
    for (size_t i = 1; i < times.size(); ++i)
        require_config(times[i] > times[i - 1], "ion_evolution: times must increase");
    require_config(times.back() <= t_final, "ion_evolution: times past the final time");

    const int nc = basis.n_channels();
    Eigen::VectorXd eps(nc);
    for (int i = 0; i < nc; ++i) eps(i) = basis.channels[i].energy;
    Eigen::MatrixXd q_t = Eigen::MatrixXd::Zero(nc, nc);
    if (channel_mixing) q_t = mats.hole_dip.transpose();
    IonHamiltonian h(eps, q_t, mats.gauge, &pulse);

    // V(t) = U(t, times[0]); each requested operator is V(T) V_k^dagger
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(nc, nc);
    std::vector<Eigen::MatrixXcd> snaps;
    snaps.reserve(times.size());
    snaps.push_back(v);

    double t = times.front();
    auto advance = [&](double target) {
        const double span = target - t;
        if (span <= 0) return;
        const int steps = std::max(1, static_cast<int>(std::ceil(span / dt - 1e-12)));
        const double step = span / steps;
        for (int s = 0; s < steps; ++s) {
            for (int col = 0; col < nc; ++col) {
                Eigen::VectorXcd psi = v.col(col);
                lanczos_step(h, t, step, nc, psi);
                v.col(col) = psi;
            }
            t += step;
        }
        t = target;
    };
    for (size_t k = 1; k < times.size(); ++k) {
        advance(times[k]);
        snaps.push_back(v);
    }
    advance(t_final);

    std::vector<Eigen::MatrixXcd> out;
    out.reserve(times.size());
    for (const auto& vk : snaps) out.push_back(v * vk.adjoint());
    return out;
}

} // namespace tdcis
