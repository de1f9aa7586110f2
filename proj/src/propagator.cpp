#include "tdcis/propagator.hpp"

#include "tdcis/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

namespace tdcis {

using cd = std::complex<double>;

void rk4_step(const HamiltonianOp& h, double t, double dt, Eigen::VectorXcd& psi) {
    const int n = h.dim();
    const cd mi(0.0, -1.0);
    Eigen::VectorXcd hv(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
    h.apply(t, psi, hv);
    k1 = mi * hv;
    tmp = psi + 0.5 * dt * k1;
    h.apply(t + 0.5 * dt, tmp, hv);
    k2 = mi * hv;
    tmp = psi + 0.5 * dt * k2;
    h.apply(t + 0.5 * dt, tmp, hv);
    k3 = mi * hv;
    tmp = psi + dt * k3;
    h.apply(t + dt, tmp, hv);
    k4 = mi * hv;
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void lanczos_step(const HamiltonianOp& h, double t, double dt, int krylov_dim,
                  Eigen::VectorXcd& psi) {
    const int n = h.dim();
    const double t_mid = t + 0.5 * dt;
    int m = std::min(krylov_dim, n);
    require_config(m >= 1, "lanczos: krylov dimension must be positive");

    const bool sym = h.complex_symmetric();
    // bilinear form: conjugated for hermitian-like operators, plain transpose
    // when an absorber makes the matrix complex symmetric
    auto form = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) -> cd {
        return sym ? cd(a.transpose() * b) : cd(a.dot(b));
    };

    const double nrm0 = psi.norm();
    if (nrm0 == 0.0) return;

    Eigen::MatrixXcd v(n, m + 1);
    Eigen::VectorXcd alpha(m), beta(m);
    cd scale0;
    if (sym) {
        cd q = std::sqrt(form(psi, psi));
        if (std::abs(q) < 1e-300) return; // quasi-null start; nothing sensible to do
        v.col(0) = psi / q;
        scale0 = q;
    } else {
        v.col(0) = psi / nrm0;
        scale0 = nrm0;
    }

    Eigen::VectorXcd w(n);
    int used = m;
    for (int j = 0; j < m; ++j) {
        h.apply(t_mid, v.col(j), w);
        alpha[j] = form(v.col(j), w);
        w -= alpha[j] * v.col(j);
        if (j > 0) w -= beta[j - 1] * v.col(j - 1);
        cd b = sym ? std::sqrt(form(w, w)) : cd(w.norm());
        beta[j] = b;
        if (std::abs(b) < 1e-18) { used = j + 1; break; }
        v.col(j + 1) = w / b;
    }

    Eigen::MatrixXcd tmat = Eigen::MatrixXcd::Zero(used, used);
    for (int j = 0; j < used; ++j) {
        tmat(j, j) = alpha[j];
        if (j + 1 < used) { tmat(j + 1, j) = beta[j]; tmat(j, j + 1) = beta[j]; }
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(tmat);
    require_numeric(es.info() == Eigen::Success, "lanczos: small eigenproblem failed");
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(used);
    e1[0] = 1.0;
    Eigen::VectorXcd y = es.eigenvectors().partialPivLu().solve(e1);
    for (int j = 0; j < used; ++j)
        y[j] *= std::exp(cd(0.0, -dt) * es.eigenvalues()[j]);
    y = es.eigenvectors() * y;
    psi = scale0 * (v.leftCols(used) * y);
}

void propagate(const HamiltonianOp& h, Eigen::VectorXcd& psi, double t0, double t1,
               const PropagatorOptions& opt, const std::vector<double>& sample_times,
               const SampleHook& hook) {
    require_config(opt.dt > 0, "propagate: dt must be positive");
    require_config(t1 >= t0, "propagate: t1 < t0");
    require_config(psi.size() == h.dim(), "propagate: state size mismatch");

    std::vector<double> marks;
    for (double s : sample_times)
        if (s >= t0 && s <= t1) marks.push_back(s);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    if (marks.empty() || marks.back() != t1) marks.push_back(t1);

    double t = t0;
    if (hook && !marks.empty() && marks.front() == t0) {
        hook(t0, psi);
        marks.erase(marks.begin());
        if (marks.empty()) return;
    }
    for (double mark : marks) {
        double span = mark - t;
        if (span > 0) {
            int steps = std::max(1, static_cast<int>(std::ceil(span / opt.dt - 1e-12)));
            double dt = span / steps;
            for (int s = 0; s < steps; ++s) {
                if (opt.method == Integrator::Rk4)
                    rk4_step(h, t + s * dt, dt, psi);
                else
                    lanczos_step(h, t + s * dt, dt, opt.krylov_dim, psi);
            }
            t = mark;
        }
        if (hook && mark != t1) hook(mark, psi);
        else if (hook && mark == t1) {
            // only fire at the right endpoint when it was explicitly requested
            bool requested = std::find(sample_times.begin(), sample_times.end(), t1)
                             != sample_times.end();
            if (requested) hook(t1, psi);
        }
    }
}

} // namespace tdcis
