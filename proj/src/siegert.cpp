#include "tdcis/siegert.hpp"

#include "tdcis/angular.hpp"
#include "tdcis/errors.hpp"
#include "tdcis/numerics.hpp"
#include "tdcis/potential.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>

namespace tdcis {

namespace {

using Cplx = std::complex<double>;

uint64_t splitmix(uint64_t& s) {
    uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

Eigen::VectorXcd random_start(int n, unsigned seed) {
    uint64_t s = 0xd1b54a32d192ed03ull ^ seed;
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) {
        double re = double(splitmix(s) >> 11) * 0x1p-53 - 0.5;
        double im = double(splitmix(s) >> 11) * 0x1p-53 - 0.5;
        v(i) = Cplx(re, im);
    }
    v.normalize();
    return v;
}

// unconjugated (bilinear) overlap magnitude
double c_overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return std::abs(a.cwiseProduct(b).sum());
}

std::vector<EigPair> dense_eigs_near(const Eigen::MatrixXcd& h, Cplx shift, int n_want,
                                     double tol) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h, true);
    require_numeric(es.info() == Eigen::Success, "eigs_near: dense eigensolver failed");
    const int n = static_cast<int>(h.rows());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(es.eigenvalues()(a) - shift) < std::abs(es.eigenvalues()(b) - shift);
    });
    std::vector<EigPair> out;
    for (int i = 0; i < n_want; ++i) {
        EigPair p;
        p.value = es.eigenvalues()(order[i]);
        p.vector = es.eigenvectors().col(order[i]).normalized();
        p.residual = (h * p.vector - p.value * p.vector).norm() / (1.0 + std::abs(p.value));
        require_numeric(p.residual <= std::max(tol, 1e-8),
                        "eigs_near: dense eigenpair residual out of bounds");
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace

std::vector<EigPair> eigs_near(const Eigen::MatrixXcd& h, std::complex<double> shift, int n_want,
                               const EigOptions& opts) {
    const int n = static_cast<int>(h.rows());
    require_config(h.cols() == n, "eigs_near: matrix must be square");
    require_config(n_want >= 1 && n_want <= n, "eigs_near: bad eigenpair count");
    require_config(opts.tol > 0, "eigs_near: tolerance must be positive");

    if (n <= 320 || 4 * n_want >= n) return dense_eigs_near(h, shift, n_want, opts.tol);

    // shift-invert Arnoldi; the factorization is nudged off an exactly
    // singular shift
    Cplx sigma = shift;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    Eigen::VectorXcd probe;
    for (int attempt = 0;; ++attempt) {
        Eigen::MatrixXcd a = h;
        a.diagonal().array() -= sigma;
        lu.compute(a);
        probe = lu.solve(random_start(n, opts.seed));
        if (probe.allFinite()) break;
        require_numeric(attempt < 3, "eigs_near: shifted matrix persistently singular");
        sigma += Cplx(0, -1e-10) * (1.0 + std::abs(sigma));
    }

    int m = opts.krylov > 0 ? opts.krylov : std::max(24, 6 * n_want);
    while (true) {
        m = std::min(m, n);
        Eigen::MatrixXcd v(n, m + 1);
        Eigen::MatrixXcd hs = Eigen::MatrixXcd::Zero(m + 1, m);
        v.col(0) = random_start(n, opts.seed);
        int built = 0;
        bool invariant = false;
        for (int j = 0; j < m; ++j) {
            Eigen::VectorXcd w = lu.solve(v.col(j));
            require_numeric(w.allFinite(), "eigs_near: shifted solve produced non-finite values");
            for (int pass = 0; pass < 2; ++pass) { // classical Gram-Schmidt, twice
                Eigen::VectorXcd c = v.leftCols(j + 1).adjoint() * w;
                w.noalias() -= v.leftCols(j + 1) * c;
                hs.col(j).head(j + 1) += c;
            }
            built = j + 1;
            double beta = w.norm();
            if (beta < 1e-13) {
                invariant = true;
                break;
            }
            hs(j + 1, j) = beta;
            v.col(j + 1) = w / beta;
        }

        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> hes(hs.topLeftCorner(built, built), true);
        require_numeric(hes.info() == Eigen::Success, "eigs_near: Hessenberg eigensolver failed");
        std::vector<int> order(built);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(hes.eigenvalues()(a)) > std::abs(hes.eigenvalues()(b));
        });

        // the n_want Ritz pairs nearest the shift must all verify, otherwise
        // the subspace was too small
        std::vector<EigPair> out;
        for (int i = 0; i < n_want && i < built; ++i) {
            Cplx theta = hes.eigenvalues()(order[i]);
            if (std::abs(theta) < 1e-290) break;
            EigPair p;
            p.value = sigma + 1.0 / theta;
            p.vector = (v.leftCols(built) * hes.eigenvectors().col(order[i])).normalized();
            p.residual = (h * p.vector - p.value * p.vector).norm() / (1.0 + std::abs(p.value));
            if (p.residual > opts.tol) break;
            out.push_back(std::move(p));
        }
        if (static_cast<int>(out.size()) == n_want) {
            std::sort(out.begin(), out.end(), [&](const EigPair& a, const EigPair& b) {
                return std::abs(a.value - shift) < std::abs(b.value - shift);
            });
            return out;
        }
        if (invariant || built >= n || m >= opts.max_krylov) break;
        m *= 2;
    }
    return dense_eigs_near(h, shift, n_want, opts.tol);
}

// --- single-active-electron models ---

SaeSpectralModel build_sae_spectral(const RadialGrid& grid, const std::vector<double>& v,
                                    int l_max, double e_cut, double r_cap) {
    require_config(l_max >= 0, "build_sae_spectral: l_max must be >= 0");
    require_config(v.size() == grid.r.size(), "build_sae_spectral: potential size mismatch");
    SaeSpectralModel sm;
    sm.grid = grid;
    sm.l_max = l_max;
    sm.e_cut = e_cut;
    sm.r_cap = r_cap;
    sm.states.resize(l_max + 1);
    sm.offset.assign(l_max + 2, 0);
    for (int l = 0; l <= l_max; ++l) {
        sm.states[l] = solve_radial_states(grid, v, l, e_cut);
        require_config(!sm.states[l].empty(), "build_sae_spectral: empty l block below e_cut");
        sm.offset[l + 1] = sm.offset[l] + static_cast<int>(sm.states[l].size());
    }
    sm.z_up.resize(std::max(0, l_max));
    for (int l = 0; l < l_max; ++l) {
        const auto& lo = sm.states[l];
        const auto& hi = sm.states[l + 1];
        sm.z_up[l].resize(hi.size(), lo.size());
        for (size_t a = 0; a < hi.size(); ++a)
            for (size_t b = 0; b < lo.size(); ++b)
                sm.z_up[l](a, b) = dipole_element(grid, hi[a], lo[b], 0, Gauge::Length);
    }
    sm.cap.resize(l_max + 1);
    for (int l = 0; l <= l_max; ++l) sm.cap[l] = cap_quadratic_matrix(grid, sm.states[l], r_cap);
    return sm;
}

Eigen::MatrixXcd SaeSpectralModel::dressed(double field, double eta) const {
    const int n = dim();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (int l = 0; l <= l_max; ++l) {
        const int nl = static_cast<int>(states[l].size());
        for (int k = 0; k < nl; ++k) h(offset[l] + k, offset[l] + k) = states[l][k].energy;
        if (eta != 0)
            h.block(offset[l], offset[l], nl, nl) -= Cplx(0, eta) * cap[l];
    }
    for (int l = 0; l < l_max; ++l) {
        const int nlo = static_cast<int>(states[l].size());
        const int nhi = static_cast<int>(states[l + 1].size());
        h.block(offset[l + 1], offset[l], nhi, nlo) += field * z_up[l];
        h.block(offset[l], offset[l + 1], nlo, nhi) += field * z_up[l].transpose();
    }
    return h;
}

SaeGridHamiltonian::SaeGridHamiltonian(const RadialGrid& grid, const std::vector<double>& v,
                                       int l_max, std::function<double(double)> field, double eta,
                                       double r_cap, double diag_clamp)
    : m_(grid.n() - 1), l_max_(l_max), eta_(eta), field_(std::move(field)) {
    require_config(grid.n() >= 3, "SaeGridHamiltonian: grid too small");
    require_config(l_max >= 0, "SaeGridHamiltonian: l_max must be >= 0");
    require_config(v.size() == grid.r.size(), "SaeGridHamiltonian: potential size mismatch");
    diag_.resize(l_max + 1);
    for (int l = 0; l <= l_max; ++l) {
        Tridiag t = radial_hamiltonian(grid, v, l);
        if (l == 0) off_ = t.e;
        if (diag_clamp > 0)
            for (double& d : t.d) d = std::min(d, diag_clamp);
        diag_[l] = std::move(t.d);
    }
    zdiag_.assign(grid.r.begin(), grid.r.begin() + m_);
    capdiag_.assign(m_, 0.0);
    for (int k = 0; k < m_; ++k) {
        double dr = grid.r[k] - r_cap;
        if (dr > 0) capdiag_[k] = dr * dr;
    }
    cdip_.resize(std::max(0, l_max));
    for (int l = 0; l < l_max; ++l) cdip_[l] = dipole_c(l, 0);
}

void SaeGridHamiltonian::apply(double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
    out.resize(dim());
    for (int l = 0; l <= l_max_; ++l) {
        const auto& d = diag_[l];
        auto inb = in.segment(l * m_, m_);
        auto outb = out.segment(l * m_, m_);
        for (int k = 0; k < m_; ++k) {
            Cplx acc = d[k] * inb(k);
            if (k > 0) acc += off_[k - 1] * inb(k - 1);
            if (k + 1 < m_) acc += off_[k] * inb(k + 1);
            outb(k) = acc;
        }
        if (eta_ != 0) {
            const Cplx mieta(0, -eta_);
            for (int k = 0; k < m_; ++k)
                if (capdiag_[k] != 0) outb(k) += mieta * capdiag_[k] * inb(k);
        }
    }
    const double f = field_ ? field_(t) : 0.0;
    if (f != 0) {
        for (int l = 0; l < l_max_; ++l) {
            const double c = f * cdip_[l];
            auto lo = in.segment(l * m_, m_);
            auto hi = in.segment((l + 1) * m_, m_);
            auto olo = out.segment(l * m_, m_);
            auto ohi = out.segment((l + 1) * m_, m_);
            for (int k = 0; k < m_; ++k) {
                double zc = c * zdiag_[k];
                ohi(k) += zc * lo(k);
                olo(k) += zc * hi(k);
            }
        }
    }
}

Eigen::VectorXcd SaeGridHamiltonian::eigenstate(int l, int k) const {
    require_config(l >= 0 && l <= l_max_ && k >= 0 && k < m_, "eigenstate: index out of range");
    Tridiag t{diag_[l], off_};
    auto vals = tridiag_eigenvalues_lowest(t, k + 1);
    auto vecs = tridiag_eigenvectors(t, {vals[k]});
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim());
    for (int i = 0; i < m_; ++i) psi(l * m_ + i) = vecs[0][i];
    return psi;
}

double SaeGridHamiltonian::bound_population(const Eigen::VectorXcd& psi, double e_max) const {
    require_config(psi.size() == dim(), "bound_population: state size mismatch");
    double total = 0;
    for (int l = 0; l <= l_max_; ++l) {
        Tridiag t{diag_[l], off_};
        auto vals = tridiag_eigenvalues_below(t, e_max);
        if (vals.empty()) continue;
        auto vecs = tridiag_eigenvectors(t, vals);
        for (const auto& vec : vecs) {
            Cplx amp = 0;
            for (int k = 0; k < m_; ++k) amp += vec[k] * psi(l * m_ + k);
            total += std::norm(amp);
        }
    }
    return total;
}

// --- resonance scans ---

std::vector<ScanPoint> scan_adiabatic(const DressedFn& dressed, const std::vector<double>& fields,
                                      std::complex<double> e_start, const EigOptions& opts) {
    require_config(!fields.empty(), "scan_adiabatic: empty field list");
    std::vector<ScanPoint> out;
    out.reserve(fields.size());
    Cplx shift = e_start;
    Eigen::VectorXcd prev;
    for (double f : fields) {
        auto pairs = eigs_near(dressed(f), shift, 1, opts);
        const EigPair& p = pairs.front();
        double ov = prev.size() ? c_overlap(prev, p.vector) : 1.0;
        out.push_back({f, p.value, ov});
        shift = p.value;
        prev = p.vector;
    }
    return out;
}

std::vector<ScanPoint> scan_diabatic(const DressedFn& dressed, const std::vector<double>& fields,
                                     std::complex<double> e_start, int n_candidates,
                                     const EigOptions& opts) {
    require_config(!fields.empty(), "scan_diabatic: empty field list");
    require_config(n_candidates >= 1, "scan_diabatic: need at least one candidate");
    std::vector<ScanPoint> out;
    out.reserve(fields.size());

    auto anchor_pairs = eigs_near(dressed(fields.front()), e_start, 1, opts);
    Eigen::VectorXcd anchor = anchor_pairs.front().vector;
    out.push_back({fields.front(), anchor_pairs.front().value, c_overlap(anchor, anchor)});
    Cplx shift = anchor_pairs.front().value;

    for (size_t i = 1; i < fields.size(); ++i) {
        auto pairs = eigs_near(dressed(fields[i]), shift, n_candidates, opts);
        const EigPair* best = nullptr;
        double best_ov = -1;
        for (const auto& p : pairs) {
            double ov = c_overlap(anchor, p.vector);
            if (ov > best_ov) {
                best_ov = ov;
                best = &p;
            }
        }
        out.push_back({fields[i], best->value, best_ov});
        shift = best->value;
    }
    return out;
}

Eigen::MatrixXcd dressed_cis_matrix(const CisBasis& basis, const CisMatrices& mats, double field,
                                    double eta, double r_cap) {
    require_config(mats.gauge == Gauge::Length,
                   "dressed_cis_matrix: length-gauge matrices required");
    require_config(mats.h0.rows() == basis.dim(), "dressed_cis_matrix: basis/matrix mismatch");
    Eigen::MatrixXcd h = (mats.h0 + field * mats.dip).cast<Cplx>();
    if (eta != 0) {
        std::vector<Eigen::MatrixXd> w_by_l(basis.virtuals.by_l.size());
        std::vector<bool> have(basis.virtuals.by_l.size(), false);
        for (int ch = 0; ch < basis.n_channels(); ++ch) {
            const auto& refs = basis.channel_virt[ch];
            for (size_t a = 0; a < refs.size(); ++a) {
                for (size_t b = 0; b < refs.size(); ++b) {
                    if (refs[a].l != refs[b].l) continue;
                    const int l = refs[a].l;
                    if (!have[l]) {
                        w_by_l[l] = cap_quadratic_matrix(basis.grid, basis.virtuals.by_l[l], r_cap);
                        have[l] = true;
                    }
                    h(basis.index(ch, a), basis.index(ch, b)) -=
                        Cplx(0, eta) * w_by_l[l](refs[a].j, refs[b].j);
                }
            }
        }
    }
    return h;
}

// --- quasistatic rate models ---

double tunneling_survival(const std::function<double(double)>& field, double t0, double t1,
                          const std::vector<double>& f_samples,
                          const std::vector<double>& gamma_samples) {
    require_config(f_samples.size() == gamma_samples.size() && f_samples.size() >= 2,
                   "tunneling_survival: need matching rate samples");
    require_config(t1 > t0, "tunneling_survival: empty time interval");
    std::vector<double> fx = f_samples, gy = gamma_samples;
    require_config(fx.front() >= 0, "tunneling_survival: field samples must be nonnegative");
    double gmax = 0;
    for (double g : gy) {
        require_config(g >= 0, "tunneling_survival: rates must be nonnegative");
        gmax = std::max(gmax, g);
    }
    if (fx.front() > 0) { // rate vanishes with the field
        fx.insert(fx.begin(), 0.0);
        gy.insert(gy.begin(), 0.0);
    }
    Pchip rate(std::move(fx), std::move(gy));
    auto loss = [&](double t) { return rate(std::abs(field(t))); };
    double tol = 1e-10 * gmax * (t1 - t0) + 1e-300;
    double integral = adaptive_simpson(loss, t0, t1, tol);
    return std::exp(-integral);
}

double cycle_averaged_rate(const std::function<double(double)>& rate_of_f, double f_peak) {
    const double pi = 3.14159265358979323846;
    return 2.0 / pi *
           gl_integrate([&](double phi) { return rate_of_f(f_peak * std::cos(phi)); }, 0.0,
                        0.5 * pi, 64);
}

} // namespace tdcis
