#include "tdcis/cis.hpp"

#include "tdcis/angular.hpp"
#include "tdcis/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace tdcis {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// nonuniform 3-point first derivative; u(0) = 0 and u(r_max) = 0 close the ends
VectorXd radial_derivative(const RadialGrid& g, const std::vector<double>& u) {
    const int n = g.n();
    VectorXd du(n);
    for (int k = 0; k < n; ++k) {
        double um = k > 0 ? u[k - 1] : 0.0;
        double hm = k > 0 ? g.r[k] - g.r[k - 1] : g.r[0];
        if (k + 1 < n) {
            double hp = g.r[k + 1] - g.r[k];
            du[k] = -hp / (hm * (hm + hp)) * um + (hp - hm) / (hm * hp) * u[k]
                  + hm / (hp * (hm + hp)) * u[k + 1];
        } else {
            du[k] = (u[k] - um) / hm;
        }
    }
    return du;
}

// in/out transform of a node density:
//   T_j = (1/r_j^{L+1}) sum_{j'<j} w d r^L  +  r_j^L sum_{j'>j} w d / r^{L+1}
//       + w_j d_j / r_j
// every recursion factor is a ratio <= 1, so no power overflows
std::vector<double> multipole_transform(const RadialGrid& g, int big_l,
                                        const std::vector<double>& d) {
    const int n = g.n();
    std::vector<double> out(n);
    double s1 = 0;
    for (int j = 0; j < n; ++j) {
        if (j > 0) {
            double q = g.r[j - 1] / g.r[j];
            s1 = std::pow(q, big_l + 1) * (s1 + g.w[j - 1] * d[j - 1] / g.r[j - 1]);
        }
        out[j] = s1;
    }
    double s2 = 0;
    for (int j = n - 1; j >= 0; --j) {
        if (j + 1 < n) {
            double q = g.r[j] / g.r[j + 1];
            s2 = std::pow(q, big_l) * (s2 + g.w[j + 1] * d[j + 1] / g.r[j + 1]);
        }
        out[j] += s2 + g.w[j] * d[j] / g.r[j];
    }
    return out;
}

struct StateTable {
    // all states of one l: occupied shells first, then virtuals
    std::vector<const Orbital*> states;
    MatrixXd u;  // n_grid x n_states
    MatrixXd du; // derivatives, same layout
};

} // namespace

double slater_rl(const RadialGrid& grid, int big_l, const std::vector<double>& density1,
                 const std::vector<double>& density2) {
    auto t = multipole_transform(grid, big_l, density2);
    double acc = 0;
    for (int j = 0; j < grid.n(); ++j) acc += grid.w[j] * density1[j] * t[j];
    return acc;
}

double dipole_element(const RadialGrid& grid, const Orbital& b, const Orbital& a, int m,
                      Gauge gauge) {
    const bool up = b.l == a.l + 1;
    require_config(up || b.l + 1 == a.l, "dipole element needs l_b = l_a +- 1");
    const int l_lo = std::min(a.l, b.l);
    require_config(std::abs(m) <= l_lo, "dipole element: |m| exceeds the lower l");
    const double c = dipole_c(l_lo, m);
    const Orbital& hi = up ? b : a;
    const Orbital& lo = up ? a : b;

    if (gauge == Gauge::Length) {
        double acc = 0;
        for (int k = 0; k < grid.n(); ++k)
            acc += grid.w[k] * hi.u[k] * grid.r[k] * lo.u[k];
        return c * acc;
    }
    VectorXd dlo = radial_derivative(grid, lo.u);
    VectorXd dhi = radial_derivative(grid, hi.u);
    double acc = 0;
    for (int k = 0; k < grid.n(); ++k) {
        double anti = 0.5 * (hi.u[k] * dlo[k] - lo.u[k] * dhi[k]);
        acc += grid.w[k] * (anti - (l_lo + 1) * hi.u[k] * lo.u[k] / grid.r[k]);
    }
    // <hi|d/dz|lo> = c*acc; the reverse element is its exact negative
    return up ? c * acc : -c * acc;
}

CisBasis build_cis_basis(const RadialGrid& grid, const std::vector<double>& v_mf, int n_elec,
                         int l_max, double e_cut, const std::vector<int>& active_occ) {
    CisBasis b;
    b.grid = grid;
    b.v_mf = v_mf;
    auto sol = solve_orbitals(grid, v_mf, n_elec, l_max, e_cut);
    b.occupied = std::move(sol.occupied);
    b.virtuals = std::move(sol.virtuals);

    std::vector<int> holes = active_occ;
    if (holes.empty()) {
        holes.resize(b.occupied.size());
        for (size_t i = 0; i < holes.size(); ++i) holes[i] = static_cast<int>(i);
    }
    for (int h : holes)
        require_config(h >= 0 && h < static_cast<int>(b.occupied.size()),
                       "active hole index out of range");

    b.offsets.clear();
    b.total_dim = 1;
    for (int h : holes) {
        const Orbital& occ = b.occupied[h];
        for (int m = -occ.l; m <= occ.l; ++m) {
            Channel ch{h, occ.l, m, occ.energy};
            std::vector<VirtRef> refs;
            for (int l = std::abs(m); l <= b.virtuals.l_max(); ++l)
                for (int j = 0; j < static_cast<int>(b.virtuals.by_l[l].size()); ++j)
                    refs.push_back({l, j});
            b.channels.push_back(ch);
            b.channel_virt.push_back(std::move(refs));
            b.offsets.push_back(b.total_dim);
            b.total_dim += static_cast<int>(b.channel_virt.back().size());
        }
    }
    require_config(b.total_dim > 1, "no particle-hole amplitudes: raise e_cut or l_max");
    return b;
}

CisMatrices build_cis_matrices(const CisBasis& basis, Gauge gauge, int l_max_multipole) {
    const RadialGrid& g = basis.grid;
    const int n = g.n();
    const int l_max = basis.virtuals.l_max();
    const int dim = basis.dim();
    const int n_ch = basis.n_channels();

    int hole_l_spread = 0;
    for (const auto& a : basis.channels)
        for (const auto& b : basis.channels)
            hole_l_spread = std::max(hole_l_spread, std::abs(a.l - b.l));
    if (l_max_multipole < 0) l_max_multipole = 2 * l_max;
    require_config(l_max_multipole >= hole_l_spread,
                   "multipole cutoff below the minimum the hole pairs require");

    // per-l state tables: occupied shells of this l first, then virtuals
    std::vector<StateTable> tab(l_max + 1);
    std::vector<std::vector<int>> occ_pos(basis.occupied.size()); // [occ] -> (l, column)
    for (int l = 0; l <= l_max; ++l) {
        auto& t = tab[l];
        for (size_t i = 0; i < basis.occupied.size(); ++i)
            if (basis.occupied[i].l == l) {
                occ_pos[i] = {l, static_cast<int>(t.states.size())};
                t.states.push_back(&basis.occupied[i]);
            }
        for (const auto& o : basis.virtuals.by_l[l]) t.states.push_back(&o);
        t.u.resize(n, t.states.size());
        t.du.resize(n, t.states.size());
        for (size_t s = 0; s < t.states.size(); ++s) {
            for (int k = 0; k < n; ++k) t.u(k, s) = t.states[s]->u[k];
            t.du.col(s) = radial_derivative(g, t.states[s]->u);
        }
    }
    // how many occupied shells sit in front of the virtuals in each table
    std::vector<int> n_occ_l(l_max + 1, 0);
    for (const auto& o : basis.occupied)
        if (o.l <= l_max) ++n_occ_l[o.l];

    VectorXd w(n), wr(n), winv_r(n);
    for (int k = 0; k < n; ++k) {
        w[k] = g.w[k];
        wr[k] = g.w[k] * g.r[k];
        winv_r[k] = g.w[k] / g.r[k];
    }

    // raw radial one-electron blocks between adjacent l tables;
    // rad_up[l](p, q) = <state p of l+1 | op | state q of l> / angular factor
    std::vector<MatrixXd> rad_up(l_max);
    for (int l = 0; l + 1 <= l_max; ++l) {
        const auto& hi = tab[l + 1];
        const auto& lo = tab[l];
        if (hi.states.empty() || lo.states.empty()) continue;
        if (gauge == Gauge::Length) {
            rad_up[l] = hi.u.transpose() * wr.asDiagonal() * lo.u;
        } else {
            MatrixXd raw1 = hi.u.transpose() * w.asDiagonal() * lo.du;
            MatrixXd raw2 = lo.u.transpose() * w.asDiagonal() * hi.du;
            MatrixXd s = hi.u.transpose() * winv_r.asDiagonal() * lo.u;
            rad_up[l] = 0.5 * (raw1 - raw2.transpose()) - double(l + 1) * s;
        }
    }
    // <p, l_p | op | q, l_q>, valid for any states present in the tables
    auto one_elem = [&](int l_p, int col_p, int l_q, int col_q, int m) -> double {
        if (std::abs(l_p - l_q) != 1) return 0.0;
        int l_lo = std::min(l_p, l_q);
        if (std::abs(m) > l_lo) return 0.0;
        double c = dipole_c(l_lo, m);
        if (l_p == l_q + 1) return c * rad_up[l_q](col_p, col_q);
        double v = c * rad_up[l_p](col_q, col_p);
        return gauge == Gauge::Velocity ? -v : v;
    };

    CisMatrices out;
    out.gauge = gauge;
    out.h0 = MatrixXd::Zero(dim, dim);
    out.dip = MatrixXd::Zero(dim, dim);
    out.hole_dip = MatrixXd::Zero(n_ch, n_ch);

    // ---- one-electron (field-coupling) structure
    for (int ci = 0; ci < n_ch; ++ci) {
        const Channel& chi = basis.channels[ci];
        const auto& refs = basis.channel_virt[ci];
        const int off = basis.offsets[ci];
        // ground <-> excitations
        for (size_t k = 0; k < refs.size(); ++k) {
            int l_a = refs[k].l, col_a = n_occ_l[l_a] + refs[k].j;
            double e_ia = one_elem(chi.l, occ_pos[chi.occ][1], l_a, col_a, chi.m);
            double e_ai = one_elem(l_a, col_a, chi.l, occ_pos[chi.occ][1], chi.m);
            out.dip(0, off + k) = 2.0 * e_ia;
            out.dip(off + k, 0) = std::sqrt(2.0) * e_ai;
        }
        // virtual <-> virtual inside the channel
        for (size_t k = 0; k < refs.size(); ++k)
            for (size_t q = 0; q < refs.size(); ++q) {
                if (std::abs(refs[k].l - refs[q].l) != 1) continue;
                int ca = n_occ_l[refs[k].l] + refs[k].j;
                int cb = n_occ_l[refs[q].l] + refs[q].j;
                out.dip(off + k, off + q) = one_elem(refs[k].l, ca, refs[q].l, cb, chi.m);
            }
    }
    // hole <-> hole: couples channels that share m and the full virtual list
    for (int ci = 0; ci < n_ch; ++ci)
        for (int cj = 0; cj < n_ch; ++cj) {
            const Channel& a = basis.channels[ci];
            const Channel& b = basis.channels[cj];
            if (a.m != b.m || std::abs(a.l - b.l) != 1) continue;
            double e = one_elem(b.l, occ_pos[b.occ][1], a.l, occ_pos[a.occ][1], a.m);
            out.hole_dip(cj, ci) = e;
            // same m means both channels enumerate identical virtuals
            for (size_t k = 0; k < basis.channel_virt[ci].size(); ++k)
                out.dip(basis.offsets[ci] + k, basis.offsets[cj] + k) -= e;
        }

    // ---- field-free block
    std::vector<double> d1(n), d2(n);
    for (int ci = 0; ci < n_ch; ++ci) {
        const Channel& chi = basis.channels[ci];
        const Orbital& hole_i = basis.occupied[chi.occ];
        for (int k = 0; k < basis.block_size(ci); ++k) {
            int idx = basis.index(ci, k);
            out.h0(idx, idx) = basis.virt(basis.channel_virt[ci][k]).energy - chi.energy;
        }
        for (int cj = ci; cj < n_ch; ++cj) {
            const Channel& chj = basis.channels[cj];
            const Orbital& hole_j = basis.occupied[chj.occ];
            for (int big_l = 0; big_l <= l_max_multipole; ++big_l) {
                // exchange transform of the hole-pair density
                double ce_holes = coulomb_c(big_l, chi.l, chi.m, chj.l, chj.m);
                std::vector<double> xw;
                if (ce_holes != 0.0) {
                    for (int kk = 0; kk < n; ++kk)
                        d1[kk] = hole_j.u[kk] * hole_i.u[kk];
                    xw = multipole_transform(g, big_l, d1);
                    for (int kk = 0; kk < n; ++kk) xw[kk] *= g.w[kk];
                }
                for (int l_b = 0; l_b <= l_max; ++l_b) {
                    if (std::abs(chj.m) > l_b || basis.virtuals.by_l[l_b].empty()) continue;
                    double cd_b = coulomb_c(big_l, l_b, chj.m, chj.l, chj.m);
                    // direct transforms, one per b in this l block
                    MatrixXd yb;
                    if (cd_b != 0.0) {
                        const auto& blk = basis.virtuals.by_l[l_b];
                        yb.resize(n, blk.size());
                        for (size_t jb = 0; jb < blk.size(); ++jb) {
                            for (int kk = 0; kk < n; ++kk)
                                d2[kk] = hole_j.u[kk] * blk[jb].u[kk];
                            auto t = multipole_transform(g, big_l, d2);
                            for (int kk = 0; kk < n; ++kk) yb(kk, jb) = t[kk];
                        }
                    }
                    for (int l_a = 0; l_a <= l_max; ++l_a) {
                        if (std::abs(chi.m) > l_a || basis.virtuals.by_l[l_a].empty()) continue;
                        double cd = cd_b * coulomb_c(big_l, l_a, chi.m, chi.l, chi.m);
                        double ce = ce_holes * coulomb_c(big_l, l_a, chi.m, l_b, chj.m);
                        if (cd == 0.0 && ce == 0.0) continue;

                        const int na = static_cast<int>(basis.virtuals.by_l[l_a].size());
                        const int nb = static_cast<int>(basis.virtuals.by_l[l_b].size());
                        auto va = tab[l_a].u.rightCols(na);
                        auto vb = tab[l_b].u.rightCols(nb);
                        MatrixXd blk = MatrixXd::Zero(na, nb);
                        if (cd != 0.0) {
                            VectorXd wi(n);
                            for (int kk = 0; kk < n; ++kk) wi[kk] = g.w[kk] * hole_i.u[kk];
                            blk.noalias() += (2.0 * cd) * (va.transpose() * wi.asDiagonal() * yb);
                        }
                        if (ce != 0.0) {
                            Eigen::Map<const VectorXd> xv(xw.data(), n);
                            blk.noalias() -= ce * (va.transpose() * xv.asDiagonal() * vb);
                        }
                        // scatter into the flattened layout
                        int row0 = -1, col0 = -1;
                        {
                            int k = 0;
                            for (const auto& r : basis.channel_virt[ci]) {
                                if (r.l == l_a) { row0 = basis.offsets[ci] + k; break; }
                                ++k;
                            }
                            k = 0;
                            for (const auto& r : basis.channel_virt[cj]) {
                                if (r.l == l_b) { col0 = basis.offsets[cj] + k; break; }
                                ++k;
                            }
                        }
                        if (row0 < 0 || col0 < 0) continue;
                        out.h0.block(row0, col0, na, nb) += blk;
                        if (cj != ci) out.h0.block(col0, row0, nb, na) += blk.transpose();
                    }
                }
            }
        }
    }
    // exact symmetry of the stored matrix
    out.h0 = 0.5 * (out.h0 + out.h0.transpose()).eval();
    return out;
}

double cis_norm(const Eigen::VectorXcd& alpha) { return alpha.squaredNorm(); }

double cis_field_free_energy(const CisMatrices& mats, const Eigen::VectorXcd& alpha) {
    return alpha.dot(mats.h0 * alpha).real();
}

std::vector<double> channel_populations(const CisBasis& basis, const Eigen::VectorXcd& alpha) {
    std::vector<double> p(basis.n_channels(), 0.0);
    for (int c = 0; c < basis.n_channels(); ++c)
        for (int k = 0; k < basis.block_size(c); ++k)
            p[c] += std::norm(alpha[basis.index(c, k)]);
    return p;
}

void CisHamiltonian::apply(double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
    out.noalias() = mats_->h0 * in;
    const double c = coef_(t);
    if (c != 0.0) {
        if (mats_->gauge == Gauge::Velocity)
            out.noalias() += (std::complex<double>(0.0, -c)) * (mats_->dip * in);
        else
            out.noalias() += c * (mats_->dip * in);
    }
}

} // namespace tdcis
