#include "tdcis/grid.hpp"

#include "tdcis/errors.hpp"
#include "tdcis/threading.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace tdcis {

double RadialGrid::integrate(const std::vector<double>& f) const {
    double s = 0;
    for (int k = 0; k < n(); ++k) s += w[k] * f[k];
    return s;
}

double RadialGrid::inner(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0;
    for (int k = 0; k < n(); ++k) s += w[k] * a[k] * b[k];
    return s;
}

RadialGrid build_grid(GridMapping mapping, double r_max, int n_points) {
    require_config(r_max > 0, "grid: r_max must be positive");
    require_config(n_points >= 16, "grid: need at least 16 points");

    RadialGrid g;
    g.mapping = mapping;
    g.r_max = r_max;
    g.r.resize(n_points);
    g.w.resize(n_points);

    const int n = n_points;
    if (mapping == GridMapping::Uniform) {
        // Nodes at (k+1)h; with u(0) = u(r_max) = 0 the flat weight w = h is
        // the trapezoid rule and sums to r_max exactly.
        const double h = r_max / n;
        for (int k = 0; k < n; ++k) {
            g.r[k] = h * (k + 1);
            g.w[k] = h;
        }
        g.r[n - 1] = r_max;
    } else {
        // r = r_max * x^2 on a uniform x grid.  Weights are the 6th-order
        // Gregory end-corrected trapezoid in x times dr/dx; the x = 0 node
        // carries dr/dx = 0 and drops out exactly.
        const double h = 1.0 / n;
        for (int k = 0; k < n; ++k) {
            double x = h * (k + 1);
            g.r[k] = r_max * x * x;
            double pat = 1.0;
            int j = k + 1;         // index in the (n+1)-node x grid
            int jr = n - j;        // distance from the right end
            if (j == 1) pat = 299.0 / 240.0;
            else if (j == 2) pat = 211.0 / 240.0;
            else if (j == 3) pat = 739.0 / 720.0;
            if (jr == 0) pat = 251.0 / 720.0;
            else if (jr == 1) pat = 299.0 / 240.0;
            else if (jr == 2) pat = 211.0 / 240.0;
            else if (jr == 3) pat = 739.0 / 720.0;
            g.w[k] = h * pat * (2.0 * r_max * x);
        }
        g.r[n - 1] = r_max;
    }

    for (int k = 0; k < n; ++k) {
        require_numeric(g.w[k] > 0, "grid: nonpositive quadrature weight");
        require_numeric(k == 0 || g.r[k] > g.r[k - 1], "grid: nodes not increasing");
    }
    return g;
}

int VirtualSpace::count() const {
    int c = 0;
    for (const auto& blk : by_l) c += static_cast<int>(blk.size());
    return c;
}

// ---------------------------------------------------------------------------
// symmetric tridiagonal eigensolver

namespace {

void gershgorin(const Tridiag& t, double& lo, double& hi) {
    const int n = static_cast<int>(t.d.size());
    lo = std::numeric_limits<double>::max();
    hi = std::numeric_limits<double>::lowest();
    for (int k = 0; k < n; ++k) {
        double rad = 0;
        if (k > 0) rad += std::abs(t.e[k - 1]);
        if (k + 1 < n) rad += std::abs(t.e[k]);
        lo = std::min(lo, t.d[k] - rad);
        hi = std::max(hi, t.d[k] + rad);
    }
}

uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

int sturm_count_below(const Tridiag& t, double x) {
    const int n = static_cast<int>(t.d.size());
    double emax = 0;
    for (double v : t.e) emax = std::max(emax, std::abs(v));
    const double pivmin = 1e-290 * std::max(1.0, emax * emax);
    int cnt = 0;
    double q = t.d[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++cnt;
    for (int k = 1; k < n; ++k) {
        q = (t.d[k] - x) - t.e[k - 1] * t.e[k - 1] / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0) ++cnt;
    }
    return cnt;
}

namespace {

// eigenvalue with given 0-based index by bisection
double bisect_index(const Tridiag& t, int index, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count_below(t, mid) > index) hi = mid;
        else lo = mid;
        if (hi - lo < 1e-14 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)))) break;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> bisect_first_k(const Tridiag& t, int k) {
    double lo, hi;
    gershgorin(t, lo, hi);
    lo -= 1e-6 * (hi - lo + 1);
    hi += 1e-6 * (hi - lo + 1);
    std::vector<double> vals(k);
    parallel_for(k, [&](int i) { vals[i] = bisect_index(t, i, lo, hi); });
    return vals;
}

} // namespace

std::vector<double> tridiag_eigenvalues_lowest(const Tridiag& t, int k) {
    k = std::min<int>(k, static_cast<int>(t.d.size()));
    if (k <= 0) return {};
    return bisect_first_k(t, k);
}

std::vector<double> tridiag_eigenvalues_below(const Tridiag& t, double bound) {
    int k = sturm_count_below(t, bound);
    return bisect_first_k(t, k);
}

std::vector<std::vector<double>> tridiag_eigenvectors(const Tridiag& t,
                                                      const std::vector<double>& values) {
    const int n = static_cast<int>(t.d.size());
    std::vector<std::vector<double>> vecs(values.size());
    auto clustered = [&](double a, double b) {
        return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };

    // (T - lambda) x = b via banded elimination with partial pivoting
    // (tridiagonal plus one fill diagonal from the row swaps).
    auto solve_pivoted = [&](double lambda, std::vector<double>& x) {
        std::vector<double> a(n, 0), b(n, 0), c(n, 0), c2(n, 0);
        for (int i = 0; i < n; ++i) b[i] = t.d[i] - lambda;
        for (int i = 0; i + 1 < n; ++i) { a[i + 1] = t.e[i]; c[i] = t.e[i]; }
        const double tiny = 1e-300;
        for (int i = 0; i + 1 < n; ++i) {
            if (std::abs(a[i + 1]) > std::abs(b[i])) {
                std::swap(b[i], a[i + 1]);
                std::swap(c[i], b[i + 1]);
                std::swap(c2[i], c[i + 1]);
                std::swap(x[i], x[i + 1]);
            }
            if (std::abs(b[i]) < tiny) b[i] = (b[i] < 0 ? -tiny : tiny);
            double m = a[i + 1] / b[i];
            b[i + 1] -= m * c[i];
            c[i + 1] -= m * c2[i];
            x[i + 1] -= m * x[i];
        }
        if (std::abs(b[n - 1]) < tiny) b[n - 1] = (b[n - 1] < 0 ? -tiny : tiny);
        x[n - 1] /= b[n - 1];
        if (n >= 2) x[n - 2] = (x[n - 2] - c[n - 2] * x[n - 1]) / b[n - 2];
        for (int i = n - 3; i >= 0; --i)
            x[i] = (x[i] - c[i] * x[i + 1] - c2[i] * x[i + 2]) / b[i];
        return true;
    };

    // Work cluster-by-cluster so near-degenerate vectors can be
    // orthogonalized while iterating; clusters are independent.
    std::vector<int> cluster_start;
    for (size_t vi = 0; vi < values.size(); ++vi)
        if (vi == 0 || !clustered(values[vi], values[vi - 1]))
            cluster_start.push_back(static_cast<int>(vi));
    cluster_start.push_back(static_cast<int>(values.size()));

    parallel_for(static_cast<int>(cluster_start.size()) - 1, [&](int ci) {
        for (int vi = cluster_start[ci]; vi < cluster_start[ci + 1]; ++vi) {
            std::vector<double> x(n);
            for (int i = 0; i < n; ++i) {
                uint64_t h = splitmix((uint64_t)vi * 0x100000001ull + (uint64_t)i);
                x[i] = 2.0 * (double(h >> 11) * 0x1.0p-53) - 1.0;
            }
            // Nudge off exact singularity; keep the nudge at the scale of the
            // eigenvalue itself, not the matrix norm (graded meshes make the
            // norm huge while the physical eigenvalues stay O(1)).
            double lambda = values[vi] + 1e-14 * std::max(1.0, std::abs(values[vi]));
            for (int it = 0; it < 4; ++it) {
                solve_pivoted(lambda, x);
                for (int pj = cluster_start[ci]; pj < vi; ++pj) {
                    double ip = std::inner_product(x.begin(), x.end(), vecs[pj].begin(), 0.0);
                    for (int i = 0; i < n; ++i) x[i] -= ip * vecs[pj][i];
                }
                double nrm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
                require_numeric(nrm > 0, "tridiag: inverse iteration collapsed");
                for (double& xi : x) xi /= nrm;
            }
            vecs[vi] = std::move(x);
        }
    });
    return vecs;
}

// ---------------------------------------------------------------------------
// radial Hamiltonian and orbital solutions

Tridiag radial_hamiltonian(const RadialGrid& grid, const std::vector<double>& v, int l) {
    const int n = grid.n();
    require_config(static_cast<int>(v.size()) == n, "potential values do not match grid");
    const int m = n - 1; // interior unknowns; node n-1 is the Dirichlet wall
    Tridiag t;
    t.d.resize(m);
    t.e.resize(m - 1);
    const double ll = 0.5 * l * (l + 1);
    for (int k = 0; k < m; ++k) {
        double d_lo = (k == 0) ? grid.r[0] : grid.r[k] - grid.r[k - 1];
        double d_hi = grid.r[k + 1] - grid.r[k];
        t.d[k] = (1.0 / (2.0 * grid.w[k])) * (1.0 / d_lo + 1.0 / d_hi)
               + v[k] + ll / (grid.r[k] * grid.r[k]);
        if (k + 1 < m)
            t.e[k] = -1.0 / (2.0 * d_hi * std::sqrt(grid.w[k] * grid.w[k + 1]));
    }
    return t;
}

namespace {

Orbital make_orbital(const RadialGrid& grid, int l, int n_index, double energy,
                     const std::vector<double>& tilde_u) {
    Orbital o;
    o.l = l;
    o.n_index = n_index;
    o.energy = energy;
    o.u.assign(grid.n(), 0.0);
    for (int k = 0; k + 1 < grid.n(); ++k) o.u[k] = tilde_u[k] / std::sqrt(grid.w[k]);
    // norm is already 1 in the grid inner product; fix the sign so the first
    // substantial lobe is positive
    double mx = 0;
    for (double x : o.u) mx = std::max(mx, std::abs(x));
    for (double x : o.u) {
        if (std::abs(x) > 1e-8 * mx) {
            if (x < 0) for (double& y : o.u) y = -y;
            break;
        }
    }
    return o;
}

} // namespace

std::vector<Orbital> solve_radial_states(const RadialGrid& grid, const std::vector<double>& v,
                                         int l, double e_cut, int max_states) {
    Tridiag t = radial_hamiltonian(grid, v, l);
    std::vector<double> vals = tridiag_eigenvalues_below(t, e_cut);
    if (max_states >= 0 && static_cast<int>(vals.size()) > max_states)
        vals.resize(max_states);
    auto vecs = tridiag_eigenvectors(t, vals);
    std::vector<Orbital> out;
    out.reserve(vals.size());
    for (size_t i = 0; i < vals.size(); ++i)
        out.push_back(make_orbital(grid, l, static_cast<int>(i), vals[i], vecs[i]));
    return out;
}

std::vector<double> radial_eigenvalues(const RadialGrid& grid, const std::vector<double>& v,
                                       int l, int k) {
    Tridiag t = radial_hamiltonian(grid, v, l);
    return tridiag_eigenvalues_lowest(t, k);
}

OrbitalSolution solve_orbitals(const RadialGrid& grid, const std::vector<double>& v,
                               int n_elec, int l_max, double e_cut) {
    require_config(n_elec >= 0 && n_elec % 2 == 0, "solve_orbitals: closed shells need even n_elec");
    require_config(l_max >= 0, "solve_orbitals: l_max must be >= 0");

    std::vector<std::vector<Orbital>> states(l_max + 1);
    parallel_for(l_max + 1, [&](int l) {
        // always keep enough low states to fill shells even above e_cut
        Tridiag t = radial_hamiltonian(grid, v, l);
        int below = sturm_count_below(t, e_cut);
        int need = std::max(below, 8);
        need = std::min<int>(need, static_cast<int>(t.d.size()));
        auto vals = tridiag_eigenvalues_lowest(t, need);
        auto vecs = tridiag_eigenvectors(t, vals);
        states[l].reserve(vals.size());
        for (size_t i = 0; i < vals.size(); ++i)
            states[l].push_back(make_orbital(grid, l, static_cast<int>(i), vals[i], vecs[i]));
    });

    // aufbau, spectroscopic shell order: sort (n, l) by (n + l, n)
    struct Shell { int n, l; };
    std::vector<Shell> order;
    for (int l = 0; l <= l_max; ++l)
        for (size_t i = 0; i < states[l].size(); ++i)
            order.push_back({l + 1 + static_cast<int>(i), l});
    std::sort(order.begin(), order.end(), [](const Shell& a, const Shell& b) {
        if (a.n + a.l != b.n + b.l) return a.n + a.l < b.n + b.l;
        return a.n < b.n;
    });

    OrbitalSolution sol;
    int remaining = n_elec;
    for (const Shell& s : order) {
        if (remaining <= 0) break;
        Orbital& o = states[s.l][s.n - s.l - 1];
        int cap = 2 * (2 * s.l + 1);
        int take = std::min(remaining, cap);
        o.occupancy = take;
        remaining -= take;
        sol.occupied.push_back(o);
    }
    require_numeric(remaining == 0, "solve_orbitals: not enough bound shells to place all electrons");

    sol.virtuals.e_cut = e_cut;
    sol.virtuals.by_l.resize(l_max + 1);
    for (int l = 0; l <= l_max; ++l) {
        for (auto& o : states[l]) {
            if (o.occupied() || o.energy > e_cut) continue;
            sol.virtuals.by_l[l].push_back(o);
        }
    }
    return sol;
}

} // namespace tdcis
