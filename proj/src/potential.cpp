#include "tdcis/potential.hpp"

#include "tdcis/constants.hpp"
#include "tdcis/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tdcis {

std::vector<double> coulomb_potential(const RadialGrid& grid, double z) {
    std::vector<double> v(grid.n());
    for (int k = 0; k < grid.n(); ++k) v[k] = -z / grid.r[k];
    return v;
}

std::vector<double> soft_core_potential(const RadialGrid& grid, double depth, double a) {
    require_config(a > 0, "soft-core width must be positive");
    std::vector<double> v(grid.n());
    for (int k = 0; k < grid.n(); ++k) v[k] = -depth / std::sqrt(grid.r[k] * grid.r[k] + a * a);
    return v;
}

std::vector<double> hartree_from_radial_density(const RadialGrid& grid,
                                                const std::vector<double>& s) {
    const int n = grid.n();
    require_config(static_cast<int>(s.size()) == n, "density does not match grid");
    // inner_k = int_0^{r_k} s,  outer_k = int_{r_k}^inf s/r  (half of node k on
    // each side)
    std::vector<double> v(n);
    double inner = 0;
    for (int k = 0; k < n; ++k) {
        inner += 0.5 * grid.w[k] * s[k];
        v[k] = inner / grid.r[k];
        inner += 0.5 * grid.w[k] * s[k];
    }
    double outer = 0;
    for (int k = n - 1; k >= 0; --k) {
        outer += 0.5 * grid.w[k] * s[k] / grid.r[k];
        v[k] += outer;
        outer += 0.5 * grid.w[k] * s[k] / grid.r[k];
    }
    return v;
}

HfsResult hartree_fock_slater(const RadialGrid& grid, int z, int n_elec,
                              const HfsOptions& opt) {
    require_config(z >= 1, "nuclear charge must be >= 1");
    require_config(n_elec >= 2 && n_elec % 2 == 0, "closed-shell field needs even n_elec >= 2");
    require_config(opt.mixing > 0 && opt.mixing <= 1, "mixing must lie in (0, 1]");

    const int n = grid.n();
    const double tail_charge = double(z - n_elec + 1);

    HfsResult res;
    res.v = coulomb_potential(grid, z);
    std::vector<double> s; // mixed radial density

    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        auto sol = solve_orbitals(grid, res.v, n_elec, opt.l_max, 0.0);

        std::vector<double> s_new(n, 0.0);
        for (const auto& o : sol.occupied)
            for (int k = 0; k < n; ++k) s_new[k] += o.occupancy * o.u[k] * o.u[k];

        res.iterations = iter;
        res.occupied = std::move(sol.occupied);
        if (s.empty()) {
            s = std::move(s_new);
            res.residual = 1.0;
        } else {
            double l1 = 0;
            for (int k = 0; k < n; ++k) l1 += grid.w[k] * std::abs(s_new[k] - s[k]);
            res.residual = l1 / n_elec;
            for (int k = 0; k < n; ++k) s[k] += opt.mixing * (s_new[k] - s[k]);
        }

        std::vector<double> v = hartree_from_radial_density(grid, s);
        for (int k = 0; k < n; ++k) {
            double rho = std::max(s[k] / (4.0 * units::pi * grid.r[k] * grid.r[k]), 1e-30);
            v[k] += -1.5 * std::cbrt(3.0 * rho / units::pi) - z / grid.r[k];
            if (opt.latter_tail) v[k] = std::min(v[k], -tail_charge / grid.r[k]);
        }
        res.v = std::move(v);

        if (res.residual < opt.tol) return res;
    }
    throw NumericalError("hartree_fock_slater: no self-consistency after max_iter sweeps");
}

Eigen::MatrixXd cap_quadratic_matrix(const RadialGrid& grid,
                                     const std::vector<Orbital>& states, double r_cap) {
    const int m = static_cast<int>(states.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
    int k0 = 0;
    while (k0 < grid.n() && grid.r[k0] <= r_cap) ++k0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b <= a; ++b) {
            double acc = 0;
            for (int k = k0; k < grid.n(); ++k) {
                double d = grid.r[k] - r_cap;
                acc += grid.w[k] * states[a].u[k] * d * d * states[b].u[k];
            }
            w(a, b) = w(b, a) = acc;
        }
    return w;
}

} // namespace tdcis
