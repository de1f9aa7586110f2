#pragma once

#include "tdcis/grid.hpp"

#include <Eigen/Core>

#include <vector>

namespace tdcis {

// -Z/r on the grid nodes
std::vector<double> coulomb_potential(const RadialGrid& grid, double z);

// -depth / sqrt(r^2 + a^2); finite at the origin, Coulombic tail of charge
// `depth` at large r
std::vector<double> soft_core_potential(const RadialGrid& grid, double depth, double a);

// Electrostatic potential of the radial charge density s(r) = sum occ*u^2:
//   V_H(r) = (1/r) int_0^r s + int_r^inf s/r'
// evaluated with the grid weights (node weight split evenly across the two
// ranges).
std::vector<double> hartree_from_radial_density(const RadialGrid& grid,
                                                const std::vector<double>& s);

struct HfsOptions {
    double mixing = 0.3;     // linear density mixing toward the new density
    int max_iter = 200;
    double tol = 1e-10;      // L1 density residual per electron
    bool latter_tail = true; // enforce -(Z - N + 1)/r beyond the crossing
    int l_max = 3;           // highest l considered when filling shells
};

struct HfsResult {
    std::vector<double> v;         // converged mean-field potential
    std::vector<Orbital> occupied; // shells from the last solve, aufbau order
    int iterations = 0;
    double residual = 0;
};

// Self-consistent mean field: nuclear attraction + Hartree + local
// rho^(1/3) exchange, closed shells only.
HfsResult hartree_fock_slater(const RadialGrid& grid, int z, int n_elec,
                              const HfsOptions& opt = {});

// Overlap-type matrix <u_a| (r - r_cap)_+^2 |u_b> over one l block.
// Identically zero when r_cap >= r_max; always symmetric positive
// semidefinite.  The absorbing term itself is -i*eta times this.
Eigen::MatrixXd cap_quadratic_matrix(const RadialGrid& grid,
                                     const std::vector<Orbital>& states, double r_cap);

} // namespace tdcis
