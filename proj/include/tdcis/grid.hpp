#pragma once

#include <vector>

namespace tdcis {

enum class GridMapping { Uniform, SqrtMapped };

// Radial grid on (0, r_max].  Nodes exclude the origin (orbitals u = r*R
// vanish there) and include r_max, where a Dirichlet wall is imposed.
// Quadrature weights are constructed so that sum(w) == r_max to rounding and
// smooth integrands are integrated to high order; the radial Hamiltonian is
// discretized self-adjointly with respect to these same weights, which makes
// eigenorbitals exactly orthonormal under grid.inner().
struct RadialGrid {
    GridMapping mapping = GridMapping::Uniform;
    double r_max = 0;
    std::vector<double> r;
    std::vector<double> w;

    int n() const { return static_cast<int>(r.size()); }
    double integrate(const std::vector<double>& f) const;
    double inner(const std::vector<double>& a, const std::vector<double>& b) const;
};

RadialGrid build_grid(GridMapping mapping, double r_max, int n_points);

struct Orbital {
    int l = 0;
    int n_index = 0;       // 0-based index within the l block, energy ordered
    double energy = 0;
    double occupancy = 0;  // electrons in the (n,l) shell; 0 for virtuals
    std::vector<double> u; // u(r) = r*R(r), real, u.back() == 0

    bool occupied() const { return occupancy > 0; }
    int principal() const { return n_index + l + 1; }
};

struct VirtualSpace {
    double e_cut = 0;
    std::vector<std::vector<Orbital>> by_l; // by_l[l] energy-ordered

    int l_max() const { return static_cast<int>(by_l.size()) - 1; }
    int count() const;
};

struct OrbitalSolution {
    std::vector<Orbital> occupied;
    VirtualSpace virtuals;
};

// Symmetric tridiagonal eigenproblem, direct method: Sturm-sequence bisection
// for eigenvalues, inverse iteration for selected eigenvectors.
struct Tridiag {
    std::vector<double> d;
    std::vector<double> e; // size d.size()-1
};

int sturm_count_below(const Tridiag& t, double x);
std::vector<double> tridiag_eigenvalues_below(const Tridiag& t, double bound);
std::vector<double> tridiag_eigenvalues_lowest(const Tridiag& t, int k);
// Vectors for a precomputed, sorted set of eigenvalues (handles clusters).
std::vector<std::vector<double>> tridiag_eigenvectors(const Tridiag& t,
                                                      const std::vector<double>& values);

// Finite-volume radial Hamiltonian for angular momentum l in potential v
// (values on grid nodes), symmetrized with the quadrature weights.  The
// unknowns are nodes 0..n-2; node n-1 sits on the Dirichlet wall.
Tridiag radial_hamiltonian(const RadialGrid& grid, const std::vector<double>& v, int l);

// All eigenstates with energy <= e_cut for one l (or the lowest max_states).
std::vector<Orbital> solve_radial_states(const RadialGrid& grid, const std::vector<double>& v,
                                         int l, double e_cut, int max_states = -1);

std::vector<double> radial_eigenvalues(const RadialGrid& grid, const std::vector<double>& v,
                                       int l, int k);

// Solve every l <= l_max, fill n_elec electrons by aufbau (spectroscopic
// shell order, all m of a shell together), and return the remaining states
// with energy <= e_cut as the virtual space.
OrbitalSolution solve_orbitals(const RadialGrid& grid, const std::vector<double>& v,
                               int n_elec, int l_max, double e_cut);

} // namespace tdcis
