#pragma once

#include "tdcis/cis.hpp"
#include "tdcis/grid.hpp"
#include "tdcis/propagator.hpp"

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <vector>

namespace tdcis {

// --- eigenpairs of dressed (complex, generally non-normal) matrices ---

struct EigPair {
    std::complex<double> value;
    Eigen::VectorXcd vector;   // unit 2-norm
    double residual = 0;       // ||H v - E v|| / (1 + |E|)
};

struct EigOptions {
    double tol = 1e-9;   // residual acceptance threshold
    int krylov = 0;      // starting subspace size; 0 picks one from n_want
    int max_krylov = 360;
    unsigned seed = 0x5eed;
};

// Eigenpairs nearest `shift`, sorted by |value - shift|.  Shift-invert
// Arnoldi with explicit residual verification; the subspace grows on
// non-convergence and a full dense solve is the final fallback, so the
// returned pairs always satisfy the residual bound.
std::vector<EigPair> eigs_near(const Eigen::MatrixXcd& h, std::complex<double> shift, int n_want,
                               const EigOptions& opts = {});

// --- single-active-electron models, linear polarization, m = 0 ---

// Field-free eigenbasis representation: per-l blocks of states below e_cut,
// static-field coupling F * z between adjacent l, and a quadratic absorbing
// potential beyond r_cap.  Small and dense; meant for resonance analysis.
struct SaeSpectralModel {
    RadialGrid grid;
    int l_max = 0;
    double e_cut = 0;
    double r_cap = 0;
    std::vector<int> offset;                  // per-l block starts; back() = dim
    std::vector<std::vector<Orbital>> states; // per l, energy ordered
    std::vector<Eigen::MatrixXd> z_up;        // z_up[l]: <l+1 block| z |l block>
    std::vector<Eigen::MatrixXd> cap;         // cap[l]: (r - r_cap)^2 beyond onset

    int dim() const { return offset.back(); }
    int index(int l, int k) const { return offset[l] + k; }
    // H(F) = H0 + F z - i eta W; complex symmetric
    Eigen::MatrixXcd dressed(double field, double eta) const;
};

SaeSpectralModel build_sae_spectral(const RadialGrid& grid, const std::vector<double>& v,
                                    int l_max, double e_cut, double r_cap);

// Grid-space counterpart for time propagation: block tridiagonal in r within
// each l, the length-gauge coupling F(t) r cos-factor between adjacent l and
// the absorber both diagonal in r.  Cost per apply is O(n * l_max).
// diag_clamp > 0 caps the diagonal (the centrifugal spike of high l at the
// innermost nodes, where those waves carry no amplitude) so that the Krylov
// stepper is not slowed down by irrelevant spectral outliers.
class SaeGridHamiltonian final : public HamiltonianOp {
  public:
    SaeGridHamiltonian(const RadialGrid& grid, const std::vector<double>& v, int l_max,
                       std::function<double(double)> field, double eta = 0, double r_cap = 0,
                       double diag_clamp = 0);

    int dim() const override { return m_ * (l_max_ + 1); }
    void apply(double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const override;
    bool complex_symmetric() const override { return eta_ != 0; }

    int n_interior() const { return m_; }
    int l_count() const { return l_max_ + 1; }

    // k-th field-free eigenstate of the l block, embedded in the full space
    Eigen::VectorXcd eigenstate(int l, int k) const;
    // total population in field-free eigenstates with energy < e_max
    double bound_population(const Eigen::VectorXcd& psi, double e_max = 0) const;

  private:
    int m_ = 0, l_max_ = 0;
    double eta_ = 0;
    std::function<double(double)> field_;
    std::vector<double> off_;                // kinetic off-diagonal, shared by l
    std::vector<std::vector<double>> diag_;  // per-l diagonal
    std::vector<double> zdiag_;              // r at interior nodes
    std::vector<double> capdiag_;            // (r - r_cap)^2 beyond onset
    std::vector<double> cdip_;               // <l+1,0|cos|l,0>
};

// --- resonance scans ---

struct ScanPoint {
    double field = 0;
    std::complex<double> energy;
    double overlap = 0; // |v_prev^T v| (adiabatic) or |v_anchor^T v| (diabatic)
};

inline double width_of(std::complex<double> e) { return -2.0 * e.imag(); }

using DressedFn = std::function<Eigen::MatrixXcd(double)>;

// Follow one eigenvalue through the field list by shift continuation: at each
// field the eigenvalue closest to the previous one is taken.
std::vector<ScanPoint> scan_adiabatic(const DressedFn& dressed, const std::vector<double>& fields,
                                      std::complex<double> e_start, const EigOptions& opts = {});

// Track the state's character instead: at each field, among the candidates
// nearest the continued shift, keep the eigenvector with the largest
// unconjugated overlap against the first-field anchor vector.  Through an
// avoided crossing this jumps across the energy gap where the adiabatic
// curve would switch character.
std::vector<ScanPoint> scan_diabatic(const DressedFn& dressed, const std::vector<double>& fields,
                                     std::complex<double> e_start, int n_candidates = 8,
                                     const EigOptions& opts = {});

// Length-gauge CIS matrix dressed with a static field and an absorber acting
// on the virtual orbitals: h0 + F dip - i eta W.
Eigen::MatrixXcd dressed_cis_matrix(const CisBasis& basis, const CisMatrices& mats, double field,
                                    double eta, double r_cap);

// --- quasistatic rate models ---

// Survival of the initial state when the instantaneous loss rate follows the
// static-field width:  P = exp(-int_{t0}^{t1} gamma(|F(t)|) dt).  The rate
// samples are interpolated monotonically and pinned to gamma(0) = 0.
double tunneling_survival(const std::function<double(double)>& field, double t0, double t1,
                          const std::vector<double>& f_samples,
                          const std::vector<double>& gamma_samples);

// Average of rate(|F|) over one cycle of F = f_peak cos(w t):
//   (2/pi) int_0^{pi/2} rate(f_peak cos phi) dphi
double cycle_averaged_rate(const std::function<double(double)>& rate_of_f, double f_peak);

} // namespace tdcis
