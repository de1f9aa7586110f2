#pragma once

#include "tdcis/grid.hpp"
#include "tdcis/propagator.hpp"

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <vector>

namespace tdcis {

enum class Gauge { Velocity, Length };

// one hole state: an occupied orbital with a definite magnetic quantum number
struct Channel {
    int occ;    // index into CisBasis::occupied
    int l, m;
    double energy;
};

struct VirtRef {
    int l, j; // position inside VirtualSpace::by_l
};

// Singly-excited space over a closed shell.  Amplitudes are laid out as
//   [ ground, block(channel 0), block(channel 1), ... ]
// with each channel block running over that channel's virtuals ordered by
// (l, then energy).  Linear polarization conserves m, so a channel only
// couples to virtuals with the hole's own m.
struct CisBasis {
    RadialGrid grid;
    std::vector<double> v_mf;
    std::vector<Orbital> occupied;
    VirtualSpace virtuals;
    std::vector<Channel> channels;
    std::vector<std::vector<VirtRef>> channel_virt;
    std::vector<int> offsets;
    int total_dim = 0;

    int dim() const { return total_dim; }
    int n_channels() const { return static_cast<int>(channels.size()); }
    int block_size(int ch) const { return static_cast<int>(channel_virt[ch].size()); }
    int index(int ch, int k) const { return offsets[ch] + k; }
    const Orbital& virt(const VirtRef& v) const { return virtuals.by_l[v.l][v.j]; }
};

// active_occ selects which occupied shells contribute channels (empty = all)
CisBasis build_cis_basis(const RadialGrid& grid, const std::vector<double>& v_mf, int n_elec,
                         int l_max, double e_cut, const std::vector<int>& active_occ = {});

struct CisMatrices {
    Gauge gauge = Gauge::Velocity;
    // field-free part: orbital-energy differences plus the direct/exchange
    // particle-hole couplings; real symmetric, ground row/column zero
    Eigen::MatrixXd h0;
    // field-coupling structure; the ground row carries twice the bare
    // element, the ground column sqrt(2) times it.  The full interaction is
    //   velocity: -i A(t) dip      length: F(t) dip
    Eigen::MatrixXd dip;
    // bare one-electron elements between the channel holes (same structure
    // and gauge as dip); drives the ionic mixing of split-off amplitudes
    Eigen::MatrixXd hole_dip;
};

// l_max_multipole < 0 selects the default 2*l_max of the orbital basis, which
// covers every multipole the basis can resolve
CisMatrices build_cis_matrices(const CisBasis& basis, Gauge gauge, int l_max_multipole = -1);

// weighted double integral of density1(r1) density2(r2) r_<^L / r_>^{L+1},
// evaluated with in/out prefix recursions (no overflow for any L)
double slater_rl(const RadialGrid& grid, int big_l, const std::vector<double>& density1,
                 const std::vector<double>& density2);

// <b| d/dz |a> or <b| z |a>; requires l_b = l_a +- 1 and a common m
double dipole_element(const RadialGrid& grid, const Orbital& b, const Orbital& a, int m,
                      Gauge gauge);

double cis_norm(const Eigen::VectorXcd& alpha);
double cis_field_free_energy(const CisMatrices& mats, const Eigen::VectorXcd& alpha);
std::vector<double> channel_populations(const CisBasis& basis, const Eigen::VectorXcd& alpha);

// i d/dt alpha = [h0 + c(t) * dip] alpha with c(t) = -i A(t) (velocity) or
// F(t) (length)
class CisHamiltonian final : public HamiltonianOp {
  public:
    CisHamiltonian(const CisMatrices& mats, std::function<double(double)> field_coef)
        : mats_(&mats), coef_(std::move(field_coef)) {}

    int dim() const override { return static_cast<int>(mats_->h0.rows()); }
    void apply(double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const override;

  private:
    const CisMatrices* mats_;
    std::function<double(double)> coef_;
};

} // namespace tdcis
