#pragma once

#include "tdcis/cis.hpp"
#include "tdcis/pulse.hpp"

#include <Eigen/Core>

#include <vector>

namespace tdcis {

// outgoing flux removed from the excitation amplitudes at one instant
struct SplitEvent {
    double t = 0;
    // packets[ch][l]: radial u-type function of the split-off l partial wave
    // of channel ch; empty for l outside the channel's range
    std::vector<std::vector<Eigen::VectorXcd>> packets;
    // norm^2 of the removed piece, accumulated over channels at split time
    double removed_norm2 = 0;
};

// Multiplicative sigmoid splitting of the channel wave functions:
//   S(r) = 1 / (1 + exp(-(r - r_c)/delta))
// Each split projects S * chi_ch back onto the channel's virtuals, removes
// those coefficients from alpha and returns the removed piece on the grid.
// The ground amplitude is never touched.  r_c must keep the sigmoid tail off
// the origin (r_c >= 20 delta) and the split region inside the box
// (r_c <= r_max - 5 delta).
class Splitter {
  public:
    Splitter(const CisBasis& basis, double r_c, double delta);

    SplitEvent split(double t, Eigen::VectorXcd& alpha) const;
    const std::vector<double>& mask() const { return s_; }
    double r_c() const { return r_c_; }

  private:
    const CisBasis* basis_;
    double r_c_ = 0, delta_ = 0;
    std::vector<double> s_;                // S(r) on the nodes
    std::vector<Eigen::MatrixXd> smat_;    // per l: <u_a| S |u_b> over virtuals
};

// Residual-ion amplitude evolution from each event time to t_final:
//   i dU/dt = [-diag(eps_hole) - c(t) hole_dip^T] U
// with c(t) = -iA(t) (velocity) or F(t) (length).  The diagonal hole-energy
// phase is always present; channel_mixing = false drops only the field-driven
// hole-hole coupling.  Returns U(t_final, times[k]) for every k.
std::vector<Eigen::MatrixXcd> ion_evolution(const CisBasis& basis, const CisMatrices& mats,
                                            const Pulse& pulse, const std::vector<double>& times,
                                            double t_final, bool channel_mixing, double dt = 0.02);

} // namespace tdcis
