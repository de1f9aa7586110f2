#pragma once

#include "tdcis/cis.hpp"
#include "tdcis/propagator.hpp"
#include "tdcis/pulse.hpp"
#include "tdcis/splitting.hpp"

#include <Eigen/Core>

#include <vector>

namespace tdcis {

struct PesParams {
    double e_min = 0.01;
    double e_max = 2.0;
    int n_energy = 200;        // energies, equally spaced, endpoints included
    int n_theta = 101;         // polar angles on [0, pi], odd for Simpson
    bool channel_mixing = true;
    double ion_dt = 0.02;      // step of the ion-amplitude evolution
};

// angle- and energy-resolved photoelectron distributions, final-hole resolved
struct PesSpectrum {
    std::vector<double> energy;
    std::vector<double> theta;
    std::vector<Eigen::MatrixXd> by_channel; // d2P/dE dOmega, (n_energy x n_theta)
    Eigen::MatrixXd total;
    std::vector<std::vector<double>> dpde_by_channel; // 2 pi int sin(th) d(th)
    std::vector<double> dpde;

    double yield_total() const;              // trapezoid over the energy grid
    std::vector<double> yield_by_channel() const;
};

// Coherent Volkov synthesis of the split events at observation time t_final:
// every packet acquires the free-electron phase
//   Phi = p^2/2 (T - t_n) + p cos(th) int A + 1/2 int A^2
// accumulated from its birth, and the residual-ion amplitudes are carried to
// T by ion_evolution.  Velocity-gauge matrices are required, matching the
// plane-wave character of the detached electron.
PesSpectrum volkov_synthesis(const CisBasis& basis, const CisMatrices& mats, const Pulse& pulse,
                             const std::vector<SplitEvent>& events, double t_final,
                             const PesParams& par);

struct SplitRun {
    std::vector<SplitEvent> events;
    Eigen::VectorXcd alpha; // remaining inner amplitudes at t_final
    double t_final = 0;
};

// Ground-state start, propagation across the pulse plus a field-free drain,
// splitting every `cadence` and once more at the very end.
SplitRun propagate_with_splitting(const CisBasis& basis, const CisMatrices& mats,
                                  const Pulse& pulse, const Splitter& splitter, double cadence,
                                  double drain_time, const PropagatorOptions& opt);

} // namespace tdcis
