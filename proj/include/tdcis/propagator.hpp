#pragma once

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <vector>

namespace tdcis {

class HamiltonianOp {
  public:
    virtual ~HamiltonianOp() = default;
    virtual int dim() const = 0;
    // out = H(t) * in
    virtual void apply(double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const = 0;
    // true when an absorbing term makes the matrix complex symmetric; the
    // short-recurrence integrator then uses the unconjugated bilinear form
    virtual bool complex_symmetric() const { return false; }
};

enum class Integrator { Rk4, Lanczos };

struct PropagatorOptions {
    Integrator method = Integrator::Lanczos;
    double dt = 0.05;
    int krylov_dim = 12;
};

// Called at each requested sample time; may modify the state in place
// (wave-function splitting).  Stepping always lands exactly on sample times.
using SampleHook = std::function<void(double, Eigen::VectorXcd&)>;

void propagate(const HamiltonianOp& h, Eigen::VectorXcd& psi, double t0, double t1,
               const PropagatorOptions& opt, const std::vector<double>& sample_times = {},
               const SampleHook& hook = {});

// single steps of i d/dt psi = H psi, exposed for direct comparison tests
void rk4_step(const HamiltonianOp& h, double t, double dt, Eigen::VectorXcd& psi);
void lanczos_step(const HamiltonianOp& h, double t, double dt, int krylov_dim,
                  Eigen::VectorXcd& psi);

} // namespace tdcis
