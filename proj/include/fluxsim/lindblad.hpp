#ifndef FLUXSIM_LINDBLAD_HPP
#define FLUXSIM_LINDBLAD_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "fluxsim/pulses.hpp"

namespace fluxsim {

using MatX = Eigen::MatrixXcd;

// Master-equation spec over a truncated space. The Hamiltonian callback
// returns H/h in GHz at time t (ns); collapse operators carry their rates
// inside (L = sqrt(rate) * op).
struct LindbladSpec {
    int dim = 0;
    std::function<MatX(double)> hamiltonian;  // may be null for H = 0
    std::vector<MatX> collapse;               // sqrt-rate included, 1/ns units
    MatX initial;                             // density matrix
    double t_final_ns = 0.0;
    double sample_dt_ns = 10.0;

    void validate() const;  // Hermiticity, unit trace, PSD of initial state
};

struct LindbladSample {
    double t_ns;
    Eigen::VectorXd populations;  // diagonal of rho
    double trace;
    double min_eigenvalue;
};

struct LindbladResult {
    std::vector<LindbladSample> samples;
    MatX final_rho;
    double max_trace_error = 0.0;
    double min_eigenvalue = 0.0;
};

// Adaptive RK45 (Dormand-Prince) integration of
//   drho/dt = -i 2pi [H, rho] + sum_k (L rho L' - 1/2 {L'L, rho}).
// Trace is monitored, not renormalized.
LindbladResult evolve(const LindbladSpec& spec, double rtol = 1e-8, double atol = 1e-10);

// Two-level master equation under a pulse, integrated piecewise between the
// pulse's amplitude kinks. Collapse operators carry sqrt(rate) in 1/ns.
MatX evolve_pulse(const PulseProgram& gate, const std::vector<MatX>& collapse,
                  const MatX& rho0, double rtol = 1e-11, double atol = 1e-14);

// Average gate infidelity of a pulse under relaxation T1 and pure dephasing
// 1/T_phi = 1/T2 - 1/(2 T1): two-level Lindblad evolution averaged over the
// six cardinal input states against the ideal unitary. Requires t2 <= 2 t1.
double decoherence_limited_error(const PulseProgram& gate, double t1_us, double t2_us);

// 4x4 superoperator (column-major vec convention) of the same two-level
// noisy gate; used to compose RB sequences cheaply.
Eigen::Matrix4cd gate_superoperator(const PulseProgram& gate, double t1_us, double t2_us);

namespace detail {
// Shared adaptive Dormand-Prince stepper over matrix-valued ODEs.
void integrate_rk45(const std::function<MatX(double, const MatX&)>& deriv, MatX& y,
                    double t0, double t1, double rtol, double atol,
                    const std::function<void(double, const MatX&)>& on_sample,
                    double sample_dt);
}  // namespace detail

}  // namespace fluxsim

#endif
