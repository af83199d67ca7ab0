#ifndef FLUXSIM_NOISE_HPP
#define FLUXSIM_NOISE_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fluxsim/circuit.hpp"
#include "fluxsim/dressed.hpp"
#include "fluxsim/spectrum.hpp"

namespace fluxsim {

// Relaxation channels for the g-e transition. All rates are equilibration
// rates (up + down, hence the coth factors) in 1/us, evaluated from the
// spectrum at the flux point it was computed at.

double gamma_dielectric(const Spectrum& spec, const NoiseParams& np, double e_c);
double gamma_flux_line(const Spectrum& spec, const NoiseParams& np, double e_l);
double gamma_one_over_f(const Spectrum& spec, const NoiseParams& np, double e_l);
double gamma_charge_line(const Spectrum& spec, const NoiseParams& np);
double gamma_inductive(const Spectrum& spec, const NoiseParams& np, double e_l);

// Generic transition variants used for the plasmon lifetimes.
double gamma_charge_line_pair(const Spectrum& spec, const NoiseParams& np, int i, int j);
double gamma_dielectric_pair(const Spectrum& spec, const NoiseParams& np, double e_c,
                             int i, int j);

// Thermal Purcell rates between fluxonium levels, summed over resonator
// photon numbers with thermal weights P_res(n):
//   up:   sum_nn' P(n) kappa n_th(w)        |<l'n'|a'|ln>|^2
//   down: sum_nn' P(n) kappa (n_th(|w|)+1)  |<l'n'|a|ln>|^2
// kappa in MHz is used directly as a rate in 1/us. Returns the full matrix
// Gamma(l -> l') in 1/us.
Eigen::MatrixXd purcell_rates(const DressedSystem& ds, double kappa_mhz, double t_bath_mk);

// One (n,n') term pair split out for the detailed-balance property test.
struct PurcellPair {
    double up;    // (l,n) -> (l',n') with E increasing
    double down;  // reverse
    double freq;  // transition frequency, GHz
};
PurcellPair purcell_pair(const DressedSystem& ds, double kappa_mhz, double t_bath_mk,
                         int l, int n, int lp, int np_);

struct CoherencePoint {
    double flux = 0.0;
    bool ok = false;            // false: labeling collision, values are NaN
    double t1_dielectric_us = 0.0;
    double t1_fluxline_us = 0.0;
    double t1_one_over_f_us = 0.0;
    double t1_chargeline_us = 0.0;
    double t1_inductive_us = 0.0;
    double t1_purcell_us = 0.0;
    double t1_total_us = 0.0;
    double t2e_us = 0.0;
    double qubit_freq_ghz = 0.0;
};

// Per-channel and combined T1 over a flux grid; 1/T1_total = sum of channel
// rates. Points where dressed labeling collides are flagged, not fixed.
std::vector<CoherencePoint> total_t1_curve(const CircuitParams& params,
                                           const std::vector<double>& flux_grid,
                                           const Truncation& trunc = {});

// Spin-echo dephasing model with n_pi = 3 echo pulses:
//   W = 4 ln2 - (9/4) ln3,  T_phi = 1 / (sqrt(W) eta |dw/dPhi|),
//   T2e solves exp(-T/T_C - T^2/T_phi^2) = 1/e in closed form.
double echo_w_constant(int n_pi = 3);  // only n_pi = 3 supported
double t2e_at(const CircuitParams& params, double flux, int n_pi = 3,
              int basis_size = kDefaultBasis);
std::vector<double> t2e_curve(const CircuitParams& params,
                              const std::vector<double>& flux_grid, int n_pi = 3);

// Qubit frequency slope dw/dPhi (rad/us per Phi0) by central difference,
// step 1e-5 Phi0.
double qubit_flux_slope(const CircuitParams& params, double flux,
                        double step = 1e-5, int basis_size = kDefaultBasis);

// Closed-form solution T of exp(-T/t_c - T^2/t_phi^2) = 1/e.
double t2e_closed_form(double t_c_us, double t_phi_us);

// Ramsey pure-dephasing time at a flux point; gated behind an explicit
// infrared cutoff (no default exists).
double t_phi_ramsey(const CircuitParams& params, double flux, double omega_ir_rad_s,
                    double t_us);

}  // namespace fluxsim

#endif
