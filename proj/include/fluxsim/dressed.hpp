#ifndef FLUXSIM_DRESSED_HPP
#define FLUXSIM_DRESSED_HPP

#include <Eigen/Dense>
#include <map>
#include <utility>
#include <vector>

#include "fluxsim/circuit.hpp"
#include "fluxsim/spectrum.hpp"

namespace fluxsim {

struct Truncation {
    int fluxonium = 8;
    int photons = 5;
    int dim() const { return fluxonium * photons; }
};

// Labeled eigensystem of H = Hf x I + I x wr a'a + g n x (a + a'). Labels are
// assigned by maximum overlap with bare product states; an ambiguous
// assignment throws LabelingError. Immutable after construction.
struct DressedSystem {
    double flux = 0.5;
    double resonator_freq = 0.0;        // GHz, bare
    Truncation trunc;
    Eigen::VectorXd energies;           // GHz, dressed, ascending
    std::vector<std::pair<int, int>> labels;  // dressed index -> (level, photons)
    Eigen::MatrixXcd a_elements;        // resonator lowering op, dressed basis
    Eigen::MatrixXcd drive_elements;    // resonator quadrature (a + a'), dressed basis
    Spectrum bare;                      // fluxonium spectrum used to build this

    int index_of(int level, int photons) const;  // throws DomainError if absent
    double energy_of(int level, int photons) const;
};

DressedSystem build_dressed(const CircuitParams& params, double flux,
                            const Truncation& trunc = {});

// chi_l = [E(l,1) - E(l,0)] - [E(g,1) - E(g,0)] in kHz (chi_g = 0 reference),
// exact from dressed energies. Requires photon cutoff >= 2.
std::map<int, double> dispersive_shifts(const DressedSystem& ds);

// Second-order perturbative shifts, kHz; kept as a cross-check oracle only.
std::map<int, double> dispersive_shifts_perturbative(const CircuitParams& params,
                                                     double flux, double g,
                                                     int n_levels = 12);

// Bisection on g until |chi_e - chi_g| matches target within 1%; returns the
// params with coupling_g set.
CircuitParams calibrate_coupling(const CircuitParams& params, double target_chi_khz,
                                 double flux = 0.5, const Truncation& trunc = {});

// entry(i,j) = normalization * |<i|(a+a')|j>| / |<g0|(a+a')|g1>| in MHz,
// mirroring the device publication's 258 MHz drive normalization (the
// g0->g1 entry reads ~258 MHz; g0->h0 then gives the 80 ns pi pulse).
Eigen::MatrixXd drive_rate_table(const DressedSystem& ds, double normalization_ghz);

// Two-photon effective rates: drive at half the i->f transition,
//   W(i,f) = | sum_m  W_im W_mf / (2 (E_m - E_i - w_drive)) |
// with the one-photon amplitudes W in MHz and denominators in GHz (the
// published table convention). Entries with an intermediate state
// closer than 1 MHz to resonance are flagged divergent (NaN) rather than
// reported as numbers.
Eigen::MatrixXd two_photon_rate_table(const DressedSystem& ds, double normalization_ghz);

}  // namespace fluxsim

#endif
