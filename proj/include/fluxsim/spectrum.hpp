#ifndef FLUXSIM_SPECTRUM_HPP
#define FLUXSIM_SPECTRUM_HPP

#include <Eigen/Dense>
#include <complex>

#include "fluxsim/circuit.hpp"

namespace fluxsim {

// Eigen-decomposition of the fluxonium at one flux point, with phase and
// charge matrix elements in the (sign-fixed) eigenbasis. Immutable.
struct Spectrum {
    double flux = 0.5;                // external flux, Phi0 units
    int basis_size = 0;
    Eigen::VectorXd energies;         // GHz, ascending, lowest n_levels
    Eigen::MatrixXd phi_elements;     // <i|phi|j>, real symmetric
    Eigen::MatrixXcd n_elements;      // <i|n|j>, i * (real antisymmetric)

    int levels() const { return static_cast<int>(energies.size()); }
    double transition(int i, int j) const { return energies[j] - energies[i]; }
};

inline constexpr int kDefaultBasis = 120;

// H = sqrt(8 EC EL) (N + 1/2) - EJ cos(phi - 2pi flux) in the harmonic basis
// of the L-C subcircuit, oscillator length l = (8 EC / EL)^(1/4). The cosine
// is built from displacement-operator matrix elements, exact in the
// truncated basis.
Eigen::MatrixXd build_hamiltonian(const CircuitParams& params, double flux,
                                  int basis_size = kDefaultBasis);

// Dense symmetric eigensolve of the lowest n_levels; fixes the sign of each
// eigenvector (largest-magnitude component positive) so serialized matrix
// elements are reproducible. Requires n_levels <= basis_size / 4.
Spectrum eigensolve(const CircuitParams& params, double flux,
                    int n_levels = 8, int basis_size = kDefaultBasis);

// Spin-1/2 idealization near the frustration point:
//   H/h = A/2 sx + Delta/2 sz,  A = 4pi <g|phi|e> EL dPhi  (GHz).
// The spectrum must be computed at flux = 0.5.
struct TwoLevelReduction {
    double delta;    // qubit splitting at frustration, GHz
    double a_coeff;  // sigma_x coefficient for the given delta_flux, GHz
};
TwoLevelReduction two_level_reduction(const Spectrum& spec,
                                      const CircuitParams& params,
                                      double delta_flux);

}  // namespace fluxsim

#endif
