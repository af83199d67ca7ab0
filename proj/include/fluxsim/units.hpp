#ifndef FLUXSIM_UNITS_HPP
#define FLUXSIM_UNITS_HPP

#include <cmath>

namespace fluxsim {

// Unit conventions used throughout:
//   energies as frequencies E/h in GHz, times in ns (coherence times in us),
//   external flux in units of Phi0, temperatures in mK.
// GHz * ns = 1, so phase evolution is exp(-i * 2pi * (E/h)[GHz] * t[ns]).

namespace units {

inline constexpr double h_over_kB_K_per_GHz = 0.0479924307337;  // h/kB
inline constexpr double planck_J_s = 6.62607015e-34;
inline constexpr double hbar_J_s = 1.054571817e-34;
inline constexpr double kB_J_per_K = 1.380649e-23;
inline constexpr double e_charge_C = 1.602176634e-19;
inline constexpr double Phi0_Wb = 2.067833848e-15;          // h/2e
inline constexpr double RQ_ohm = 25812.807459;              // h/e^2

// coth(h f / 2 kT) for f in GHz, T in mK; series near the origin keeps the
// f -> 0 limit finite when multiplied by f or f^2 prefactors.
inline double thermal_coth(double f_ghz, double t_mk) {
    const double x = h_over_kB_K_per_GHz * f_ghz / (2.0e-3 * t_mk);
    if (std::abs(x) < 1e-4) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

// Bose occupation at f (GHz), T (mK).
inline double n_thermal(double f_ghz, double t_mk) {
    const double x = h_over_kB_K_per_GHz * f_ghz / (1.0e-3 * t_mk);
    return 1.0 / std::expm1(x);
}

}  // namespace units
}  // namespace fluxsim

#endif
