#ifndef FLUXSIM_CIRCUIT_HPP
#define FLUXSIM_CIRCUIT_HPP

#include <map>
#include <optional>
#include <string>

namespace fluxsim {

// Noise-channel constants. Defaults are the device values; all rates derived
// from these in noise.cpp.
struct NoiseParams {
    double q_cap = 1.0 / 8e-6;   // capacitor quality (inverse loss tangent)
    double q_ind = 5e9;          // superinductor quality
    double q_c = 7.4e4;          // charge-line quality
    double r_fluxline = 26.0;    // Ohm, last resistor of the flux-line attenuator
    double mutual_m = 1.0 / 1.6; // Phi0 per mA, flux-line mutual
    double eta_1f = 5.21;        // 1/f flux-noise amplitude, uPhi0
    double t_bath_diel = 42.0;   // mK
    double t_bath_purcell = 60.0;  // mK
    double t_c = 300.0;          // us, white-noise echo time at frustration
    std::optional<double> omega_ir;  // rad/s infrared cutoff (Ramsey only, no default)

    void validate() const;  // throws DomainError
};

// Fluxonium energies plus resonator and coupling; the single source of
// device truth. All energies are E/h in GHz.
struct CircuitParams {
    double e_c = 0.479;
    double e_j = 3.395;
    double e_l = 0.132;
    double resonator_freq = 5.7;  // GHz
    double resonator_q = 600.0;
    double coupling_g = 0.0;      // GHz charge coupling; 0 = not yet calibrated
    NoiseParams noise;

    void validate() const;  // throws DomainError; requires e_j > e_l

    // Resonator photon-loss rate kappa = f_r / Q, in MHz (= 1/us).
    double kappa_mhz() const { return resonator_freq * 1e3 / resonator_q; }
};

// Flat key-value device config ("key = value", '#' comments).
CircuitParams load_config(const std::string& path);
CircuitParams parse_config(const std::string& text);

}  // namespace fluxsim

#endif
