#include "fluxsim/noise.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "fluxsim/errors.hpp"
#include "fluxsim/units.hpp"

namespace fluxsim {

using units::thermal_coth;

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kPiCubed = M_PI * M_PI * M_PI;

double qubit_freq(const Spectrum& s) { return s.transition(0, 1); }
double phi_ge_sq(const Spectrum& s) { return s.phi_elements(0, 1) * s.phi_elements(0, 1); }
}  // namespace

// Gamma = (hbar w^2 / 8 E_C Q_cap) coth(hbar w / 2 kT) |<i|phi|j>|^2.
// In E/h units this is pi f^2/(4 e_c Q_cap) coth(...) phi^2 in 1/ns.
double gamma_dielectric_pair(const Spectrum& spec, const NoiseParams& np, double e_c,
                             int i, int j) {
    const double f = std::abs(spec.transition(i, j));
    if (f == 0.0) return 0.0;  // w^2 prefactor beats the coth pole
    const double phi2 = spec.phi_elements(i, j) * spec.phi_elements(i, j);
    const double rate_ns =
        M_PI * f * f / (4.0 * e_c * np.q_cap) * thermal_coth(f, np.t_bath_diel) * phi2;
    return rate_ns * 1e3;
}

double gamma_dielectric(const Spectrum& spec, const NoiseParams& np, double e_c) {
    return gamma_dielectric_pair(spec, np, e_c, 0, 1);
}

// Johnson-Nyquist current noise of the flux-line terminating resistor:
// Gamma = pi^3 (R_Q/R) (M/L)^2 phi^2 w coth(...), L = Phi0^2 / (2 E_L).
double gamma_flux_line(const Spectrum& spec, const NoiseParams& np, double e_l) {
    const double f = qubit_freq(spec);
    const double el_joule = units::planck_J_s * e_l * 1e9;
    const double m_over_l = np.mutual_m * 1e3 * 2.0 * el_joule / units::Phi0_Wb;
    const double w = kTwoPi * f * 1e9;  // rad/s
    const double rate_s = kPiCubed * (units::RQ_ohm / np.r_fluxline) * m_over_l * m_over_l *
                          phi_ge_sq(spec) * w * thermal_coth(f, np.t_bath_diel);
    return rate_s * 1e-6;
}

// Gamma = 8 pi^3 (E_L/hbar)^2 (eta/Phi0)^2 phi^2 / w.
double gamma_one_over_f(const Spectrum& spec, const NoiseParams& np, double e_l) {
    const double f = qubit_freq(spec);
    if (f == 0.0) return std::numeric_limits<double>::infinity();
    const double el_rad_s = kTwoPi * e_l * 1e9;
    const double eta = np.eta_1f * 1e-6;  // Phi0 units
    const double rate_s = 8.0 * kPiCubed * el_rad_s * el_rad_s * eta * eta *
                          phi_ge_sq(spec) / (kTwoPi * f * 1e9);
    return rate_s * 1e-6;
}

double gamma_charge_line_pair(const Spectrum& spec, const NoiseParams& np, int i, int j) {
    const double f = std::abs(spec.transition(i, j));
    const double w = kTwoPi * f * 1e9;
    const double rate_s = w / np.q_c * thermal_coth(f, np.t_bath_diel) *
                          std::norm(spec.n_elements(i, j));
    return rate_s * 1e-6;
}

// Gamma = (w/Q_c) coth(...) |<g|n|e>|^2.
double gamma_charge_line(const Spectrum& spec, const NoiseParams& np) {
    return gamma_charge_line_pair(spec, np, 0, 1);
}

// Gamma = (E_L / hbar Q_ind) coth(...) phi^2.
double gamma_inductive(const Spectrum& spec, const NoiseParams& np, double e_l) {
    const double f = qubit_freq(spec);
    const double el_rad_s = kTwoPi * e_l * 1e9;
    const double rate_s = el_rad_s / np.q_ind * thermal_coth(f, np.t_bath_diel) *
                          phi_ge_sq(spec);
    return rate_s * 1e-6;
}

namespace {

double purcell_term(const DressedSystem& ds, double kappa_mhz, double t_bath_mk,
                    int i, int f) {
    const double w = ds.energies[f] - ds.energies[i];
    if (w > 0.0) {  // upward: bath photon absorbed through a'
        return kappa_mhz * units::n_thermal(w, t_bath_mk) * std::norm(ds.a_elements(i, f));
        // <f|a'|i> = <i|a|f>^*
    }
    return kappa_mhz * (units::n_thermal(-w, t_bath_mk) + 1.0) * std::norm(ds.a_elements(f, i));
}

}  // namespace

Eigen::MatrixXd purcell_rates(const DressedSystem& ds, double kappa_mhz, double t_bath_mk) {
    const int nf = ds.trunc.fluxonium;
    const int np = ds.trunc.photons;

    // Thermal resonator weights P_res(n) over the retained photon states.
    Eigen::VectorXd pres(np);
    const double x = units::h_over_kB_K_per_GHz * ds.resonator_freq / (1e-3 * t_bath_mk);
    double norm = 0.0;
    for (int n = 0; n < np; ++n) {
        pres[n] = std::exp(-n * x);
        norm += pres[n];
    }
    pres /= norm;
    if (pres[np - 1] > 1e-4)
        std::fprintf(stderr,
                     "warning: purcell photon cutoff insufficient, top-level thermal "
                     "weight %.2e > 1e-4\n",
                     pres[np - 1]);

    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(nf, nf);
    for (int l = 0; l < nf; ++l) {
        for (int lp = 0; lp < nf; ++lp) {
            if (lp == l) continue;
            double sum = 0.0;
            for (int n = 0; n < np; ++n)
                for (int n2 = 0; n2 < np; ++n2)
                    sum += pres[n] * purcell_term(ds, kappa_mhz, t_bath_mk,
                                                  ds.index_of(l, n), ds.index_of(lp, n2));
            gamma(l, lp) = sum;
        }
    }
    return gamma;
}

PurcellPair purcell_pair(const DressedSystem& ds, double kappa_mhz, double t_bath_mk,
                         int l, int n, int lp, int np_) {
    const int i = ds.index_of(l, n);
    const int f = ds.index_of(lp, np_);
    PurcellPair p;
    p.freq = std::abs(ds.energies[f] - ds.energies[i]);
    if (ds.energies[f] > ds.energies[i]) {
        p.up = purcell_term(ds, kappa_mhz, t_bath_mk, i, f);
        p.down = purcell_term(ds, kappa_mhz, t_bath_mk, f, i);
    } else {
        p.up = purcell_term(ds, kappa_mhz, t_bath_mk, f, i);
        p.down = purcell_term(ds, kappa_mhz, t_bath_mk, i, f);
    }
    return p;
}

double echo_w_constant(int n_pi) {
    if (n_pi != 3)
        throw DomainError("only n_pi = 3 is supported (no W constant for other counts)");
    return 4.0 * std::log(2.0) - 2.25 * std::log(3.0);
}

double qubit_flux_slope(const CircuitParams& params, double flux, double step,
                        int basis_size) {
    auto split = [&](double fl) {
        Spectrum s = eigensolve(params, fl, 2, basis_size);
        return s.transition(0, 1);
    };
    const double dfdphi = (split(flux + step) - split(flux - step)) / (2.0 * step);
    return kTwoPi * dfdphi * 1e3;  // GHz/Phi0 -> rad/us per Phi0
}

double t2e_closed_form(double t_c_us, double t_phi_us) {
    if (!std::isfinite(t_phi_us)) return t_c_us;
    const double a = 1.0 / (t_phi_us * t_phi_us);
    const double b = 1.0 / t_c_us;
    return (std::sqrt(b * b + 4.0 * a) - b) / (2.0 * a);
}

double t2e_at(const CircuitParams& params, double flux, int n_pi, int basis_size) {
    const double w = echo_w_constant(n_pi);
    const double slope = std::abs(qubit_flux_slope(params, flux, 1e-5, basis_size));
    const double eta = params.noise.eta_1f * 1e-6;
    const double gamma_phi = std::sqrt(w) * eta * slope;  // 1/us
    // Flux-insensitive point: the symmetric difference vanishes to solver
    // noise; treat slopes below 1e-6 GHz/Phi0 as exactly zero.
    if (gamma_phi < std::sqrt(w) * eta * kTwoPi * 1e-6 * 1e3)
        return params.noise.t_c;
    return t2e_closed_form(params.noise.t_c, 1.0 / gamma_phi);
}

std::vector<double> t2e_curve(const CircuitParams& params,
                              const std::vector<double>& flux_grid, int n_pi) {
    std::vector<double> out;
    out.reserve(flux_grid.size());
    for (double fl : flux_grid) out.push_back(t2e_at(params, fl, n_pi));
    return out;
}

double t_phi_ramsey(const CircuitParams& params, double flux, double omega_ir_rad_s,
                    double t_us) {
    if (!(omega_ir_rad_s > 0.0))
        throw DomainError("Ramsey T_phi requires an explicit infrared cutoff");
    const double lg = std::log(omega_ir_rad_s * t_us * 1e-6);
    if (!(lg > 0.0)) throw DomainError("omega_ir * t must exceed 1");
    const double slope = std::abs(qubit_flux_slope(params, flux));
    const double eta = params.noise.eta_1f * 1e-6;
    return 1.0 / (std::sqrt(2.0) * eta * slope * std::sqrt(lg));
}

std::vector<CoherencePoint> total_t1_curve(const CircuitParams& params,
                                           const std::vector<double>& flux_grid,
                                           const Truncation& trunc) {
    std::vector<CoherencePoint> out;
    out.reserve(flux_grid.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double fl : flux_grid) {
        CoherencePoint pt;
        pt.flux = fl;
        Spectrum s = eigensolve(params, fl, 6, kDefaultBasis);
        pt.qubit_freq_ghz = s.transition(0, 1);
        const double g_diel = gamma_dielectric(s, params.noise, params.e_c);
        const double g_flux = gamma_flux_line(s, params.noise, params.e_l);
        const double g_1f = gamma_one_over_f(s, params.noise, params.e_l);
        const double g_charge = gamma_charge_line(s, params.noise);
        const double g_ind = gamma_inductive(s, params.noise, params.e_l);
        double g_purcell = nan;
        try {
            DressedSystem ds = build_dressed(params, fl, trunc);
            Eigen::MatrixXd pm = purcell_rates(ds, params.kappa_mhz(),
                                               params.noise.t_bath_purcell);
            g_purcell = pm(1, 0) + pm(0, 1);  // e->g plus thermal reverse
            pt.ok = true;
        } catch (const LabelingError&) {
            pt.ok = false;  // skip-and-flag
        }
        auto inv = [](double g) {
            return g > 0.0 ? 1.0 / g : std::numeric_limits<double>::infinity();
        };
        pt.t1_dielectric_us = inv(g_diel);
        pt.t1_fluxline_us = inv(g_flux);
        pt.t1_one_over_f_us = inv(g_1f);
        pt.t1_chargeline_us = inv(g_charge);
        pt.t1_inductive_us = inv(g_ind);
        pt.t1_purcell_us = pt.ok ? inv(g_purcell) : nan;
        pt.t1_total_us = pt.ok
            ? 1.0 / (g_diel + g_flux + g_1f + g_charge + g_ind + g_purcell)
            : nan;
        pt.t2e_us = t2e_at(params, fl);
        out.push_back(pt);
    }
    return out;
}

}  // namespace fluxsim
