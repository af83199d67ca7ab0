#include "fluxsim/reset.hpp"

#include <cmath>

#include "fluxsim/errors.hpp"
#include "fluxsim/noise.hpp"
#include "fluxsim/units.hpp"

namespace fluxsim {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// One co- or counter-rotating drive term in the interaction picture of the
// dressed Hamiltonian: amp/2 * |i><j| e^{i 2pi f t} + h.c.
struct DriveTerm {
    int i, j;
    std::complex<double> amp;  // GHz
    double freq;               // GHz, phase frequency (can be ~0 on resonance)
};

}  // namespace

ResetResult simulate_reset(const CircuitParams& params, const ResetConfig& cfg) {
    CircuitParams p = params;
    if (p.coupling_g <= 0.0)
        throw DomainError("simulate_reset needs a calibrated coupling_g");

    DressedSystem ds = build_dressed(p, 0.5, cfg.trunc);
    const int dim = cfg.trunc.dim();
    const int i_g0 = ds.index_of(0, 0), i_e0 = ds.index_of(1, 0);
    const int i_h0 = ds.index_of(3, 0), i_e1 = ds.index_of(1, 1);

    // Tone-1 Rabi from the drive-rate table (80-90 ns pi pulse); tone-2 from
    // the reset knob unless explicitly overridden.
    Eigen::MatrixXd table = drive_rate_table(ds, cfg.normalization_ghz);
    ResetResult res;
    res.rabi_g0h0_mhz = cfg.rabi_g0h0_mhz >= 0.0 ? cfg.rabi_g0h0_mhz : table(i_g0, i_h0);
    res.rabi_h0e1_mhz = cfg.rabi_h0e1_mhz >= 0.0 ? cfg.rabi_h0e1_mhz
                                                 : kDefaultResetRabiH0E1Mhz;

    const double w1 = ds.energies[i_h0] - ds.energies[i_g0];  // GHz
    const double w2 =
        ds.energies[i_e1] - ds.energies[i_h0] + cfg.tone2_offset_mhz * 1e-3;
    // Field amplitudes: Rabi = eps * |X_addressed|  (GHz units).
    const double x1 = std::abs(ds.drive_elements(i_g0, i_h0));
    const double x2 = std::abs(ds.drive_elements(i_h0, i_e1));
    if (x1 < 1e-12 || x2 < 1e-12)
        throw LabelingError("reset drive addresses a vanishing transition element");
    const double eps1 = res.rabi_g0h0_mhz * 1e-3 / x1;
    const double eps2 = res.rabi_h0e1_mhz * 1e-3 / x2;

    // Interaction picture: term (i>j) from tone k picks phases
    // (E_i - E_j) -+ w_k; both rotating and counter-rotating retained up to
    // the cutoff, so the second tone's action on the first transition (and
    // vice versa) is kept.
    std::vector<DriveTerm> terms;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            if (i <= j) continue;
            const std::complex<double> x = ds.drive_elements(i, j);
            if (std::abs(x) < 1e-9) continue;
            const double de = ds.energies[i] - ds.energies[j];
            for (auto [eps, wd] : {std::pair{eps1, w1}, std::pair{eps2, w2}}) {
                if (eps <= 0.0) continue;
                for (double sign : {-1.0, 1.0}) {
                    const double f = de + sign * wd;
                    if (std::abs(f) > cfg.freq_cutoff_ghz) continue;
                    terms.push_back({i, j, 0.5 * eps * x, f});
                }
            }
        }
    }

    // Secular photon-loss jumps: every downward dressed pair with rate
    // kappa |<f|a|i>|^2. Invariant under the diagonal frame change.
    const double kappa = cfg.kappa_off ? 0.0 : params.kappa_mhz() * 1e-3;  // 1/ns
    Eigen::MatrixXd loss = Eigen::MatrixXd::Zero(dim, dim);  // loss(f, i)
    Eigen::VectorXd outflow = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i)
        for (int f = 0; f < dim; ++f) {
            if (f == i || ds.energies[f] >= ds.energies[i]) continue;
            const double r = kappa * std::norm(ds.a_elements(f, i));
            loss(f, i) = r;
            outflow[i] += r;
        }

    // Intrinsic fluxonium relaxation (dielectric plus charge-line) between
    // retained levels at fixed photon number, decay only. The plasmon
    // lifetimes of the f and h levels are a few us and gate the tail of the
    // reset; the 300-us qubit pair contributes negligibly over 15 us.
    // Thermal re-excitation of the plasmon band (the few-percent f-state
    // thermal population) is a state-preparation error, not part of the
    // pumping dynamics, and stays out.
    for (int lu = 0; lu < cfg.trunc.fluxonium; ++lu) {
        for (int ld = 0; ld < lu; ++ld) {
            const double g_tot = (gamma_dielectric_pair(ds.bare, p.noise, p.e_c, ld, lu) +
                                  gamma_charge_line_pair(ds.bare, p.noise, ld, lu)) *
                                 1e-3;  // 1/ns, equilibration (up + down)
            if (g_tot < 1e-15) continue;
            const double nbar =
                units::n_thermal(std::abs(ds.bare.transition(ld, lu)), p.noise.t_bath_diel);
            const double g_down = g_tot * (nbar + 1.0) / (2.0 * nbar + 1.0);
            for (int n = 0; n < cfg.trunc.photons; ++n) {
                const int iu = ds.index_of(lu, n), id = ds.index_of(ld, n);
                loss(id, iu) += g_down;
                outflow[iu] += g_down;
            }
        }
    }

    auto deriv = [&](double t, const MatX& rho) {
        MatX d = MatX::Zero(dim, dim);
        // -i 2pi [V, rho] applied term by term (V is a sparse sum of
        // |i><j| e^{i 2pi f t} + h.c.), cheaper than forming V.
        const std::complex<double> c(0.0, -kTwoPi);
        for (const auto& tm : terms) {
            const std::complex<double> z =
                tm.amp * std::exp(std::complex<double>(0.0, kTwoPi * tm.freq * t));
            const std::complex<double> zb = std::conj(z);
            d.row(tm.i) += (c * z) * rho.row(tm.j);
            d.col(tm.j) -= (c * z) * rho.col(tm.i);
            d.row(tm.j) += (c * zb) * rho.row(tm.i);
            d.col(tm.i) -= (c * zb) * rho.col(tm.j);
        }
        for (int a = 0; a < dim; ++a) {
            for (int b = 0; b < dim; ++b) {
                if (a == b) continue;
                d(a, a) += loss(a, b) * rho(b, b).real();
            }
        }
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                d(a, b) -= 0.5 * (outflow[a] + outflow[b]) * rho(a, b);
        return d;
    };

    // Evenly mixed thermal start across the qubit doublet.
    MatX rho = MatX::Zero(dim, dim);
    rho(i_g0, i_g0) = 0.5;
    rho(i_e0, i_e0) = 0.5;

    const double t_final = cfg.duration_us * 1e3;
    const double sample_dt = cfg.sample_dt_us * 1e3;
    res.labels = ds.labels;
    res.t_us.push_back(0.0);
    res.p_e0.push_back(rho(i_e0, i_e0).real());
    res.p_g0.push_back(rho(i_g0, i_g0).real());
    res.populations.push_back(rho.diagonal().real());
    double max_trace_err = 0.0;
    auto on_sample = [&](double t, const MatX& r) {
        res.t_us.push_back(t * 1e-3);
        res.p_e0.push_back(r(i_e0, i_e0).real());
        res.p_g0.push_back(r(i_g0, i_g0).real());
        res.populations.push_back(r.diagonal().real());
        max_trace_err = std::max(max_trace_err, std::abs(r.trace().real() - 1.0));
    };
    detail::integrate_rk45(deriv, rho, 0.0, t_final, 1e-6, 1e-9, on_sample, sample_dt);
    res.max_trace_error = max_trace_err;

    const size_t n = res.p_e0.size();
    double tail = 0.0;
    size_t tail_n = std::max<size_t>(1, n / 10);
    for (size_t k = n - tail_n; k < n; ++k) tail += res.p_e0[k];
    res.steady_p_e0 = tail / tail_n;
    for (size_t k = 0; k < n; ++k) {
        if (res.p_e0[k] >= 0.95) {
            res.crossing_95_us = res.t_us[k];
            break;
        }
    }
    return res;
}

}  // namespace fluxsim
