#include "fluxsim/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fluxsim/errors.hpp"

namespace fluxsim {

int DressedSystem::index_of(int level, int photons) const {
    for (int k = 0; k < static_cast<int>(labels.size()); ++k)
        if (labels[k].first == level && labels[k].second == photons) return k;
    throw DomainError("no dressed state labeled (" + std::to_string(level) + "," +
                      std::to_string(photons) + ")");
}

double DressedSystem::energy_of(int level, int photons) const {
    return energies[index_of(level, photons)];
}

DressedSystem build_dressed(const CircuitParams& params, double flux,
                            const Truncation& trunc) {
    if (trunc.fluxonium < 6) throw DomainError("need at least 6 fluxonium levels");
    if (trunc.photons < 3) throw DomainError("need at least 3 photon states");

    const int nf = trunc.fluxonium;
    const int np = trunc.photons;
    const int dim = nf * np;

    Spectrum bare = eigensolve(params, flux, nf,
                               std::max(kDefaultBasis, 4 * nf));
    Eigen::VectorXd ef = bare.energies.array() - bare.energies[0];

    // Product basis index p = level * np + photons.
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int l = 0; l < nf; ++l)
        for (int n = 0; n < np; ++n)
            h(l * np + n, l * np + n) = ef[l] + params.resonator_freq * n;
    for (int l = 0; l < nf; ++l)
        for (int lp = 0; lp < nf; ++lp) {
            const std::complex<double> nel = bare.n_elements(l, lp);
            if (std::abs(nel) < 1e-14) continue;
            for (int n = 0; n + 1 < np; ++n) {
                const double aq = std::sqrt(n + 1.0);
                h(l * np + n + 1, lp * np + n) += params.coupling_g * nel * aq;  // a'
                h(l * np + n, lp * np + n + 1) += params.coupling_g * nel * aq;  // a
            }
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
        throw NumericError("dressed eigensolve failed");
    Eigen::MatrixXcd vecs = solver.eigenvectors();

    // Phase convention: largest-magnitude component real positive.
    for (int k = 0; k < dim; ++k) {
        int imax = 0;
        vecs.col(k).cwiseAbs().maxCoeff(&imax);
        std::complex<double> z = vecs(imax, k);
        vecs.col(k) *= std::abs(z) / z;
    }

    DressedSystem ds;
    ds.flux = flux;
    ds.resonator_freq = params.resonator_freq;
    ds.trunc = trunc;
    ds.energies = solver.eigenvalues();
    ds.bare = std::move(bare);
    ds.labels.resize(dim, {-1, -1});

    std::vector<int> claimed(dim, -1);  // bare product index -> dressed index
    for (int k = 0; k < dim; ++k) {
        int pmax = 0;
        vecs.col(k).cwiseAbs().maxCoeff(&pmax);
        if (claimed[pmax] >= 0) {
            std::ostringstream msg;
            msg << "labeling collision at flux " << flux << ": dressed states "
                << claimed[pmax] << " and " << k << " both claim bare ("
                << pmax / np << "," << pmax % np << "); overlaps "
                << std::norm(vecs(pmax, claimed[pmax])) << " and "
                << std::norm(vecs(pmax, k));
            throw LabelingError(msg.str());
        }
        claimed[pmax] = k;
        ds.labels[k] = {pmax / np, pmax % np};
    }

    Eigen::MatrixXcd a_full = Eigen::MatrixXcd::Zero(dim, dim);
    for (int l = 0; l < nf; ++l)
        for (int n = 0; n + 1 < np; ++n)
            a_full(l * np + n, l * np + n + 1) = std::sqrt(n + 1.0);
    ds.a_elements = vecs.adjoint() * a_full * vecs;
    ds.drive_elements = vecs.adjoint() * (a_full + a_full.adjoint()).eval() * vecs;
    return ds;
}

std::map<int, double> dispersive_shifts(const DressedSystem& ds) {
    if (ds.trunc.photons < 2) throw DomainError("dispersive shifts need photon cutoff >= 2");
    const double ref = ds.energy_of(0, 1) - ds.energy_of(0, 0);
    std::map<int, double> chi;
    for (int l = 0; l < ds.trunc.fluxonium; ++l) {
        const double shift = ds.energy_of(l, 1) - ds.energy_of(l, 0) - ref;
        chi[l] = shift * 1e6;  // GHz -> kHz
    }
    return chi;
}

std::map<int, double> dispersive_shifts_perturbative(const CircuitParams& params,
                                                     double flux, double g,
                                                     int n_levels) {
    Spectrum s = eigensolve(params, flux, n_levels, std::max(kDefaultBasis, 4 * n_levels));
    const double wr = params.resonator_freq;
    std::map<int, double> chi;
    for (int l = 0; l < 4; ++l) {
        double sum = 0.0;
        for (int j = 0; j < n_levels; ++j) {
            if (j == l) continue;
            const double wjl = s.transition(l, j);
            sum += g * g * std::norm(s.n_elements(l, j)) * 2.0 * wjl /
                   (wr * wr - wjl * wjl);
        }
        chi[l] = sum * 1e6;
    }
    const double ref = chi[0];
    for (auto& [l, v] : chi) v -= ref;
    return chi;
}

CircuitParams calibrate_coupling(const CircuitParams& params, double target_chi_khz,
                                 double flux, const Truncation& trunc) {
    if (target_chi_khz < 0.0) throw DomainError("target chi must be >= 0");
    CircuitParams out = params;
    if (target_chi_khz == 0.0) {
        out.coupling_g = 0.0;
        return out;
    }
    auto chi_e = [&](double g) {
        CircuitParams p = params;
        p.coupling_g = g;
        DressedSystem ds = build_dressed(p, flux, trunc);
        return std::abs(dispersive_shifts(ds).at(1));
    };
    double lo = 0.0, hi = 0.02;
    double f_hi = chi_e(hi) - target_chi_khz;
    int grow = 0;
    while (f_hi < 0.0 && grow++ < 8) {
        hi *= 2.0;
        f_hi = chi_e(hi) - target_chi_khz;
    }
    if (f_hi < 0.0)
        throw CalibrationError("no sign change bracketing target chi; coupling too weak everywhere");
    // |chi_e(0)| = 0 < target, so [lo, hi] brackets.
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = chi_e(mid) - target_chi_khz;
        if (f < 0.0) lo = mid; else hi = mid;
        if (std::abs(f) < 0.005 * target_chi_khz) {  // 0.5%, inside the 1% contract
            out.coupling_g = mid;
            return out;
        }
    }
    throw CalibrationError("chi calibration did not converge to 1%");
}

Eigen::MatrixXd drive_rate_table(const DressedSystem& ds, double normalization_ghz) {
    if (!(normalization_ghz > 0.0)) throw DomainError("normalization must be positive");
    const double ref = std::abs(ds.drive_elements(ds.index_of(0, 0), ds.index_of(0, 1)));
    if (ref <= 0.0) throw NumericError("vanishing g0-g1 drive element");
    const int dim = ds.trunc.dim();
    Eigen::MatrixXd table(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            table(i, j) = (i == j) ? 0.0
                                   : normalization_ghz * 1e3 * std::abs(ds.drive_elements(i, j)) / ref;
    return table;
}

Eigen::MatrixXd two_photon_rate_table(const DressedSystem& ds, double normalization_ghz) {
    if (!(normalization_ghz > 0.0)) throw DomainError("normalization must be positive");
    const double ref = std::abs(ds.drive_elements(ds.index_of(0, 0), ds.index_of(0, 1)));
    const int dim = ds.trunc.dim();
    const double scale = normalization_ghz * 1e3 / ref;  // MHz per drive-element unit
    Eigen::MatrixXd table = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int f = 0; f < dim; ++f) {
            if (f == i) continue;
            const double wdrive = 0.5 * (ds.energies[f] - ds.energies[i]);
            std::complex<double> sum = 0.0;
            bool divergent = false;
            for (int m = 0; m < dim; ++m) {
                if (m == i || m == f) continue;
                const double denom = ds.energies[m] - ds.energies[i] - wdrive;  // GHz
                const std::complex<double> amp =
                    scale * ds.drive_elements(i, m) * scale * ds.drive_elements(m, f);
                if (std::abs(amp) < 1e-12) continue;
                if (std::abs(denom) < 1e-3) {  // < 1 MHz: report divergent, not a number
                    divergent = true;
                    break;
                }
                sum += amp / (2.0 * denom);
            }
            table(i, f) = divergent ? std::numeric_limits<double>::quiet_NaN()
                                    : std::abs(sum);
        }
    }
    return table;
}

}  // namespace fluxsim
