#include "fluxsim/spectrum.hpp"

#include <cmath>

#include "fluxsim/errors.hpp"

namespace fluxsim {

namespace {

// <m| exp(i phi) |n> for phi = x (a + a'), via displacement-operator matrix
// elements: D(i x) with
//   <M|D|N> = sqrt(min!/max!) (i x)^{|M-N|} e^{-x^2/2} L_min^{|M-N|}(x^2).
// Exact in the untruncated basis, so truncation error enters only through
// the eigensolve. Even |M-N| -> cos(phi), odd -> sin(phi).
void cosine_sine_blocks(int n, double x, Eigen::MatrixXd& cosphi,
                        Eigen::MatrixXd& sinphi) {
    cosphi.setZero(n, n);
    sinphi.setZero(n, n);
    const double x2 = x * x;
    if (x2 > 60.0) {
        // Deep-harmonic regime (E_L << E_C by orders of magnitude): the
        // Laguerre evaluation overflows, so fall back to dense evaluation in
        // the position-like quadrature of the truncated phi operator.
        Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i + 1 < n; ++i)
            phi(i, i + 1) = phi(i + 1, i) = x * std::sqrt(i + 1.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(phi);
        const Eigen::MatrixXd& v = es.eigenvectors();
        cosphi = v * es.eigenvalues().array().cos().matrix().asDiagonal() * v.transpose();
        sinphi = v * es.eigenvalues().array().sin().matrix().asDiagonal() * v.transpose();
        return;
    }
    for (int m = 0; m < n; ++m) {
        for (int j = m; j < n; ++j) {
            const int k = j - m;
            const double logpref =
                0.5 * (std::lgamma(m + 1.0) - std::lgamma(j + 1.0)) +
                k * std::log(x) - 0.5 * x2;
            const double lag = std::assoc_laguerre(static_cast<unsigned>(m),
                                                   static_cast<unsigned>(k), x2);
            const double mag = std::exp(logpref) * lag;
            // i^k: k % 4 == 0 -> +cos, 1 -> +sin, 2 -> -cos, 3 -> -sin
            switch (k % 4) {
                case 0: cosphi(m, j) = cosphi(j, m) = mag; break;
                case 1: sinphi(m, j) = sinphi(j, m) = mag; break;
                case 2: cosphi(m, j) = cosphi(j, m) = -mag; break;
                case 3: sinphi(m, j) = sinphi(j, m) = -mag; break;
            }
        }
    }
}

}  // namespace

Eigen::MatrixXd build_hamiltonian(const CircuitParams& params, double flux,
                                  int basis_size) {
    params.validate();
    if (basis_size < 20) throw DomainError("basis_size must be >= 20");
    if (!std::isfinite(flux)) throw DomainError("flux must be finite");

    const double w_lc = std::sqrt(8.0 * params.e_c * params.e_l);
    const double x_zpf = std::pow(2.0 * params.e_c / params.e_l, 0.25);
    const double theta = 2.0 * M_PI * flux;

    Eigen::MatrixXd cosphi, sinphi;
    cosine_sine_blocks(basis_size, x_zpf, cosphi, sinphi);

    Eigen::MatrixXd h = -params.e_j * (std::cos(theta) * cosphi + std::sin(theta) * sinphi);
    for (int i = 0; i < basis_size; ++i) h(i, i) += w_lc * (i + 0.5);
    return h;
}

Spectrum eigensolve(const CircuitParams& params, double flux, int n_levels,
                    int basis_size) {
    if (n_levels < 2) throw DomainError("need at least two levels");
    if (n_levels > basis_size / 4)
        throw DomainError("n_levels must be <= basis_size / 4 (truncation safety)");

    Eigen::MatrixXd h = build_hamiltonian(params, flux, basis_size);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigensolver failed to converge; try a larger basis_size");

    Eigen::MatrixXd vecs = solver.eigenvectors().leftCols(n_levels);
    // Sign convention: largest-magnitude component positive.
    for (int k = 0; k < n_levels; ++k) {
        int imax = 0;
        vecs.col(k).cwiseAbs().maxCoeff(&imax);
        if (vecs(imax, k) < 0.0) vecs.col(k) = -vecs.col(k);
    }

    const double x_zpf = std::pow(2.0 * params.e_c / params.e_l, 0.25);
    Eigen::VectorXd sq(basis_size - 1);
    for (int i = 0; i + 1 < basis_size; ++i) sq[i] = std::sqrt(i + 1.0);

    // phi = x (a + a'), n = i/(2x) (a' - a); apply the tridiagonal operators
    // column-wise rather than forming them.
    Eigen::MatrixXd phi_full(basis_size, n_levels);
    Eigen::MatrixXd k_full(basis_size, n_levels);  // (a' - a) v
    for (int c = 0; c < n_levels; ++c) {
        for (int r = 0; r < basis_size; ++r) {
            double up = (r > 0) ? sq[r - 1] * vecs(r - 1, c) : 0.0;      // a' v
            double down = (r + 1 < basis_size) ? sq[r] * vecs(r + 1, c) : 0.0;  // a v
            phi_full(r, c) = x_zpf * (up + down);
            k_full(r, c) = up - down;
        }
    }

    Spectrum s;
    s.flux = flux;
    s.basis_size = basis_size;
    s.energies = solver.eigenvalues().head(n_levels);
    s.phi_elements = vecs.transpose() * phi_full;
    Eigen::MatrixXd k_red = vecs.transpose() * k_full;  // real antisymmetric
    s.n_elements = std::complex<double>(0.0, 1.0 / (2.0 * x_zpf)) *
                   k_red.cast<std::complex<double>>();
    return s;
}

TwoLevelReduction two_level_reduction(const Spectrum& spec,
                                      const CircuitParams& params,
                                      double delta_flux) {
    if (std::abs(spec.flux - 0.5) > 1e-9)
        throw DomainError("two-level reduction requires a spectrum at flux = 0.5");
    TwoLevelReduction r;
    r.delta = spec.transition(0, 1);
    r.a_coeff = 4.0 * M_PI * std::abs(spec.phi_elements(0, 1)) * params.e_l * delta_flux;
    return r;
}

}  // namespace fluxsim
