#include "fluxsim/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include "fluxsim/errors.hpp"

namespace fluxsim {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Dormand-Prince 5(4) coefficients.
struct Rk45Tableau {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace

namespace detail {

// Adaptive RK45 over a matrix-valued ODE. Steps never cross sample times;
// callers pass a sampler that is invoked at each accepted sample point.
void integrate_rk45(const std::function<MatX(double, const MatX&)>& deriv, MatX& y,
                    double t0, double t1, double rtol, double atol,
                    const std::function<void(double, const MatX&)>& on_sample,
                    double sample_dt) {
    using T = Rk45Tableau;
    double t = t0;
    double h = std::min(sample_dt > 0 ? sample_dt : (t1 - t0), (t1 - t0) / 10.0);
    double next_sample = sample_dt > 0 ? t0 + sample_dt : t1;
    MatX k1 = deriv(t, y);
    int rejected_in_a_row = 0;
    while (t < t1 - 1e-12) {
        const double target = std::min(next_sample, t1);
        h = std::min(h, target - t);
        MatX k2 = deriv(t + T::c2 * h, (y + h * T::a21 * k1).eval());
        MatX k3 = deriv(t + T::c3 * h, (y + h * (T::a31 * k1 + T::a32 * k2)).eval());
        MatX k4 = deriv(t + T::c4 * h,
                        (y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3)).eval());
        MatX k5 = deriv(t + T::c5 * h,
                        (y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4)).eval());
        MatX k6 = deriv(t + h, (y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 +
                                         T::a64 * k4 + T::a65 * k5)).eval());
        MatX ynew = y + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
        MatX k7 = deriv(t + h, ynew);
        MatX err = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 +
                        T::e7 * k7);
        const double scale = atol + rtol * std::max(y.norm(), ynew.norm());
        const double errnorm = err.norm() / scale;
        if (errnorm <= 1.0) {
            t += h;
            y = std::move(ynew);
            k1 = std::move(k7);  // FSAL
            rejected_in_a_row = 0;
            if (sample_dt > 0 && t >= next_sample - 1e-12) {
                on_sample(t, y);
                next_sample += sample_dt;
            }
        } else if (++rejected_in_a_row > 60) {
            throw NumericError("adaptive integrator stalled at t = " + std::to_string(t) +
                               " ns (error norm " + std::to_string(errnorm) + ")");
        }
        const double fac = 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
        h = std::max(h, 1e-9);
    }
    if (sample_dt <= 0) on_sample(t1, y);
}

}  // namespace detail

void LindbladSpec::validate() const {
    if (dim < 2) throw DomainError("Lindblad space must have dim >= 2");
    if (initial.rows() != dim || initial.cols() != dim)
        throw DomainError("initial state has wrong dimension");
    if ((initial - initial.adjoint()).norm() > 1e-10)
        throw DomainError("initial density matrix not Hermitian");
    if (std::abs(initial.trace().real() - 1.0) > 1e-10 ||
        std::abs(initial.trace().imag()) > 1e-12)
        throw DomainError("initial density matrix trace != 1");
    Eigen::SelfAdjointEigenSolver<MatX> es(initial);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw DomainError("initial density matrix not positive semidefinite");
    for (const auto& l : collapse)
        if (l.rows() != dim || l.cols() != dim)
            throw DomainError("collapse operator has wrong dimension");
    if (!(t_final_ns > 0.0)) throw DomainError("t_final must be positive");
}

LindbladResult evolve(const LindbladSpec& spec, double rtol, double atol) {
    spec.validate();
    std::vector<MatX> ldag_l;
    ldag_l.reserve(spec.collapse.size());
    for (const auto& l : spec.collapse) ldag_l.push_back(l.adjoint() * l);

    auto deriv = [&](double t, const MatX& rho) {
        MatX d = MatX::Zero(spec.dim, spec.dim);
        if (spec.hamiltonian) {
            MatX h = spec.hamiltonian(t);
            d = std::complex<double>(0, -kTwoPi) * (h * rho - rho * h);
        }
        for (size_t k = 0; k < spec.collapse.size(); ++k) {
            const MatX& l = spec.collapse[k];
            d += l * rho * l.adjoint() -
                 0.5 * (ldag_l[k] * rho + rho * ldag_l[k]);
        }
        return d;
    };

    LindbladResult res;
    MatX rho = spec.initial;
    auto sample = [&](double t, const MatX& r) {
        LindbladSample s;
        s.t_ns = t;
        s.populations = r.diagonal().real();
        s.trace = r.trace().real();
        Eigen::SelfAdjointEigenSolver<MatX> es(r);
        s.min_eigenvalue = es.eigenvalues().minCoeff();
        res.samples.push_back(std::move(s));
    };
    sample(0.0, rho);
    detail::integrate_rk45(deriv, rho, 0.0, spec.t_final_ns, rtol, atol, sample,
                           spec.sample_dt_ns);
    if (res.samples.back().t_ns < spec.t_final_ns - 1e-9)
        sample(spec.t_final_ns, rho);
    res.final_rho = rho;
    for (const auto& s : res.samples) {
        res.max_trace_error = std::max(res.max_trace_error, std::abs(s.trace - 1.0));
        res.min_eigenvalue = std::min(res.min_eigenvalue, s.min_eigenvalue);
    }
    return res;
}

namespace {

MatX pulse_hamiltonian(const PulseProgram& gate, double t) {
    MatX h = MatX::Zero(2, 2);
    const double a = instantaneous_amplitude(gate, t);
    h(0, 0) = gate.delta / 2;
    h(1, 1) = -gate.delta / 2;
    h(0, 1) = a / 2;
    h(1, 0) = a / 2;
    return h;
}

std::vector<MatX> two_level_collapse(double t1_us, double t2_us) {
    if (!(t1_us > 0.0) || !(t2_us > 0.0)) throw DomainError("T1 and T2 must be positive");
    if (t2_us > 2.0 * t1_us + 1e-12)
        throw DomainError("t2 must not exceed 2*t1");
    const double g1 = 1.0 / (t1_us * 1e3);               // 1/ns
    const double gphi = 1.0 / (t2_us * 1e3) - 0.5 * g1;  // pure dephasing
    std::vector<MatX> ls;
    MatX sm = MatX::Zero(2, 2);
    sm(1, 0) = 1.0;  // |g><e|, basis (e, g)
    ls.push_back(std::sqrt(g1) * sm);
    if (gphi > 1e-18) {
        MatX sz = MatX::Zero(2, 2);
        sz(0, 0) = 1.0;
        sz(1, 1) = -1.0;
        ls.push_back(std::sqrt(gphi / 2.0) * sz);
    }
    return ls;
}

}  // namespace

MatX evolve_pulse(const PulseProgram& gate, const std::vector<MatX>& collapse,
                  const MatX& rho0, double rtol, double atol) {
    std::vector<MatX> ldag_l;
    for (const auto& l : collapse) ldag_l.push_back(l.adjoint() * l);
    auto deriv = [&](double t, const MatX& rho) {
        MatX h = pulse_hamiltonian(gate, t);
        MatX d = std::complex<double>(0, -kTwoPi) * (h * rho - rho * h);
        for (size_t k = 0; k < collapse.size(); ++k)
            d += collapse[k] * rho * collapse[k].adjoint() -
                 0.5 * (ldag_l[k] * rho + rho * ldag_l[k]);
        return d;
    };
    MatX rho = rho0;
    // Integrate each smooth piece separately; A(t) has kinks the adaptive
    // stepper must not straddle.
    const std::vector<double> bps = pulse_breakpoints(gate);
    for (size_t k = 0; k + 1 < bps.size(); ++k) {
        if (bps[k + 1] - bps[k] < 1e-12) continue;
        detail::integrate_rk45(deriv, rho, bps[k], bps[k + 1], rtol, atol,
                               [](double, const MatX&) {}, 0.0);
    }
    return rho;
}

double decoherence_limited_error(const PulseProgram& gate, double t1_us, double t2_us) {
    auto ls = two_level_collapse(t1_us, t2_us);
    const Mat2 ideal = propagate_unitary(gate);
    const std::complex<double> i1(0, 1);
    const std::vector<Vec2> cardinals = {
        (Vec2() << 1, 0).finished(), (Vec2() << 0, 1).finished(),
        (Vec2() << 1, 1).finished() / std::sqrt(2.0),
        (Vec2() << 1, -1).finished() / std::sqrt(2.0),
        (Vec2() << 1, i1).finished() / std::sqrt(2.0),
        (Vec2() << 1, -i1).finished() / std::sqrt(2.0)};

    double fid_sum = 0.0;
    for (const auto& psi : cardinals) {
        MatX rho = evolve_pulse(gate, ls, psi * psi.adjoint(), 1e-11, 1e-14);
        const Vec2 target = ideal * psi;
        fid_sum += std::real(target.dot(rho * target));
    }
    return 1.0 - fid_sum / cardinals.size();
}

Eigen::Matrix4cd gate_superoperator(const PulseProgram& gate, double t1_us, double t2_us) {
    auto ls = two_level_collapse(t1_us, t2_us);
    std::vector<MatX> ldag_l;
    for (const auto& l : ls) ldag_l.push_back(l.adjoint() * l);
    auto deriv = [&](double t, const MatX& u) {
        // u is 4x4: columns are vec(rho) images (column-major convention).
        MatX h = pulse_hamiltonian(gate, t);
        MatX m = MatX::Zero(4, 4);
        // M = -i 2pi (I (x) H - H^T (x) I) + sum L^bar (x) L - 1/2 (I (x) L'L + (L'L)^T (x) I)
        auto kron = [](const MatX& a, const MatX& b) {
            MatX k(a.rows() * b.rows(), a.cols() * b.cols());
            for (int i = 0; i < a.rows(); ++i)
                for (int j = 0; j < a.cols(); ++j)
                    k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            return k;
        };
        const MatX id = MatX::Identity(2, 2);
        m = std::complex<double>(0, -kTwoPi) *
            (kron(id, h) - kron(h.transpose(), id));
        for (size_t k = 0; k < ls.size(); ++k) {
            m += kron(ls[k].conjugate(), ls[k]) -
                 0.5 * (kron(id, ldag_l[k]) + kron(ldag_l[k].transpose(), id));
        }
        return (m * u).eval();
    };
    MatX u = MatX::Identity(4, 4);
    const std::vector<double> bps = pulse_breakpoints(gate);
    for (size_t k = 0; k + 1 < bps.size(); ++k) {
        if (bps[k + 1] - bps[k] < 1e-12) continue;
        detail::integrate_rk45(deriv, u, bps[k], bps[k + 1], 1e-11, 1e-14,
                               [](double, const MatX&) {}, 0.0);
    }
    return u;
}

}  // namespace fluxsim
