#include "fluxsim/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "fluxsim/errors.hpp"

namespace fluxsim {

namespace {

const Mat2 kI2 = Mat2::Identity();
const std::complex<double> kImag(0.0, 1.0);

Mat2 pauli_x() { return (Mat2() << 0, 1, 1, 0).finished(); }
Mat2 pauli_y() { return (Mat2() << 0, -kImag, kImag, 0).finished(); }
Mat2 pauli_z() { return (Mat2() << 1, 0, 0, -1).finished(); }

// exp(-i 2pi dt (ax/2 sx + az/2 sz)), exact.
Mat2 step_unitary(double ax, double az, double dt) {
    const double mag = std::hypot(ax, az);
    const double th = M_PI * dt * mag;
    if (th == 0.0) return kI2;
    const double nx = ax / mag, nz = az / mag;
    Mat2 u;
    const double c = std::cos(th), s = std::sin(th);
    u << c - kImag * s * nz, -kImag * s * nx,
        -kImag * s * nx, c + kImag * s * nz;
    return u;
}

Mat2 idle_unitary(double delta, double dt) {
    const double ph = M_PI * delta * dt;
    Mat2 u = Mat2::Zero();
    u(0, 0) = std::exp(-kImag * ph);
    u(1, 1) = std::exp(kImag * ph);
    return u;
}

double triangle(double amp, double t, double dur) {
    return amp * (1.0 - std::abs(2.0 * t / dur - 1.0));
}

}  // namespace

double PulseProgram::total_duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration;
    return t;
}

double PulseProgram::net_area() const {
    double a = 0.0;
    for (const auto& s : segments) a += s.area();
    return a;
}

void PulseProgram::validate_net_zero(double tol) const {
    for (const auto& s : segments)
        if (!(s.duration > 0.0)) throw DomainError("segment durations must be positive");
    double scale = 0.0;
    for (const auto& s : segments) scale = std::max(scale, std::abs(s.area()));
    if (std::abs(net_area()) > tol * std::max(1.0, scale))
        throw DomainError("pulse is not net-zero in flux area");
}

PulseProgram PulseProgram::spike_idle_spike(double amp, double dt_p, double dt_z,
                                            double delta) {
    PulseProgram p;
    p.delta = delta;
    p.segments.push_back({SegmentShape::TriangularSpike, amp, dt_p});
    if (dt_z > 0.0) p.segments.push_back({SegmentShape::Idle, 0.0, dt_z});
    p.segments.push_back({SegmentShape::TriangularSpike, -amp, dt_p});
    return p;
}

PulseProgram PulseProgram::concatenated(const PulseProgram& tail) const {
    PulseProgram p = *this;
    p.segments.insert(p.segments.end(), tail.segments.begin(), tail.segments.end());
    return p;
}

double instantaneous_amplitude(const PulseProgram& p, double t) {
    double t0 = 0.0;
    for (const auto& s : p.segments) {
        if (t <= t0 + s.duration) {
            if (s.shape == SegmentShape::Idle) return 0.0;
            return triangle(s.amplitude, t - t0, s.duration);
        }
        t0 += s.duration;
    }
    return 0.0;
}

std::vector<double> pulse_breakpoints(const PulseProgram& p) {
    std::vector<double> ts{0.0};
    double t0 = 0.0;
    for (const auto& s : p.segments) {
        if (s.shape == SegmentShape::TriangularSpike)
            ts.push_back(t0 + 0.5 * s.duration);
        t0 += s.duration;
        ts.push_back(t0);
    }
    return ts;
}

namespace {

// Fourth-order commutator-free exponential step over [t0, t0+dt]: two exact
// 2x2 exponentials built from the amplitudes at the Gauss points. A(t) is
// linear within each ramp, so the quadrature is exact and only the
// non-commutativity error remains.
Mat2 cf4_step(double a_gauss1, double a_gauss2, double delta, double dt) {
    constexpr double alpha1 = 0.25 + std::numbers::sqrt3 / 6.0;
    constexpr double alpha2 = 0.25 - std::numbers::sqrt3 / 6.0;
    Mat2 u = step_unitary(alpha1 * a_gauss1 + alpha2 * a_gauss2,
                          (alpha1 + alpha2) * delta, dt);
    Mat2 v = step_unitary(alpha2 * a_gauss1 + alpha1 * a_gauss2,
                          (alpha1 + alpha2) * delta, dt);
    return v * u;
}

Mat2 ramp_unitary(double a0, double a1, double delta, double duration,
                  double max_step_ns) {
    const int nstep = std::max(1, static_cast<int>(std::ceil(duration / max_step_ns)));
    const double dt = duration / nstep;
    constexpr double c1 = 0.5 - std::numbers::sqrt3 / 6.0;
    constexpr double c2 = 0.5 + std::numbers::sqrt3 / 6.0;
    Mat2 u = kI2;
    for (int k = 0; k < nstep; ++k) {
        const double x1 = (k + c1) * dt / duration;
        const double x2 = (k + c2) * dt / duration;
        u = cf4_step(a0 + (a1 - a0) * x1, a0 + (a1 - a0) * x2, delta, dt) * u;
    }
    return u;
}

}  // namespace

Mat2 propagate_unitary(const PulseProgram& p, double max_step_ns) {
    Mat2 u = kI2;
    for (const auto& seg : p.segments) {
        if (seg.shape == SegmentShape::Idle || seg.amplitude == 0.0) {
            u = idle_unitary(p.delta, seg.duration) * u;
            continue;
        }
        // two linear ramps per triangular spike
        const double half = 0.5 * seg.duration;
        u = ramp_unitary(0.0, seg.amplitude, p.delta, half, max_step_ns) * u;
        u = ramp_unitary(seg.amplitude, 0.0, p.delta, half, max_step_ns) * u;
    }
    return u;
}

PropagationResult propagate(const PulseProgram& p, const Vec2& initial,
                            double sample_dt_ns) {
    PropagationResult res;
    Vec2 psi = initial;
    const Mat2 sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
    auto record = [&](double t) {
        res.trajectory.push_back({t,
                                  std::real(psi.dot(sx * psi)),
                                  std::real(psi.dot(sy * psi)),
                                  std::real(psi.dot(sz * psi))});
    };
    double t = 0.0;
    record(t);
    for (const auto& seg : p.segments) {
        const double step = std::min(sample_dt_ns, seg.shape == SegmentShape::Idle
                                                       ? sample_dt_ns
                                                       : 0.01);
        const int nstep = std::max(2, 2 * static_cast<int>(std::ceil(seg.duration / (2.0 * step))));
        const double dt = seg.duration / nstep;
        constexpr double c1 = 0.5 - std::numbers::sqrt3 / 6.0;
        constexpr double c2 = 0.5 + std::numbers::sqrt3 / 6.0;
        double sample_accum = 0.0;
        for (int k = 0; k < nstep; ++k) {
            if (seg.shape == SegmentShape::Idle) {
                psi = idle_unitary(p.delta, dt) * psi;
            } else {
                // even nstep keeps the triangle apex on a step boundary
                const double a1 = triangle(seg.amplitude, (k + c1) * dt, seg.duration);
                const double a2 = triangle(seg.amplitude, (k + c2) * dt, seg.duration);
                psi = cf4_step(a1, a2, p.delta, dt) * psi;
            }
            t += dt;
            sample_accum += dt;
            if (sample_accum >= sample_dt_ns) {
                record(t);
                sample_accum = 0.0;
            }
        }
        record(t);
    }
    res.final_state = psi;
    return res;
}

double trace_fidelity(const Mat2& u, const Mat2& v) {
    return std::abs((u.adjoint() * v).trace()) / 2.0;
}

Mat2 rot_x(double theta) {
    Mat2 u;
    u << std::cos(theta / 2), -kImag * std::sin(theta / 2),
        -kImag * std::sin(theta / 2), std::cos(theta / 2);
    return u;
}

Mat2 rot_y(double theta) {
    Mat2 u;
    u << std::cos(theta / 2), -std::sin(theta / 2),
        std::sin(theta / 2), std::cos(theta / 2);
    return u;
}

Mat2 rot_z(double theta) {
    Mat2 u = Mat2::Zero();
    u(0, 0) = std::exp(-kImag * (theta / 2));
    u(1, 1) = std::exp(kImag * (theta / 2));
    return u;
}

Mat2 rot_xz(double theta, double lambda) {
    const double gx = theta;
    const double gz = lambda * std::abs(theta);
    const double w = std::hypot(gx, gz);
    if (w == 0.0) return kI2;
    Mat2 u;
    const double c = std::cos(w / 2), s = std::sin(w / 2);
    u << c - kImag * s * gz / w, -kImag * s * gx / w,
        -kImag * s * gx / w, c + kImag * s * gz / w;
    return u;
}

Rabi2DMap rabi2d(double delta, double dt_p, const std::vector<double>& a_grid,
                 const std::vector<double>& dtz_grid, const Vec2& initial,
                 int threads) {
    if (a_grid.empty() || dtz_grid.empty()) throw DomainError("rabi2d grids must be non-empty");
    Rabi2DMap map;
    map.amplitudes = a_grid;
    map.idle_times = dtz_grid;
    const int na = static_cast<int>(a_grid.size());
    const int nz = static_cast<int>(dtz_grid.size());
    map.sx.resize(na, nz);
    map.sy.resize(na, nz);
    map.sz.resize(na, nz);

    const Mat2 sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
    auto run_rows = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            for (int j = 0; j < nz; ++j) {
                PulseProgram p = PulseProgram::spike_idle_spike(a_grid[i], dt_p,
                                                                dtz_grid[j], delta);
                Vec2 psi = propagate_unitary(p) * initial;
                map.sx(i, j) = std::real(psi.dot(sx * psi));
                map.sy(i, j) = std::real(psi.dot(sy * psi));
                map.sz(i, j) = std::real(psi.dot(sz * psi));
            }
        }
    };
    threads = std::max(1, threads);
    if (threads == 1) {
        run_rows(0, na);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (na + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int b = t * chunk, e = std::min(na, b + chunk);
            if (b < e) pool.emplace_back(run_rows, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return map;
}

GateAngles synthesize(GateTarget target, double lambda) {
    GateAngles a;
    a.lambda = lambda;
    if (target == GateTarget::YHalf) {
        const double lmax = std::sqrt(2.0) - 1.0;
        if (lambda < 0.0 || lambda > lmax)
            throw DomainError("Y/2 synthesis requires 0 <= lambda <= sqrt(2)-1");
        a.theta_x = std::acos(lambda * (1.0 + lambda) / (lambda - 1.0)) /
                    std::sqrt(1.0 + lambda * lambda);
        a.theta_z = 2.0 * std::atan(std::sqrt(1.0 - 2.0 * lambda -
                                              2.0 * std::pow(lambda, 3) -
                                              std::pow(lambda, 4)) /
                                    ((1.0 + lambda) * std::sqrt(1.0 + lambda * lambda)));
        return a;
    }
    // Y: theta_x = acos(-lambda^2)/sqrt(1+lambda^2). (The acos argument must
    // be negative for R_xz(-tx) Rz(tz) R_xz(tx) to close on R_y(pi); see the
    // synthesis test, which checks the composition directly.)
    if (lambda < 0.0 || lambda > 1.0)
        throw DomainError("Y synthesis requires 0 <= lambda <= 1");
    a.theta_x = std::acos(-lambda * lambda) / std::sqrt(1.0 + lambda * lambda);
    a.theta_z = M_PI - 2.0 * std::atan(lambda / std::sqrt(1.0 - lambda * lambda));
    return a;
}

PulseProgram angles_to_pulse(const GateAngles& angles, double delta, double dt_p) {
    if (!(dt_p > 0.0)) throw DomainError("dt_p must be positive");
    const double dt_z = angles.theta_z / (2.0 * M_PI * delta);
    if (angles.theta_x == 0.0) {
        PulseProgram p;
        p.delta = delta;
        if (dt_z > 0.0) p.segments.push_back({SegmentShape::Idle, 0.0, dt_z});
        return p;
    }
    const double implied_lambda = 2.0 * M_PI * delta * dt_p / angles.theta_x;
    if (std::abs(implied_lambda - angles.lambda) > 1e-6)
        throw CalibrationError("inconsistent (lambda, dt_p, delta): implied lambda " +
                               std::to_string(implied_lambda) + " vs " +
                               std::to_string(angles.lambda));
    const double amp = angles.theta_x / (M_PI * dt_p);  // theta_x = 2pi * (amp dt_p / 2)
    return PulseProgram::spike_idle_spike(amp, dt_p, dt_z, delta);
}

GateCalibration calibrate_gate_set(double delta, double dt_p) {
    if (!(delta > 0.0) || !(dt_p > 0.0)) throw DomainError("delta and dt_p must be positive");
    const double c = 2.0 * M_PI * delta * dt_p;
    const double lmax = std::sqrt(2.0) - 1.0;
    auto excess = [&](double lam) {
        return lam * synthesize(GateTarget::YHalf, lam).theta_x - c;
    };
    if (excess(lmax) < 0.0)
        throw CalibrationError("dt_p too long: no Y/2 lambda solution below sqrt(2)-1");
    double lo = 0.0, hi = lmax;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    GateCalibration cal;
    cal.delta = delta;
    cal.dt_p = dt_p;
    cal.lambda = 0.5 * (lo + hi);
    cal.y_half = synthesize(GateTarget::YHalf, cal.lambda);
    cal.y_half_pulse = angles_to_pulse(cal.y_half, delta, dt_p);
    return cal;
}

PulseProgram native_pulse(NativeGate g, const GateCalibration& cal, double theta) {
    auto z_idle = [&](double angle) {
        PulseProgram p;
        p.delta = cal.delta;
        angle = std::fmod(angle, 2.0 * M_PI);
        if (angle < 0.0) angle += 2.0 * M_PI;
        if (angle > 0.0)
            p.segments.push_back({SegmentShape::Idle, 0.0, angle / (2.0 * M_PI * cal.delta)});
        return p;
    };
    switch (g) {
        case NativeGate::YHalf:
            return cal.y_half_pulse;
        case NativeGate::MinusYHalf: {
            PulseProgram p = cal.y_half_pulse;
            for (auto& s : p.segments) s.amplitude = -s.amplitude;
            return p;
        }
        case NativeGate::ZHalf: return z_idle(M_PI / 2);
        case NativeGate::MinusZHalf: return z_idle(-M_PI / 2);  // 3pi/2 of idling
        case NativeGate::Z: return z_idle(M_PI);
        case NativeGate::ZTheta: return z_idle(theta);
    }
    throw DomainError("unknown native gate");
}

PulseProgram compose_gate(const std::string& name, const GateCalibration& cal) {
    auto seq = [&](std::initializer_list<NativeGate> gates) {
        PulseProgram p;
        p.delta = cal.delta;
        for (NativeGate g : gates) p = p.concatenated(native_pulse(g, cal));
        return p;
    };
    if (name == "Y/2") return native_pulse(NativeGate::YHalf, cal);
    if (name == "-Y/2") return native_pulse(NativeGate::MinusYHalf, cal);
    if (name == "Z/2") return native_pulse(NativeGate::ZHalf, cal);
    if (name == "-Z/2") return native_pulse(NativeGate::MinusZHalf, cal);
    if (name == "X/2") return seq({NativeGate::YHalf, NativeGate::ZHalf, NativeGate::MinusYHalf});
    if (name == "X") return seq({NativeGate::YHalf, NativeGate::Z, NativeGate::MinusYHalf});
    if (name == "Y") return seq({NativeGate::YHalf, NativeGate::YHalf});
    if (name == "Z") return seq({NativeGate::ZHalf, NativeGate::ZHalf});
    if (name.size() > 2 && name.substr(0, 2) == "Z(" && name.back() == ')') {
        const double theta = std::stod(name.substr(2, name.size() - 3));
        return native_pulse(NativeGate::ZTheta, cal, theta);
    }
    throw DomainError("unknown gate name: " + name);
}

}  // namespace fluxsim
