#ifndef FLUXSIM_PULSES_HPP
#define FLUXSIM_PULSES_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace fluxsim {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

// Two-level lab frame, basis (|e>, |g>):  H/h = A(t)/2 sx + Delta/2 sz.
// sz = |e><e| - |g><g|, so P(e) = (1 + <sz>)/2.

enum class SegmentShape { TriangularSpike, Idle };

struct PulseSegment {
    SegmentShape shape = SegmentShape::Idle;
    double amplitude = 0.0;  // peak sigma_x coefficient, GHz (signed)
    double duration = 0.0;   // ns, > 0
    double area() const {
        return shape == SegmentShape::TriangularSpike ? 0.5 * amplitude * duration : 0.0;
    }
};

// Net-zero flux pulse: ordered segments plus the qubit splitting Delta.
struct PulseProgram {
    std::vector<PulseSegment> segments;
    double delta = 0.0;  // GHz

    double total_duration() const;
    double net_area() const;             // signed spike areas, GHz*ns
    void validate_net_zero(double tol = 1e-9) const;  // throws DomainError
    static PulseProgram spike_idle_spike(double amp, double dt_p, double dt_z,
                                         double delta);
    PulseProgram concatenated(const PulseProgram& tail) const;
};

// A(t) at time t from the start of the program (triangle ramps).
double instantaneous_amplitude(const PulseProgram& p, double t);

// Times where A(t) has a kink (segment edges and triangle apexes);
// integrators must not step across these.
std::vector<double> pulse_breakpoints(const PulseProgram& p);

// Exact time-ordered propagator: idles in closed form, spikes sub-stepped
// with per-step exact 2x2 exponentials (midpoint amplitude), step <= 10 ps.
Mat2 propagate_unitary(const PulseProgram& p, double max_step_ns = 0.01);

struct BlochSample {
    double t;
    double x, y, z;
};
struct PropagationResult {
    Vec2 final_state;
    std::vector<BlochSample> trajectory;
};
PropagationResult propagate(const PulseProgram& p, const Vec2& initial,
                            double sample_dt_ns = 0.05);

// |tr(U' V)| / 2, global phase quotiented out.
double trace_fidelity(const Mat2& u, const Mat2& v);

Mat2 rot_x(double theta);
Mat2 rot_y(double theta);
Mat2 rot_z(double theta);
// R_xz(theta) = exp(-i (theta sx + lambda |theta| sz) / 2); the always-on
// Z rotation is unidirectional in the lab frame, hence |theta|.
Mat2 rot_xz(double theta, double lambda);

// 2D Rabi maps: for each (A, dt_z) build spike-idle-antispike, propagate the
// initial state, record final <sx>, <sy>, <sz>.
struct Rabi2DMap {
    std::vector<double> amplitudes;  // GHz
    std::vector<double> idle_times;  // ns
    Eigen::MatrixXd sx, sy, sz;      // rows: amplitude index, cols: idle index
};
Rabi2DMap rabi2d(double delta, double dt_p, const std::vector<double>& a_grid,
                 const std::vector<double>& dtz_grid, const Vec2& initial,
                 int threads = 1);

enum class NativeGate { YHalf, MinusYHalf, ZHalf, MinusZHalf, Z, ZTheta };
enum class GateTarget { YHalf, Y };

struct GateAngles {
    double theta_x = 0.0;  // rad
    double theta_z = 0.0;  // rad
    double lambda = 0.0;   // Z- to X-rotation rate ratio during a spike
};

// Closed-form decomposition R_xz(-tx) Rz(tz) R_xz(tx) = target.
// Y/2 valid for 0 <= lambda <= sqrt(2)-1, Y for 0 <= lambda <= 1.
GateAngles synthesize(GateTarget target, double lambda);

// Spike amplitude from the pulse area (theta_x = pi A dt_p), idle from
// theta_z/(2pi Delta). The implied lambda = 2pi Delta dt_p / theta_x must
// match angles.lambda to 1e-6 or a CalibrationError is raised.
PulseProgram angles_to_pulse(const GateAngles& angles, double delta, double dt_p);

// Device gate set at (Delta, dt_p): native Y/2 from the self-consistent
// lambda solution of theta_x(lambda) = 2pi Delta dt_p / lambda.
struct GateCalibration {
    double delta = 0.0;
    double dt_p = 0.0;
    double lambda = 0.0;
    GateAngles y_half;
    PulseProgram y_half_pulse;
};
GateCalibration calibrate_gate_set(double delta, double dt_p);

// Named gates over the native set, Pauli compositions per the device table
// (X/2 = Y/2, Z/2, -Y/2; X = Y/2, Z, -Y/2; Y = Y/2, Y/2; Z = Z/2, Z/2).
PulseProgram compose_gate(const std::string& name, const GateCalibration& cal);
PulseProgram native_pulse(NativeGate g, const GateCalibration& cal, double theta = 0.0);

}  // namespace fluxsim

#endif
