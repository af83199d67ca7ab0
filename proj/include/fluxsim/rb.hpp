#ifndef FLUXSIM_RB_HPP
#define FLUXSIM_RB_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fluxsim/clifford.hpp"

namespace fluxsim {

// Deterministic splittable stream: every sequence draws from a generator
// seeded by (master seed, length index, sequence index) via splitmix64.
class RbRng {
  public:
    RbRng(std::uint64_t master, std::uint64_t length_index, std::uint64_t seq_index);
    int uniform_int(int n);  // [0, n)

  private:
    std::uint64_t state_;
    std::uint64_t next();
};

struct RbSequence {
    std::vector<int> cliffords;  // table indices, temporal order (interleaved included)
    int recovery = 0;
};

// m random Cliffords (+ interleaved gate after each, when set) plus the
// recovery mapping |e> back to |e> up to phase.
RbSequence generate_sequence(const CliffordTable& table, int m, std::uint64_t master,
                             std::uint64_t length_index, std::uint64_t seq_index,
                             std::optional<int> interleaved);

struct NoiseModel {
    enum class Kind { None, Depolarizing, Lindblad } kind = Kind::None;
    double epsilon = 0.0;  // depolarizing probability per Clifford
    double t1_us = 0.0;
    double t2_us = 0.0;
};

struct RbConfig {
    std::vector<int> lengths{2, 4, 8, 16, 32, 64, 128, 256, 512};
    int n_sequences = 75;
    std::uint64_t seed = 0;
    NoiseModel noise;
    std::optional<std::string> interleaved;  // gate name
    int threads = 1;
};

struct RbResult {
    std::vector<int> lengths;
    std::vector<double> survival;                 // mean P(|e>) per length
    std::vector<std::vector<double>> per_sequence;  // raw survivals
    int n_sequences = 0;
    double fit_a = 0.0, fit_b = 0.0, fit_p = 1.0;
    double fit_p_stderr = 0.0;
    double fit_residual = 0.0;
    double avg_error = 0.0;  // r = (1 - p)/2
};

RbResult run_rb(const CliffordTable& table, const GateCalibration& cal,
                const RbConfig& config);

// r_gate = (1 - p_irb/p_rb)/2. If p_irb exceeds p_rb beyond the combined fit
// uncertainty the result is unphysical (noise floor) and flagged.
struct IrbFidelity {
    double gate_error = 0.0;
    double fidelity = 1.0;
    bool unphysical = false;
};
IrbFidelity irb_fidelity(const RbResult& rb, const RbResult& irb);

// Least-squares fit of survival = a * p^m + b with a, b solved linearly for
// each trial p (separable); throws FitError on non-convergence.
void fit_rb_decay(RbResult& result);

}  // namespace fluxsim

#endif
