#ifndef FLUXSIM_CLIFFORD_HPP
#define FLUXSIM_CLIFFORD_HPP

#include <string>
#include <vector>

#include "fluxsim/pulses.hpp"

namespace fluxsim {

// One native gate in a Clifford decomposition. Z(theta) carries its angle;
// -Z/2 is realized as Z(3pi/2) of idling (no negative idles in the lab frame).
struct NativeOp {
    NativeGate gate;
    double theta = 0.0;  // ZTheta only
    std::string text() const;
};

struct CliffordEntry {
    Mat2 target;                  // exact unitary, canonical phase
    std::vector<NativeOp> ops;    // temporal order
    double duration_ns = 0.0;
    Mat2 composed;                // product of native unitaries
};

// All 24 single-qubit Cliffords over {Y/2, -Y/2, Z/2, -Z/2, Z(theta)},
// minimal native-gate count (BFS), with the device table's compositions used
// verbatim for X/2, X, Y, Z. Entry 0 is the identity (empty sequence).
class CliffordTable {
  public:
    explicit CliffordTable(const GateCalibration& cal);

    const std::vector<CliffordEntry>& entries() const { return entries_; }
    const CliffordEntry& entry(int i) const { return entries_.at(i); }
    int size() const { return static_cast<int>(entries_.size()); }

    int index_of_named(const std::string& name) const;  // "X/2", "Y/2", "Z/2", ...
    // Index of the table element whose target equals u up to global phase,
    // or -1.
    int find(const Mat2& u, double tol = 1e-9) const;
    double mean_duration_ns() const;

  private:
    std::vector<CliffordEntry> entries_;
};

}  // namespace fluxsim

#endif
