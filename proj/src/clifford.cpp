#include "fluxsim/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>

#include "fluxsim/errors.hpp"

namespace fluxsim {

namespace {

// Quotient out the global phase: rotate so the first entry with |z| > 0.4
// (row-major scan) becomes real positive. Clifford entries have magnitudes
// in {0, 1/2, 1/sqrt2, 1}, so the 0.4 threshold never sits on a boundary.
Mat2 canonical_phase(const Mat2& u) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (std::abs(u(i, j)) > 0.4) return u * (std::abs(u(i, j)) / u(i, j));
    throw NumericError("matrix is not unitary");
}

std::string phase_key(const Mat2& u) {
    const Mat2 c = canonical_phase(u);
    std::ostringstream os;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            os << llround(c(i, j).real() * 1e6) << "," << llround(c(i, j).imag() * 1e6) << ";";
    return os.str();
}

Mat2 op_unitary(const NativeOp& op) {
    switch (op.gate) {
        case NativeGate::YHalf: return rot_y(M_PI / 2);
        case NativeGate::MinusYHalf: return rot_y(-M_PI / 2);
        case NativeGate::ZHalf: return rot_z(M_PI / 2);
        case NativeGate::MinusZHalf: return rot_z(-M_PI / 2);
        case NativeGate::Z: return rot_z(M_PI);
        case NativeGate::ZTheta: return rot_z(op.theta);
    }
    throw DomainError("unknown native op");
}

Mat2 compose_ops(const std::vector<NativeOp>& ops) {
    Mat2 u = Mat2::Identity();
    for (const auto& op : ops) u = op_unitary(op) * u;  // temporal order
    return u;
}

double op_duration(const NativeOp& op, const GateCalibration& cal) {
    switch (op.gate) {
        case NativeGate::YHalf:
        case NativeGate::MinusYHalf:
            return cal.y_half_pulse.total_duration();
        case NativeGate::ZHalf: return 1.0 / (4.0 * cal.delta);
        case NativeGate::MinusZHalf: return 3.0 / (4.0 * cal.delta);  // Z(3pi/2) idle
        case NativeGate::Z: return 1.0 / (2.0 * cal.delta);
        case NativeGate::ZTheta: {
            double th = std::fmod(op.theta, 2.0 * M_PI);
            if (th < 0) th += 2.0 * M_PI;
            return th / (2.0 * M_PI * cal.delta);
        }
    }
    return 0.0;
}

}  // namespace

std::string NativeOp::text() const {
    switch (gate) {
        case NativeGate::YHalf: return "Y/2";
        case NativeGate::MinusYHalf: return "-Y/2";
        case NativeGate::ZHalf: return "Z/2";
        case NativeGate::MinusZHalf: return "-Z/2";
        case NativeGate::Z: return "Z";
        case NativeGate::ZTheta: {
            std::ostringstream os;
            os << "Z(" << theta << ")";
            return os.str();
        }
    }
    return "?";
}

CliffordTable::CliffordTable(const GateCalibration& cal) {
    // BFS over the native generators; first visit gives a minimal-count
    // decomposition. Generator order fixes ties deterministically.
    const std::vector<NativeOp> generators = {
        {NativeGate::YHalf}, {NativeGate::MinusYHalf}, {NativeGate::ZHalf},
        {NativeGate::MinusZHalf}, {NativeGate::Z}};

    std::map<std::string, std::vector<NativeOp>> found;
    std::deque<std::pair<Mat2, std::vector<NativeOp>>> queue;
    queue.emplace_back(Mat2::Identity(), std::vector<NativeOp>{});
    found[phase_key(Mat2::Identity())] = {};
    while (!queue.empty() && found.size() < 24) {
        auto [u, ops] = queue.front();
        queue.pop_front();
        for (const auto& g : generators) {
            Mat2 v = op_unitary(g) * u;
            std::string key = phase_key(v);
            if (found.count(key)) continue;
            auto seq = ops;
            seq.push_back(g);
            found[key] = seq;
            queue.emplace_back(v, seq);
        }
    }
    if (found.size() != 24)
        throw NumericError("Clifford BFS closed on " + std::to_string(found.size()) +
                           " elements, expected 24");

    // Device-table compositions, used verbatim for the named gates.
    const std::map<std::string, std::vector<NativeOp>> table_overrides = {
        {"X/2", {{NativeGate::YHalf}, {NativeGate::ZHalf}, {NativeGate::MinusYHalf}}},
        {"X", {{NativeGate::YHalf}, {NativeGate::Z}, {NativeGate::MinusYHalf}}},
        {"Y", {{NativeGate::YHalf}, {NativeGate::YHalf}}},
        {"Z", {{NativeGate::ZHalf}, {NativeGate::ZHalf}}}};
    for (const auto& [name, ops] : table_overrides) {
        (void)name;
        found[phase_key(compose_ops(ops))] = ops;
    }

    entries_.reserve(24);
    // Identity first, then by decomposition length then key for determinism.
    std::vector<std::pair<std::string, std::vector<NativeOp>>> sorted(found.begin(), found.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second.size() != b.second.size()) return a.second.size() < b.second.size();
        return a.first < b.first;
    });
    for (auto& [key, ops] : sorted) {
        CliffordEntry e;
        e.ops = ops;
        e.composed = compose_ops(ops);
        e.target = canonical_phase(e.composed);
        double d = 0.0;
        for (const auto& op : ops) d += op_duration(op, cal);
        e.duration_ns = d;
        entries_.push_back(std::move(e));
    }
}

int CliffordTable::find(const Mat2& u, double tol) const {
    for (int i = 0; i < size(); ++i)
        if (1.0 - trace_fidelity(entries_[i].target, u) < tol) return i;
    return -1;
}

int CliffordTable::index_of_named(const std::string& name) const {
    static const std::map<std::string, std::vector<NativeOp>> named = {
        {"I", {}},
        {"Y/2", {{NativeGate::YHalf}}},
        {"-Y/2", {{NativeGate::MinusYHalf}}},
        {"Z/2", {{NativeGate::ZHalf}}},
        {"-Z/2", {{NativeGate::MinusZHalf}}},
        {"X/2", {{NativeGate::YHalf}, {NativeGate::ZHalf}, {NativeGate::MinusYHalf}}},
        {"X", {{NativeGate::YHalf}, {NativeGate::Z}, {NativeGate::MinusYHalf}}},
        {"Y", {{NativeGate::YHalf}, {NativeGate::YHalf}}},
        {"Z", {{NativeGate::ZHalf}, {NativeGate::ZHalf}}}};
    auto it = named.find(name);
    if (it == named.end()) throw DomainError("unknown gate name: " + name);
    int idx = find(compose_ops(it->second));
    if (idx < 0) throw NumericError("named gate missing from Clifford table: " + name);
    return idx;
}

double CliffordTable::mean_duration_ns() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.duration_ns;
    return s / size();
}

}  // namespace fluxsim
