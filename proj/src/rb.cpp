#include "fluxsim/rb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "fluxsim/errors.hpp"
#include "fluxsim/lindblad.hpp"

namespace fluxsim {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RbRng::RbRng(std::uint64_t master, std::uint64_t length_index, std::uint64_t seq_index) {
    // Derive the stream seed from (master, length, sequence) so every
    // sequence is reproducible and independent of evaluation order.
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s ^= (length_index + 1) * 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64(s);
    s ^= (seq_index + 1) * 0xd1b54a32d192ed03ULL;
    state_ = a ^ b ^ splitmix64(s);
    if (state_ == 0) state_ = 0x1ULL;
}

std::uint64_t RbRng::next() { return splitmix64(state_); }

int RbRng::uniform_int(int n) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t bound = ~0ULL - ~0ULL % static_cast<std::uint64_t>(n);
    std::uint64_t r;
    do {
        r = next();
    } while (r >= bound);
    return static_cast<int>(r % static_cast<std::uint64_t>(n));
}

RbSequence generate_sequence(const CliffordTable& table, int m, std::uint64_t master,
                             std::uint64_t length_index, std::uint64_t seq_index,
                             std::optional<int> interleaved) {
    if (m < 1) throw DomainError("sequence length must be >= 1");
    RbRng rng(master, length_index, seq_index);
    RbSequence seq;
    seq.cliffords.reserve(interleaved ? 2 * m : m);
    Mat2 total = Mat2::Identity();
    for (int k = 0; k < m; ++k) {
        const int c = rng.uniform_int(table.size());
        seq.cliffords.push_back(c);
        total = table.entry(c).target * total;
        if (interleaved) {
            seq.cliffords.push_back(*interleaved);
            total = table.entry(*interleaved).target * total;
        }
    }
    // Recovery: the (first) table element whose composition with the ideal
    // sequence stabilizes |e> (basis index 0) up to phase.
    Vec2 e0;
    e0 << 1, 0;
    const Vec2 state = total * e0;
    int rec = -1;
    for (int i = 0; i < table.size(); ++i) {
        if (std::norm((table.entry(i).target * state).dot(e0)) > 1.0 - 1e-9) {
            rec = i;
            break;
        }
    }
    if (rec < 0) throw NumericError("no recovery Clifford found");
    seq.recovery = rec;
    return seq;
}

namespace {

double survival_none(const CliffordTable& table, const RbSequence& seq) {
    Mat2 u = Mat2::Identity();
    for (int c : seq.cliffords) u = table.entry(c).target * u;
    u = table.entry(seq.recovery).target * u;
    return std::norm(u(0, 0));
}

double survival_depolarizing(const CliffordTable& table, const RbSequence& seq,
                             double eps) {
    Mat2 rho = Mat2::Zero();
    rho(0, 0) = 1.0;
    auto apply = [&](int c) {
        const Mat2& u = table.entry(c).target;
        rho = (u * rho * u.adjoint()).eval();
        rho = (1.0 - eps) * rho + eps * 0.5 * Mat2::Identity();
    };
    for (int c : seq.cliffords) apply(c);
    apply(seq.recovery);
    return rho(0, 0).real();
}

double survival_superop(const std::vector<Eigen::Matrix4cd>& cliff_superops,
                        const RbSequence& seq) {
    Eigen::Vector4cd rho;
    rho << 1, 0, 0, 0;  // vec(|e><e|), column-major
    for (int c : seq.cliffords) rho = cliff_superops[c] * rho;
    rho = cliff_superops[seq.recovery] * rho;
    return rho(0).real();
}

}  // namespace

void fit_rb_decay(RbResult& result) {
    const auto& ms = result.lengths;
    const auto& ys = result.survival;
    const int n = static_cast<int>(ms.size());
    if (n < 2) throw FitError("need at least two sequence lengths to fit");

    double ymin = *std::min_element(ys.begin(), ys.end());
    double ymax = *std::max_element(ys.begin(), ys.end());
    if (ymax - ymin < 1e-12) {
        // Flat survival: no decay information, p = 1 exactly.
        result.fit_p = 1.0;
        result.fit_a = 0.0;
        result.fit_b = ys.empty() ? 1.0 : ys[0];
        result.fit_p_stderr = 0.0;
        result.fit_residual = 0.0;
        result.avg_error = 0.0;
        return;
    }

    // a, b solved linearly for a trial p; scan then ternary-refine SSE(p).
    auto sse = [&](double p, double* a_out = nullptr, double* b_out = nullptr) {
        double sxx = 0, sx = 0, sxy = 0, sy = 0;
        for (int i = 0; i < n; ++i) {
            const double x = std::pow(p, ms[i]);
            sxx += x * x;
            sx += x;
            sxy += x * ys[i];
            sy += ys[i];
        }
        const double det = sxx * n - sx * sx;
        double a, b;
        if (std::abs(det) < 1e-15) {
            a = 0.0;
            b = sy / n;
        } else {
            a = (sxy * n - sx * sy) / det;
            b = (sxx * sy - sx * sxy) / det;
        }
        double s = 0;
        for (int i = 0; i < n; ++i) {
            const double r = ys[i] - (a * std::pow(p, ms[i]) + b);
            s += r * r;
        }
        if (a_out) *a_out = a;
        if (b_out) *b_out = b;
        return s;
    };

    double best_p = 1.0, best_sse = sse(1.0 - 1e-12);
    for (double p = 0.001; p < 1.0; p += 0.001) {
        const double s = sse(p);
        if (s < best_sse) {
            best_sse = s;
            best_p = p;
        }
    }
    double lo = std::max(0.0, best_p - 0.002), hi = std::min(1.0, best_p + 0.002);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (sse(m1) < sse(m2)) hi = m2; else lo = m1;
    }
    best_p = 0.5 * (lo + hi);
    double a, b;
    const double final_sse = sse(best_p, &a, &b);
    if (!std::isfinite(final_sse)) throw FitError("RB decay fit did not converge");

    result.fit_p = best_p;
    result.fit_a = a;
    result.fit_b = b;
    result.fit_residual = final_sse;
    result.avg_error = (1.0 - best_p) / 2.0;

    // Linearized standard error on p.
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    for (int i = 0; i < n; ++i) {
        const double pm = std::pow(best_p, ms[i]);
        Eigen::Vector3d j(pm, 1.0, a * ms[i] * std::pow(best_p, ms[i] - 1));
        jtj += j * j.transpose();
    }
    const double dof = std::max(1, n - 3);
    Eigen::Matrix3d cov = jtj.ldlt().solve(Eigen::Matrix3d::Identity()) *
                          (final_sse / dof);
    result.fit_p_stderr = cov(2, 2) > 0 ? std::sqrt(cov(2, 2)) : 0.0;
}

RbResult run_rb(const CliffordTable& table, const GateCalibration& cal,
                const RbConfig& config) {
    if (config.n_sequences < 1) throw DomainError("n_sequences must be >= 1");
    for (int m : config.lengths)
        if (m < 1) throw DomainError("sequence lengths must be >= 1");

    std::optional<int> interleaved;
    if (config.interleaved) interleaved = table.index_of_named(*config.interleaved);

    // Lindblad path: per-Clifford superoperators from the pulse-level native
    // gates (idles included), composed per entry.
    std::vector<Eigen::Matrix4cd> cliff_superops;
    if (config.noise.kind == NoiseModel::Kind::Lindblad) {
        std::map<int, Eigen::Matrix4cd> native_cache;
        auto native_superop = [&](const NativeOp& op) {
            const int key = static_cast<int>(op.gate);
            auto it = native_cache.find(key);
            if (it != native_cache.end()) return it->second;
            Eigen::Matrix4cd s = gate_superoperator(native_pulse(op.gate, cal, op.theta),
                                                    config.noise.t1_us, config.noise.t2_us);
            native_cache.emplace(key, s);
            return s;
        };
        cliff_superops.reserve(table.size());
        for (const auto& e : table.entries()) {
            Eigen::Matrix4cd s = Eigen::Matrix4cd::Identity();
            for (const auto& op : e.ops) s = (native_superop(op) * s).eval();
            cliff_superops.push_back(s);
        }
    }

    RbResult res;
    res.lengths = config.lengths;
    res.n_sequences = config.n_sequences;
    const int nl = static_cast<int>(config.lengths.size());
    res.per_sequence.assign(nl, std::vector<double>(config.n_sequences, 0.0));

    auto run_cell = [&](int li, int si) {
        RbSequence seq = generate_sequence(table, config.lengths[li], config.seed, li, si,
                                           interleaved);
        switch (config.noise.kind) {
            case NoiseModel::Kind::None:
                return survival_none(table, seq);
            case NoiseModel::Kind::Depolarizing:
                return survival_depolarizing(table, seq, config.noise.epsilon);
            case NoiseModel::Kind::Lindblad:
                return survival_superop(cliff_superops, seq);
        }
        return 0.0;
    };

    const int total = nl * config.n_sequences;
    const int threads = std::max(1, config.threads);
    if (threads == 1) {
        for (int k = 0; k < total; ++k)
            res.per_sequence[k / config.n_sequences][k % config.n_sequences] =
                run_cell(k / config.n_sequences, k % config.n_sequences);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (total + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int b = t * chunk, e = std::min(total, b + chunk);
            if (b >= e) break;
            pool.emplace_back([&, b, e]() {
                for (int k = b; k < e; ++k)
                    res.per_sequence[k / config.n_sequences][k % config.n_sequences] =
                        run_cell(k / config.n_sequences, k % config.n_sequences);
            });
        }
        for (auto& th : pool) th.join();
    }

    res.survival.resize(nl);
    for (int li = 0; li < nl; ++li) {
        double s = 0.0;
        for (double v : res.per_sequence[li]) s += v;
        res.survival[li] = s / config.n_sequences;
    }
    fit_rb_decay(res);
    return res;
}

IrbFidelity irb_fidelity(const RbResult& rb, const RbResult& irb) {
    if (rb.lengths != irb.lengths)
        throw DomainError("RB and IRB length grids must match");
    IrbFidelity out;
    const double ratio = irb.fit_p / rb.fit_p;
    out.gate_error = (1.0 - ratio) / 2.0;
    out.fidelity = 1.0 - out.gate_error;
    if (irb.fit_p > rb.fit_p + 3.0 * (rb.fit_p_stderr + irb.fit_p_stderr) + 1e-12)
        out.unphysical = true;  // noise-floor result, returned with a warning
    return out;
}

}  // namespace fluxsim
