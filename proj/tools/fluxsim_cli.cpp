#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "fluxsim/circuit.hpp"
#include "fluxsim/clifford.hpp"
#include "fluxsim/dressed.hpp"
#include "fluxsim/errors.hpp"
#include "fluxsim/io.hpp"
#include "fluxsim/lindblad.hpp"
#include "fluxsim/noise.hpp"
#include "fluxsim/pulses.hpp"
#include "fluxsim/rb.hpp"
#include "fluxsim/reset.hpp"
#include "fluxsim/spectrum.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace fluxsim;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    int threads = 1;
    std::string config_text;

    std::string header(const std::string& command) const {
        return output_header(config_text, command);
    }
    std::string path(const std::string& name) const {
        return (fs::path(out_dir) / name).string();
    }
    void prepare() {
        config_text = read_text_file(config_path);
        fs::create_directories(out_dir);
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "device config file")->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--format", opts.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", opts.threads, "worker threads for sweeps");
}

// JSON mirror of the CSV comment header.
json json_meta(const CommonOpts& opts, const std::string& command) {
    return json{{"tool", kToolVersion},
                {"command", command},
                {"config_hash", config_hash_hex(opts.config_text)}};
}

int run_spectrum(CommonOpts& opts, double flux, int levels) {
    opts.prepare();
    CircuitParams params = load_config(opts.config_path);
    Spectrum s = eigensolve(params, flux, levels);
    json out = json_meta(opts, "spectrum");
    out["flux"] = s.flux;
    out["basis_size"] = s.basis_size;
    out["energies_ghz"] = std::vector<double>(s.energies.data(),
                                              s.energies.data() + s.levels());
    json phi, nel;
    for (int i = 0; i < s.levels(); ++i)
        for (int j = i + 1; j < s.levels(); ++j) {
            const std::string key = std::to_string(i) + "-" + std::to_string(j);
            phi[key] = s.phi_elements(i, j);
            nel[key] = std::abs(s.n_elements(i, j));
        }
    out["phi_elements"] = phi;
    out["n_elements_abs"] = nel;
    write_text_file(opts.path("spectrum.json"), out.dump(2) + "\n");

    const double delta = s.transition(0, 1);
    std::printf("flux           : %.6f Phi0\n", flux);
    std::printf("qubit splitting: %.4f MHz\n", delta * 1e3);
    std::printf("g->f, g->h     : %.4f, %.4f GHz\n", s.transition(0, 2), s.transition(0, 3));
    std::printf("|<g|phi|e>|    : %.6f\n", std::abs(s.phi_elements(0, 1)));
    std::printf("wrote %s\n", opts.path("spectrum.json").c_str());
    return 0;
}

int run_coherence(CommonOpts& opts, double flux_min, double flux_max, int points) {
    opts.prepare();
    CircuitParams params = load_config(opts.config_path);
    if (params.coupling_g <= 0.0) params = calibrate_coupling(params, 60.0);
    std::vector<double> grid;
    for (int k = 0; k < points; ++k)
        grid.push_back(points == 1 ? flux_min
                                   : flux_min + (flux_max - flux_min) * k / (points - 1));
    auto pts = total_t1_curve(params, grid);

    CsvWriter csv({"flux", "qubit_freq_ghz", "t1_dielectric_us", "t1_fluxline_us",
                   "t1_one_over_f_us", "t1_chargeline_us", "t1_inductive_us",
                   "t1_purcell_us", "t1_total_us", "t2e_us", "status"});
    int skipped = 0;
    for (const auto& p : pts) {
        std::vector<std::string> row;
        for (double v : {p.flux, p.qubit_freq_ghz, p.t1_dielectric_us, p.t1_fluxline_us,
                         p.t1_one_over_f_us, p.t1_chargeline_us, p.t1_inductive_us,
                         p.t1_purcell_us, p.t1_total_us, p.t2e_us})
            row.push_back(format_double(v));
        row.push_back(p.ok ? "ok" : "labeling_collision");
        if (!p.ok) ++skipped;
        csv.add_row_text(row);
    }
    csv.write(opts.path("coherence.csv"), opts.header("coherence"));
    if (opts.format == "json") {
        json out = json_meta(opts, "coherence");
        json arr = json::array();
        for (const auto& p2 : pts)
            arr.push_back({{"flux", p2.flux},
                           {"qubit_freq_ghz", p2.qubit_freq_ghz},
                           {"t1_dielectric_us", p2.t1_dielectric_us},
                           {"t1_fluxline_us", p2.t1_fluxline_us},
                           {"t1_one_over_f_us", p2.t1_one_over_f_us},
                           {"t1_chargeline_us", p2.t1_chargeline_us},
                           {"t1_inductive_us", p2.t1_inductive_us},
                           {"t1_purcell_us", p2.ok ? json(p2.t1_purcell_us) : json()},
                           {"t1_total_us", p2.ok ? json(p2.t1_total_us) : json()},
                           {"t2e_us", p2.t2e_us},
                           {"status", p2.ok ? "ok" : "labeling_collision"}});
        out["points"] = arr;
        write_text_file(opts.path("coherence.json"), out.dump(2) + "\n");
    }

    const auto& at_half = *std::min_element(pts.begin(), pts.end(), [](auto& a, auto& b) {
        return std::abs(a.flux - 0.5) < std::abs(b.flux - 0.5);
    });
    std::printf("calibrated g   : %.6f GHz\n", params.coupling_g);
    std::printf("T1 total  @%.3f: %.1f us\n", at_half.flux, at_half.t1_total_us);
    std::printf("T1 dielec @%.3f: %.1f us\n", at_half.flux, at_half.t1_dielectric_us);
    std::printf("T2e       @%.3f: %.1f us\n", at_half.flux, at_half.t2e_us);
    if (skipped) std::printf("skipped %d flux points (labeling collisions)\n", skipped);
    std::printf("wrote %s\n", opts.path("coherence.csv").c_str());
    return 0;
}

int run_rabi2d(CommonOpts& opts, double amp_max, int amp_points, double dtz_max,
               int dtz_points, double dt_p, const std::string& initial) {
    opts.prepare();
    CircuitParams params = load_config(opts.config_path);
    Spectrum s = eigensolve(params, 0.5, 2);
    const double delta = s.transition(0, 1);

    std::vector<double> amps, dtzs;
    for (int i = 0; i < amp_points; ++i)
        amps.push_back(-amp_max + 2.0 * amp_max * i / (amp_points - 1));
    for (int j = 0; j < dtz_points; ++j)
        dtzs.push_back(dtz_max * j / (dtz_points - 1));

    Vec2 psi;
    if (initial == "e") psi << 1, 0;
    else if (initial == "g") psi << 0, 1;
    else if (initial == "+x") psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    else throw DomainError("initial state must be e, g or +x");

    Rabi2DMap map = rabi2d(delta, dt_p, amps, dtzs, psi, opts.threads);

    CsvWriter csv({"amplitude_ghz", "dtz_ns", "sx", "sy", "sz"});
    for (size_t i = 0; i < amps.size(); ++i)
        for (size_t j = 0; j < dtzs.size(); ++j)
            csv.add_row({amps[i], dtzs[j], map.sx(i, j), map.sy(i, j), map.sz(i, j)});
    csv.write(opts.path("rabi2d.csv"), opts.header("rabi2d"));

    auto to_img = [&](const Eigen::MatrixXd& m, const std::string& name) {
        std::vector<std::vector<double>> img(amps.size(),
                                             std::vector<double>(dtzs.size()));
        for (size_t i = 0; i < amps.size(); ++i)
            for (size_t j = 0; j < dtzs.size(); ++j) img[i][j] = m(i, j);
        write_ppm(opts.path(name), img, -1.0, 1.0, opts.header("rabi2d"));
    };
    to_img(map.sx, "rabi2d_sx.ppm");
    to_img(map.sy, "rabi2d_sy.ppm");
    to_img(map.sz, "rabi2d_sz.ppm");

    std::printf("Delta          : %.4f MHz\n", delta * 1e3);
    std::printf("grid           : %zu amplitudes x %zu idle times\n", amps.size(),
                dtzs.size());
    std::printf("wrote %s (+3 ppm maps)\n", opts.path("rabi2d.csv").c_str());
    return 0;
}

int run_calibrate(CommonOpts& opts, double chi_target_khz, double dt_p) {
    opts.prepare();
    CircuitParams params = load_config(opts.config_path);
    if (params.coupling_g <= 0.0) params = calibrate_coupling(params, chi_target_khz);
    DressedSystem ds = build_dressed(params, 0.5);
    auto chi = dispersive_shifts(ds);
    Eigen::MatrixXd one = drive_rate_table(ds, 0.258);
    Eigen::MatrixXd two = two_photon_rate_table(ds, 0.258);

    Spectrum s = eigensolve(params, 0.5, 2);
    const double delta = s.transition(0, 1);
    GateCalibration cal = calibrate_gate_set(delta, dt_p);

    json out = json_meta(opts, "calibrate");
    out["coupling_g_ghz"] = params.coupling_g;
    out["delta_ghz"] = delta;
    out["dt_p_ns"] = dt_p;
    out["lambda"] = cal.lambda;
    out["chi_khz"] = {{"g", chi.at(0)}, {"e", chi.at(1)}, {"f", chi.at(2)}, {"h", chi.at(3)}};
    // figure of merit for plasmon-assisted readout: signal gain from reading
    // out on (g, f) instead of (g, e)
    const double readout_gain = std::abs(chi.at(2) - chi.at(0)) / std::abs(chi.at(1) - chi.at(0));
    out["plasmon_readout_gain"] = readout_gain;
    json dressed_states = json::array();
    for (int k = 0; k < ds.trunc.dim(); ++k)
        dressed_states.push_back({{"level", ds.labels[k].first},
                                  {"photons", ds.labels[k].second},
                                  {"energy_ghz", ds.energies[k]}});
    out["dressed_states"] = dressed_states;
    json gates = json::array();
    for (const char* name : {"Y/2", "-Y/2", "Z/2", "-Z/2", "X/2", "X", "Y", "Z"}) {
        PulseProgram p = compose_gate(name, cal);
        json segs = json::array();
        for (const auto& seg : p.segments)
            segs.push_back({{"shape", seg.shape == SegmentShape::TriangularSpike
                                          ? "spike"
                                          : "idle"},
                            {"amplitude_ghz", seg.amplitude},
                            {"duration_ns", seg.duration}});
        gates.push_back({{"name", name},
                         {"length_ns", p.total_duration()},
                         {"segments", segs}});
    }
    out["gates"] = gates;
    write_text_file(opts.path("calibration.json"), out.dump(2) + "\n");

    // rate tables over the six-state block (g0 e0 f0 h0 g1 e1)
    const std::vector<std::pair<std::string, int>> states = {
        {"g0", ds.index_of(0, 0)}, {"e0", ds.index_of(1, 0)}, {"f0", ds.index_of(2, 0)},
        {"h0", ds.index_of(3, 0)}, {"g1", ds.index_of(0, 1)}, {"e1", ds.index_of(1, 1)}};
    const std::pair<std::string, const Eigen::MatrixXd*> tables[] = {
        {"rates_one_photon.csv", &one}, {"rates_two_photon.csv", &two}};
    for (const auto& [name, table] : tables) {
        std::vector<std::string> cols{"state"};
        for (const auto& st : states) cols.push_back(st.first);
        CsvWriter csv(cols);
        for (const auto& row_st : states) {
            std::vector<std::string> row{row_st.first};
            for (const auto& col_st : states)
                row.push_back(row_st.second == col_st.second
                                  ? "0"
                                  : format_double((*table)(row_st.second, col_st.second)));
            csv.add_row_text(row);
        }
        csv.write(opts.path(name), opts.header("calibrate"));
    }

    std::printf("coupling g     : %.6f GHz (chi_e - chi_g = %.2f kHz)\n",
                params.coupling_g, chi.at(1));
    std::printf("readout gain   : %.2fx (plasmon-assisted, |chi_f-chi_g|/|chi_e-chi_g|)\n",
                readout_gain);
    std::printf("Delta, lambda  : %.4f MHz, %.6f\n", delta * 1e3, cal.lambda);
    for (const char* name : {"Y/2", "Z/2", "X/2"})
        std::printf("%-5s length   : %.2f ns\n", name,
                    compose_gate(name, cal).total_duration());
    std::printf("wrote %s, rates_one_photon.csv, rates_two_photon.csv\n",
                opts.path("calibration.json").c_str());
    return 0;
}

int run_reset(CommonOpts& opts, double duration_us, double rabi1, double rabi2,
              bool kappa_off) {
    opts.prepare();
    CircuitParams params = load_config(opts.config_path);
    if (params.coupling_g <= 0.0) params = calibrate_coupling(params, 60.0);
    ResetConfig cfg;
    cfg.duration_us = duration_us;
    cfg.rabi_g0h0_mhz = rabi1;
    cfg.rabi_h0e1_mhz = rabi2;
    cfg.kappa_off = kappa_off;
    ResetResult r = simulate_reset(params, cfg);

    std::vector<std::string> cols{"time_us"};
    for (const auto& [l, n] : r.labels) {
        static const char* names = "gefh";
        std::string nm = l < 4 ? std::string(1, names[l]) : "l" + std::to_string(l);
        cols.push_back("p_" + nm + std::to_string(n));
    }
    CsvWriter csv(cols);
    for (size_t k = 0; k < r.t_us.size(); ++k) {
        std::vector<double> row{r.t_us[k]};
        for (int i = 0; i < r.populations[k].size(); ++i) row.push_back(r.populations[k][i]);
        csv.add_row(row);
    }
    csv.write(opts.path("reset.csv"), opts.header("reset"));
    if (opts.format == "json") {
        json out = json_meta(opts, "reset");
        out["rabi_g0h0_mhz"] = r.rabi_g0h0_mhz;
        out["rabi_h0e1_mhz"] = r.rabi_h0e1_mhz;
        out["steady_p_e0"] = r.steady_p_e0;
        out["crossing_95_us"] = r.crossing_95_us;
        out["t_us"] = r.t_us;
        out["p_e0"] = r.p_e0;
        out["p_g0"] = r.p_g0;
        write_text_file(opts.path("reset.json"), out.dump(2) + "\n");
    }

    std::printf("drives         : %.3f MHz (g0-h0), %.3f MHz (h0-e1)%s\n", r.rabi_g0h0_mhz,
                r.rabi_h0e1_mhz, kappa_off ? " [kappa off]" : "");
    std::printf("steady P(e0)   : %.4f\n", r.steady_p_e0);
    if (r.crossing_95_us >= 0.0)
        std::printf("95%% crossing   : %.2f us\n", r.crossing_95_us);
    else
        std::printf("95%% crossing   : never\n");
    std::printf("wrote %s\n", opts.path("reset.csv").c_str());
    return 0;
}

NoiseModel parse_noise(const std::string& noise, double eps, double t1, double t2) {
    NoiseModel nm;
    if (noise == "none") {
        nm.kind = NoiseModel::Kind::None;
    } else if (noise == "depolarizing") {
        nm.kind = NoiseModel::Kind::Depolarizing;
        nm.epsilon = eps;
    } else if (noise == "lindblad") {
        nm.kind = NoiseModel::Kind::Lindblad;
        nm.t1_us = t1;
        nm.t2_us = t2;
    } else {
        throw ConfigError("noise must be none, depolarizing or lindblad");
    }
    return nm;
}

int run_rb_cmd(CommonOpts& opts, std::uint64_t seed, const std::string& lengths_str,
               int n_seq, const std::string& noise, double eps, double t1, double t2,
               const std::string& interleave, double dt_p) {
    opts.prepare();
    CircuitParams params = load_config(opts.config_path);
    Spectrum s = eigensolve(params, 0.5, 2);
    GateCalibration cal = calibrate_gate_set(s.transition(0, 1), dt_p);
    CliffordTable table(cal);

    RbConfig cfg;
    cfg.seed = seed;
    cfg.n_sequences = n_seq;
    cfg.threads = opts.threads;
    cfg.noise = parse_noise(noise, eps, t1, t2);
    if (!interleave.empty()) cfg.interleaved = interleave;
    if (!lengths_str.empty()) {
        cfg.lengths.clear();
        std::stringstream ss(lengths_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.lengths.push_back(std::stoi(tok));
    }

    RbResult r = run_rb(table, cal, cfg);

    json out = json_meta(opts, "rb");
    out["seed"] = seed;
    out["noise"] = noise;
    out["interleaved"] = interleave;
    out["lengths"] = r.lengths;
    out["survival"] = r.survival;
    out["fit"] = {{"a", r.fit_a}, {"b", r.fit_b}, {"p", r.fit_p},
                  {"p_stderr", r.fit_p_stderr}, {"residual", r.fit_residual}};
    out["avg_error_per_clifford"] = r.avg_error;
    out["avg_fidelity"] = 1.0 - r.avg_error;
    if (!interleave.empty()) {
        // reference run without the interleaved gate, same seed and grid
        RbConfig ref_cfg = cfg;
        ref_cfg.interleaved.reset();
        RbResult ref = run_rb(table, cal, ref_cfg);
        IrbFidelity f = irb_fidelity(ref, r);
        out["reference_fit_p"] = ref.fit_p;
        out["gate_error"] = f.gate_error;
        out["gate_fidelity"] = f.fidelity;
        out["unphysical"] = f.unphysical;
        std::printf("IRB %s        : F = %.6f%s\n", interleave.c_str(), f.fidelity,
                    f.unphysical ? " (unphysical: noise floor)" : "");
    }
    const std::string stem = interleave.empty() ? "rb" : "irb";
    write_text_file(opts.path(stem + ".json"), out.dump(2) + "\n");

    CsvWriter csv({"length", "sequence", "survival"});
    for (size_t li = 0; li < r.per_sequence.size(); ++li)
        for (size_t si = 0; si < r.per_sequence[li].size(); ++si)
            csv.add_row({static_cast<double>(r.lengths[li]), static_cast<double>(si),
                         r.per_sequence[li][si]});
    csv.write(opts.path(stem + "_raw.csv"), opts.header("rb"));

    std::printf("noise          : %s%s\n", noise.c_str(),
                interleave.empty() ? "" : (" interleaved " + interleave).c_str());
    std::printf("fit p          : %.6f (stderr %.2e)\n", r.fit_p, r.fit_p_stderr);
    std::printf("r per Clifford : %.3e\n", r.avg_error);
    std::printf("F_avg          : %.5f\n", 1.0 - r.avg_error);
    std::printf("wrote %s\n", opts.path(stem + ".json").c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fluxonium simulation and calibration toolkit"};
    app.require_subcommand(1);
    app.footer(
        "exit codes: 0 ok, 1 config error, 2 physics error (domain, labeling,\n"
        "calibration, numerics), 3 fit error");

    CommonOpts opts;

    auto* c_spec = app.add_subcommand("spectrum", "diagonalize at one flux point");
    double flux = 0.5;
    int levels = 8;
    add_common(c_spec, opts);
    c_spec->add_option("--flux", flux, "external flux, Phi0 units");
    c_spec->add_option("--levels", levels, "eigenlevels to report");

    auto* c_coh = app.add_subcommand("coherence", "T1 budget and T2e over a flux grid");
    double fmin = 0.35, fmax = 0.5;
    int points = 50;
    add_common(c_coh, opts);
    c_coh->add_option("--flux-min", fmin);
    c_coh->add_option("--flux-max", fmax);
    c_coh->add_option("--points", points);

    auto* c_rabi = app.add_subcommand("rabi2d", "2D Rabi maps over (A, dt_z)");
    double amp_max = 0.3, dtz_max = 72.0, dt_p = 4.76;
    int amp_points = 121, dtz_points = 145;
    std::string initial = "e";
    add_common(c_rabi, opts);
    c_rabi->add_option("--amp-max", amp_max, "peak spike amplitude, GHz");
    c_rabi->add_option("--amp-points", amp_points);
    c_rabi->add_option("--dtz-max", dtz_max, "max idle, ns");
    c_rabi->add_option("--dtz-points", dtz_points);
    c_rabi->add_option("--dtp", dt_p, "spike width, ns");
    c_rabi->add_option("--initial", initial, "e | g | +x");

    auto* c_cal = app.add_subcommand("calibrate", "coupling, dispersive shifts, gate table");
    double chi_target = 60.0, dt_p_cal = 4.76;
    add_common(c_cal, opts);
    c_cal->add_option("--chi-target", chi_target, "target |chi_e - chi_g|, kHz");
    c_cal->add_option("--dtp", dt_p_cal, "spike width, ns");

    auto* c_reset = app.add_subcommand("reset", "driven reset into |e0>");
    double duration = 15.0, rabi1 = -1.0, rabi2 = -1.0;
    bool kappa_off = false;
    add_common(c_reset, opts);
    c_reset->add_option("--duration", duration, "us");
    c_reset->add_option("--rabi-g0h0", rabi1, "MHz (<0: from rate table)");
    c_reset->add_option("--rabi-h0e1", rabi2, "MHz (<0: default knob)");
    c_reset->add_flag("--kappa-off", kappa_off, "directionality control run");

    auto* c_rb = app.add_subcommand("rb", "randomized benchmarking");
    std::uint64_t seed = 0;
    std::string lengths_str, noise = "none", interleave;
    int n_seq = 75;
    double eps = 0.0, t1 = 300.0, t2 = 300.0, dt_p_rb = 4.76;
    add_common(c_rb, opts);
    c_rb->add_option("--seed", seed, "master seed (stochastic command)")->required();
    c_rb->add_option("--lengths", lengths_str, "comma-separated sequence lengths");
    c_rb->add_option("--sequences", n_seq, "sequences per length");
    c_rb->add_option("--noise", noise, "none | depolarizing | lindblad");
    c_rb->add_option("--epsilon", eps, "depolarizing probability per Clifford");
    c_rb->add_option("--t1", t1, "us");
    c_rb->add_option("--t2", t2, "us");
    c_rb->add_option("--interleave", interleave, "gate name for IRB");
    c_rb->add_option("--dtp", dt_p_rb, "spike width, ns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // bad flags are config errors
    }

    try {
        if (c_spec->parsed()) return run_spectrum(opts, flux, levels);
        if (c_coh->parsed()) return run_coherence(opts, fmin, fmax, points);
        if (c_rabi->parsed())
            return run_rabi2d(opts, amp_max, amp_points, dtz_max, dtz_points, dt_p, initial);
        if (c_cal->parsed()) return run_calibrate(opts, chi_target, dt_p_cal);
        if (c_reset->parsed()) return run_reset(opts, duration, rabi1, rabi2, kappa_off);
        if (c_rb->parsed())
            return run_rb_cmd(opts, seed, lengths_str, n_seq, noise, eps, t1, t2,
                              interleave, dt_p_rb);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const FitError& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
