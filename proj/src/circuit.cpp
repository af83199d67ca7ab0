#include "fluxsim/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "fluxsim/errors.hpp"

namespace fluxsim {

void NoiseParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw DomainError(std::string(name) + " must be positive");
    };
    positive(q_cap, "q_cap");
    positive(q_ind, "q_ind");
    positive(q_c, "q_c");
    positive(r_fluxline, "r_fluxline");
    positive(mutual_m, "mutual_m");
    positive(eta_1f, "eta_1f");
    positive(t_c, "t_c");
    for (double t : {t_bath_diel, t_bath_purcell}) {
        if (!(t > 1.0 && t < 1000.0))
            throw DomainError("bath temperatures must lie in (1, 1000) mK");
    }
    if (omega_ir && !(*omega_ir > 0.0)) throw DomainError("omega_ir must be positive");
}

void CircuitParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw DomainError(std::string(name) + " must be positive");
    };
    positive(e_c, "e_c");
    positive(e_j, "e_j");
    positive(e_l, "e_l");
    positive(resonator_freq, "resonator_freq");
    positive(resonator_q, "resonator_q");
    if (!(e_j > e_l))
        throw DomainError("e_j must exceed e_l (double-well regime required)");
    if (coupling_g < 0.0) throw DomainError("coupling_g must be non-negative");
    noise.validate();
}

namespace {

std::map<std::string, double> parse_keyvals(const std::string& text) {
    std::map<std::string, double> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        if (std::find_if(line.begin(), line.end(), notspace) == line.end()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        try {
            size_t used = 0;
            double d = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
            kv[key] = d;
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(lineno) + ": bad number '" + val + "'");
        }
    }
    return kv;
}

}  // namespace

CircuitParams parse_config(const std::string& text) {
    auto kv = parse_keyvals(text);
    CircuitParams p;
    auto take = [&kv](const char* key, double& dst) {
        auto it = kv.find(key);
        if (it != kv.end()) {
            dst = it->second;
            kv.erase(it);
        }
    };
    take("e_c", p.e_c);
    take("e_j", p.e_j);
    take("e_l", p.e_l);
    take("resonator_freq", p.resonator_freq);
    take("resonator_q", p.resonator_q);
    take("coupling_g", p.coupling_g);
    take("q_cap", p.noise.q_cap);
    take("q_ind", p.noise.q_ind);
    take("q_c", p.noise.q_c);
    take("r_fluxline", p.noise.r_fluxline);
    take("mutual_m", p.noise.mutual_m);
    take("eta_1f", p.noise.eta_1f);
    take("t_bath_diel", p.noise.t_bath_diel);
    take("t_bath_purcell", p.noise.t_bath_purcell);
    take("t_c", p.noise.t_c);
    if (auto it = kv.find("omega_ir"); it != kv.end()) {
        p.noise.omega_ir = it->second;
        kv.erase(it);
    }
    if (!kv.empty()) throw ConfigError("unknown config key '" + kv.begin()->first + "'");
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid device config: ") + e.what());
    }
    return p;
}

CircuitParams load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace fluxsim
