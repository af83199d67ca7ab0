#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "fluxsim/dressed.hpp"
#include "fluxsim/errors.hpp"

using namespace fluxsim;

namespace {

CircuitParams calibrated_params() {
    static CircuitParams cached = [] {
        CircuitParams p;
        return calibrate_coupling(p, 60.0);
    }();
    return cached;
}

}  // namespace

TEST_CASE("decoupled limit: dressed energies are bare sums, labels exact") {
    CircuitParams p;
    p.coupling_g = 0.0;
    DressedSystem ds = build_dressed(p, 0.5);
    const Eigen::VectorXd ef = ds.bare.energies.array() - ds.bare.energies[0];
    for (int k = 0; k < ds.trunc.dim(); ++k) {
        auto [l, n] = ds.labels[k];
        CHECK(ds.energies[k] ==
              doctest::Approx(ef[l] + n * p.resonator_freq).epsilon(1e-12));
    }
    SUBCASE("a_elements reduce to the bare ladder") {
        for (int l = 0; l < ds.trunc.fluxonium; ++l)
            for (int n = 0; n + 1 < ds.trunc.photons; ++n) {
                const double el =
                    std::abs(ds.a_elements(ds.index_of(l, n), ds.index_of(l, n + 1)));
                CHECK(el == doctest::Approx(std::sqrt(n + 1.0)).epsilon(1e-10));
            }
    }
}

TEST_CASE("labels form a bijection onto the retained grid") {
    DressedSystem ds = build_dressed(calibrated_params(), 0.5);
    std::set<std::pair<int, int>> seen(ds.labels.begin(), ds.labels.end());
    CHECK(static_cast<int>(seen.size()) == ds.trunc.dim());
}

TEST_CASE("dressed energies reduce continuously to bare as g -> 0") {
    CircuitParams p;
    p.coupling_g = 1e-6;
    DressedSystem ds = build_dressed(p, 0.5);
    const Eigen::VectorXd ef = ds.bare.energies.array() - ds.bare.energies[0];
    double max_dev = 0.0;
    for (int k = 0; k < ds.trunc.dim(); ++k) {
        auto [l, n] = ds.labels[k];
        max_dev = std::max(max_dev,
                           std::abs(ds.energies[k] - ef[l] - n * p.resonator_freq));
    }
    CHECK(max_dev < 1e-6);  // < 1 kHz
}

TEST_CASE("labeling collision near a deliberate resonance is surfaced, not resolved") {
    CircuitParams p;
    Spectrum s = eigensolve(p, 0.5, 6);
    p.resonator_freq = s.transition(0, 3);  // park the resonator on g->h
    p.coupling_g = 0.2;  // strong mixing: several states contest one label
    CHECK_THROWS_AS(build_dressed(p, 0.5), LabelingError);
}

TEST_CASE("dispersive shifts") {
    SUBCASE("all zero at g = 0") {
        CircuitParams p;
        p.coupling_g = 0.0;
        auto chi = dispersive_shifts(build_dressed(p, 0.5));
        for (auto& [l, v] : chi) CHECK(std::abs(v) < 1e-9);
    }
    SUBCASE("photon cutoff below 2 rejected") {
        CHECK_THROWS_AS(build_dressed(CircuitParams{}, 0.5, {8, 2}), DomainError);
    }
    SUBCASE("calibrated qubit shift is 60 kHz within 1%") {
        auto chi = dispersive_shifts(build_dressed(calibrated_params(), 0.5));
        CHECK(std::abs(chi.at(1)) == doctest::Approx(60.0).epsilon(0.011));
        CHECK(chi.at(0) == 0.0);
    }
    SUBCASE("plasmon-level shifts dwarf the qubit shift (plasmon-assisted readout)") {
        auto chi = dispersive_shifts(build_dressed(calibrated_params(), 0.5));
        CHECK(std::abs(chi.at(2)) / std::abs(chi.at(1)) > 4.0);
        CHECK(std::abs(chi.at(3)) / std::abs(chi.at(1)) > 4.0);
    }
    SUBCASE("second order in g: doubling g quadruples chi_e - chi_g") {
        CircuitParams p = calibrated_params();
        auto chi1 = dispersive_shifts(build_dressed(p, 0.5));
        p.coupling_g *= 2.0;
        auto chi2 = dispersive_shifts(build_dressed(p, 0.5));
        CHECK(chi2.at(1) / chi1.at(1) == doctest::Approx(4.0).epsilon(0.12));
        // the perturbative oracle scales exactly as g^2
        auto pert1 = dispersive_shifts_perturbative(p, 0.5, p.coupling_g / 2.0);
        auto pert2 = dispersive_shifts_perturbative(p, 0.5, p.coupling_g);
        CHECK(pert2.at(1) / pert1.at(1) == doctest::Approx(4.0).epsilon(1e-9));
    }
    SUBCASE("exact chi_f agrees with the perturbative oracle to 10%") {
        CircuitParams p = calibrated_params();
        auto exact = dispersive_shifts(build_dressed(p, 0.5));
        auto pert = dispersive_shifts_perturbative(p, 0.5, p.coupling_g);
        CHECK(exact.at(2) == doctest::Approx(pert.at(2)).epsilon(0.10));
    }
}

TEST_CASE("coupling calibration") {
    SUBCASE("target zero returns g = 0") {
        CHECK(calibrate_coupling(CircuitParams{}, 0.0).coupling_g == 0.0);
    }
    SUBCASE("fixed point: recomputing chi at g* returns the target within 1%") {
        CircuitParams p = calibrated_params();
        CHECK(p.coupling_g > 0.01);
        CHECK(p.coupling_g < 0.2);
        auto chi = dispersive_shifts(build_dressed(p, 0.5));
        CHECK(std::abs(chi.at(1)) == doctest::Approx(60.0).epsilon(0.011));
    }
    SUBCASE("negative target rejected") {
        CHECK_THROWS_AS(calibrate_coupling(CircuitParams{}, -5.0), DomainError);
    }
}

TEST_CASE("one-photon drive-rate table") {
    DressedSystem ds = build_dressed(calibrated_params(), 0.5);
    Eigen::MatrixXd t = drive_rate_table(ds, 0.258);
    const int g0 = ds.index_of(0, 0), e0 = ds.index_of(1, 0), f0 = ds.index_of(2, 0);
    const int h0 = ds.index_of(3, 0), g1 = ds.index_of(0, 1), e1 = ds.index_of(1, 1);

    SUBCASE("normalization: the g0-g1 entry reads the normalization itself") {
        CHECK(t(g0, g1) == doctest::Approx(258.0).epsilon(1e-9));
        CHECK(t(e0, e1) == doctest::Approx(258.0).epsilon(0.01));
    }
    SUBCASE("diagonal vanishes and the table is symmetric") {
        for (int i = 0; i < ds.trunc.dim(); ++i) CHECK(t(i, i) == 0.0);
        CHECK((t - t.transpose()).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("device-table entries within 25%") {
        CHECK(t(g0, h0) == doctest::Approx(6.2577).epsilon(0.25));  // 80 ns pi pulse
        CHECK(t(e0, f0) == doctest::Approx(5.8679).epsilon(0.25));
        CHECK(t(f0, h0) == doctest::Approx(1.2475).epsilon(0.25));
    }
    SUBCASE("entry ratios track the device table much tighter") {
        CHECK(t(e0, f0) / t(g0, h0) == doctest::Approx(5.8679 / 6.2577).epsilon(0.05));
        CHECK(t(f0, h0) / t(g0, h0) == doctest::Approx(1.2475 / 6.2577).epsilon(0.05));
    }
    SUBCASE("pi-pulse time of the g0-h0 entry is about 80 ns") {
        const double t_pi_ns = 1e3 / (2.0 * t(g0, h0));
        CHECK(t_pi_ns == doctest::Approx(80.0).epsilon(0.25));
    }
    SUBCASE("parity-forbidden g0-e1 entry is strongly suppressed") {
        CHECK(t(g0, e1) < 0.05 * t(h0, e1) + 1e-6);
    }
}

TEST_CASE("two-photon rate table") {
    DressedSystem ds = build_dressed(calibrated_params(), 0.5);
    Eigen::MatrixXd t2 = two_photon_rate_table(ds, 0.258);
    const int g0 = ds.index_of(0, 0), e0 = ds.index_of(1, 0), f0 = ds.index_of(2, 0);

    SUBCASE("g0-f0 lands within a factor 2 of the device value 1.9213 MHz") {
        CHECK(t2(g0, f0) > 1.9213 / 2.0);
        CHECK(t2(g0, f0) < 1.9213 * 2.0);
    }
    SUBCASE("parity-suppressed g0-e0 is orders of magnitude below g0-f0") {
        CHECK(t2(g0, e0) < 1e-3 * t2(g0, f0));
    }
    SUBCASE("decoupled qubit-only limit vanishes") {
        CircuitParams p;
        p.coupling_g = 0.0;
        DressedSystem d0 = build_dressed(p, 0.5);
        Eigen::MatrixXd z = two_photon_rate_table(d0, 0.258);
        // with g = 0 the drive ladder only connects same fluxonium level;
        // two-photon qubit transitions pick up nothing
        CHECK(z(d0.index_of(0, 0), d0.index_of(1, 0)) < 1e-12);
    }
    SUBCASE("near-resonant intermediate states are reported divergent") {
        // hand-built system: one intermediate sits < 1 MHz from the
        // half-transition drive
        DressedSystem fake;
        fake.trunc = {1, 4};
        fake.energies = Eigen::Vector4d(0.0, 0.5000005, 1.0, 2.2);
        fake.labels = {{0, 0}, {0, 1}, {0, 2}, {0, 3}};
        fake.drive_elements = Eigen::MatrixXcd::Ones(4, 4);
        Eigen::MatrixXd z = two_photon_rate_table(fake, 0.258);
        CHECK(std::isnan(z(0, 2)));  // drive at 0.5; state 1 detuned by 0.5 kHz
        CHECK(std::isfinite(z(0, 3)));
    }
}

TEST_CASE("index_of rejects absent labels") {
    DressedSystem ds = build_dressed(calibrated_params(), 0.5);
    CHECK_THROWS_AS(ds.index_of(0, 99), DomainError);
}
