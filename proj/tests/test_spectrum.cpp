#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fluxsim/circuit.hpp"
#include "fluxsim/errors.hpp"
#include "fluxsim/spectrum.hpp"

using namespace fluxsim;

namespace {
CircuitParams device_params() {
    CircuitParams p;  // defaults are the device values
    return p;
}
}  // namespace

TEST_CASE("config parsing round-trips the device file") {
    const std::string text =
        "# device\n"
        "e_c = 0.479\n"
        "e_j = 3.395\n"
        "e_l = 0.132\n"
        "resonator_freq = 5.7\n"
        "resonator_q = 600\n"
        "q_cap = 1.25e5\n";
    CircuitParams p = parse_config(text);
    CHECK(p.e_c == doctest::Approx(0.479));
    CHECK(p.noise.q_cap == doctest::Approx(1.25e5));
    CHECK_THROWS_AS(parse_config("e_c = banana\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("mystery_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("e_j = 0.1\n"), ConfigError);  // e_j < e_l
}

TEST_CASE("parameter domain errors") {
    CircuitParams p = device_params();
    p.e_c = -1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = device_params();
    p.e_l = 4.0;  // e_j < e_l: no double well
    CHECK_THROWS_AS(p.validate(), DomainError);
    CHECK_THROWS_AS(build_hamiltonian(device_params(), 0.5, 10), DomainError);
    CHECK_THROWS_AS(eigensolve(device_params(), 0.5, 40, 120), DomainError);
}

TEST_CASE("harmonic limit: tiny E_J gives equally spaced levels at sqrt(8 EC EL)") {
    CircuitParams q = device_params();
    q.e_j = 1e-12;  // e_j > e_l must still hold
    q.e_l = 1e-14;
    Spectrum s = eigensolve(q, 0.3, 8, 120);
    const double gap = std::sqrt(8.0 * q.e_c * q.e_l);
    for (int k = 0; k + 1 < 8; ++k)
        CHECK(s.transition(k, k + 1) == doctest::Approx(gap).epsilon(1e-7));
}

TEST_CASE("qubit splitting at frustration is 14 MHz within 1.5 MHz") {
    Spectrum s = eigensolve(device_params(), 0.5, 6);
    const double delta = s.transition(0, 1);
    CHECK(delta > 0.0125);
    CHECK(delta < 0.0155);
    // Frozen reference from two independent constructions (Fock-basis
    // displacement operators and a real-space grid): 13.8816 MHz.
    CHECK(delta == doctest::Approx(0.0138816).epsilon(1e-4));
}

TEST_CASE("level structure: fluxon doublet then plasmon pair") {
    Spectrum s = eigensolve(device_params(), 0.5, 6);
    const double e = s.transition(0, 1);
    const double f = s.transition(0, 2);
    const double h = s.transition(0, 3);
    CHECK(e < 0.05);     // g-e tunneling splitting
    CHECK(f > 2.5);      // plasmon band
    CHECK(f < 3.5);
    CHECK(h > f);
    CHECK(h - f > 0.1);  // f-h fluxon splitting of the excited doublet
}

TEST_CASE("convergence: doubling the basis moves the lowest 6 levels < 1e-9 relative") {
    Spectrum a = eigensolve(device_params(), 0.5, 6, 120);
    Spectrum b = eigensolve(device_params(), 0.5, 6, 240);
    for (int k = 0; k < 6; ++k) {
        const double scale = std::max(1.0, std::abs(b.energies[k]));
        CHECK(std::abs(a.energies[k] - b.energies[k]) / scale < 1e-9);
    }
}

TEST_CASE("parity selection rule at the frustration point") {
    Spectrum s = eigensolve(device_params(), 0.5, 6);
    CHECK(std::abs(s.n_elements(0, 2)) < 1e-8);  // g-f forbidden
    CHECK(std::abs(s.n_elements(1, 3)) < 1e-8);  // e-h forbidden
    CHECK(std::abs(s.phi_elements(0, 2)) < 1e-8);
    CHECK(std::abs(s.phi_elements(1, 3)) < 1e-8);
    // allowed partners for comparison
    CHECK(std::abs(s.n_elements(0, 3)) > 0.1);
    CHECK(std::abs(s.n_elements(1, 2)) > 0.1);
}

TEST_CASE("matrix elements are Hermitian with the expected structure") {
    Spectrum s = eigensolve(device_params(), 0.43, 6);
    CHECK((s.phi_elements - s.phi_elements.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::MatrixXcd nh = s.n_elements - s.n_elements.adjoint();
    CHECK(nh.cwiseAbs().maxCoeff() < 1e-10);
    // n is purely imaginary antisymmetric under the real-eigenvector convention
    CHECK(s.n_elements.real().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("n-phi matrix-element identity across flux") {
    // |<i|n|j>| = (w_ij / 8 E_C) |<i|phi|j>| for all pairs among the lowest 6
    // levels, 21 flux points spanning [0.35, 0.5].
    CircuitParams p = device_params();
    for (int k = 0; k < 21; ++k) {
        const double flux = 0.35 + 0.15 * k / 20.0;
        Spectrum s = eigensolve(p, flux, 6);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                if (i == j) continue;
                const double lhs = std::abs(s.n_elements(i, j));
                const double rhs = std::abs(s.transition(i, j)) / (8.0 * p.e_c) *
                                   std::abs(s.phi_elements(i, j));
                if (rhs < 1e-10) continue;  // parity-forbidden pair
                CHECK(std::abs(lhs - rhs) / rhs < 1e-6);
            }
        }
    }
}

TEST_CASE("spectral symmetry about the frustration point") {
    for (double d : {0.01, 0.04, 0.09}) {
        Spectrum a = eigensolve(device_params(), 0.5 + d, 6);
        Spectrum b = eigensolve(device_params(), 0.5 - d, 6);
        for (int k = 0; k < 6; ++k)
            CHECK(std::abs(a.energies[k] - b.energies[k]) < 1e-10);
    }
}

TEST_CASE("energies sorted and diagonal phi sane at the symmetric point") {
    Spectrum s = eigensolve(device_params(), 0.5, 8);
    for (int k = 0; k + 1 < s.levels(); ++k) CHECK(s.energies[k] <= s.energies[k + 1]);
    // <g|phi|g> of a symmetric double well vanishes
    CHECK(std::abs(s.phi_elements(0, 0)) < 1e-8);
}

TEST_CASE("retained eigenvectors form an idempotent projector") {
    Eigen::MatrixXd hm = build_hamiltonian(device_params(), 0.47, 120);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hm);
    Eigen::MatrixXd v = solver.eigenvectors().leftCols(8);
    Eigen::MatrixXd proj = v * v.transpose();
    CHECK((proj * proj - proj).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sign convention makes matrix elements reproducible across runs") {
    Spectrum a = eigensolve(device_params(), 0.47, 6);
    Spectrum b = eigensolve(device_params(), 0.47, 6);
    CHECK((a.phi_elements - b.phi_elements).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.n_elements - b.n_elements).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-level reduction") {
    CircuitParams p = device_params();
    Spectrum s = eigensolve(p, 0.5, 6);
    SUBCASE("zero detuning gives A = 0") {
        CHECK(two_level_reduction(s, p, 0.0).a_coeff == 0.0);
    }
    SUBCASE("A at 0.06 Phi0 is about 300 MHz") {
        const double a = two_level_reduction(s, p, 0.06).a_coeff;
        CHECK(a == doctest::Approx(0.300).epsilon(0.15));
    }
    SUBCASE("A is linear in the flux offset") {
        const double a6 = two_level_reduction(s, p, 0.06).a_coeff;
        const double a3 = two_level_reduction(s, p, 0.03).a_coeff;
        CHECK(a3 == doctest::Approx(0.5 * a6).epsilon(1e-12));
    }
    SUBCASE("rejects spectra away from frustration") {
        Spectrum off = eigensolve(p, 0.45, 6);
        CHECK_THROWS_AS(two_level_reduction(off, p, 0.01), DomainError);
    }
}
