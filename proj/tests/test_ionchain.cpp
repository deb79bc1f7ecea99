#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <json.hpp>

#include "ionqaoa/constants.hpp"
#include "ionqaoa/io.hpp"
#include "ionqaoa/ionchain.hpp"

using namespace ionqaoa;
using ionchain::TrapConfig;
using linalg::Mat;
using linalg::Vec;

namespace {

TrapConfig default_trap(int n) {
    TrapConfig t;
    t.n = n;
    return t;
}

double gradient_norm(const Vec& u) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double g = 2.0 * u[i];
        for (std::size_t j = 0; j < u.size(); ++j) {
            if (j == i) continue;
            const double d = u[i] - u[j];
            g -= 2.0 * (d > 0.0 ? 1.0 : -1.0) / (d * d);
        }
        s += g * g;
    }
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("equilibrium positions match analytic values") {
    SECTION("single ion sits at the trap centre") {
        const Vec u = ionchain::equilibrium_positions(1);
        REQUIRE(u.size() == 1);
        REQUIRE(u[0] == 0.0);
    }

    SECTION("two ions at +-(1/4)^(1/3)") {
        const Vec u = ionchain::equilibrium_positions(2);
        const double expect = std::cbrt(0.25);
        REQUIRE(u[0] == Catch::Approx(-expect).margin(1e-10));
        REQUIRE(u[1] == Catch::Approx(expect).margin(1e-10));

        // independent 1-D scan of V restricted to the symmetric configuration
        double best_x = 0.0, best_v = 1e300;
        for (int i = 1; i <= 20000; ++i) {
            const double x = i * 1e-4;
            const double v = 2.0 * x * x + 1.0 / x;  // u = (-x, x), pair counted twice
            if (v < best_v) {
                best_v = v;
                best_x = x;
            }
        }
        REQUIRE(u[1] == Catch::Approx(best_x).margin(1e-4));
    }

    SECTION("three ions at (-(5/4)^(1/3), 0, +(5/4)^(1/3))") {
        const Vec u = ionchain::equilibrium_positions(3);
        const double expect = std::cbrt(1.25);
        REQUIRE(u[0] == Catch::Approx(-expect).margin(1e-10));
        REQUIRE(u[1] == Catch::Approx(0.0).margin(1e-10));
        REQUIRE(u[2] == Catch::Approx(expect).margin(1e-10));
    }

    SECTION("gradient norm and antisymmetry up to n = 12") {
        for (int n : {4, 7, 12}) {
            const Vec u = ionchain::equilibrium_positions(n);
            REQUIRE(gradient_norm(u) <= 1e-10);
            for (int i = 0; i + 1 < n; ++i) REQUIRE(u[i] < u[i + 1]);
            for (int i = 0; i < n; ++i)
                REQUIRE(u[i] == Catch::Approx(-u[n - 1 - i]).margin(1e-10));
        }
    }
}

TEST_CASE("mode matrix structure") {
    const double r_x = 1.0e6 / 0.15e6;

    SECTION("n = 1 has no Coulomb terms") {
        const Mat a = ionchain::mode_matrix({0.0}, r_x);
        REQUIRE(a(0, 0) == Catch::Approx(r_x * r_x));
    }

    SECTION("n = 2 diagonal and off-diagonal from the pair distance") {
        const Vec u = ionchain::equilibrium_positions(2);
        const double w = 1.0 / std::pow(u[1] - u[0], 3.0);
        const Mat a = ionchain::mode_matrix(u, r_x);
        REQUIRE(a(0, 0) == Catch::Approx(r_x * r_x - w).margin(1e-12));
        REQUIRE(a(0, 1) == Catch::Approx(w).margin(1e-12));
        REQUIRE(a(1, 0) == Catch::Approx(w).margin(1e-12));
        // equilibrium spacing cubed is exactly 2, so the Coulomb weight is 1/2
        REQUIRE(w == Catch::Approx(0.5).margin(1e-9));
    }

    SECTION("row sums equal r_x^2 for any n") {
        for (int n : {2, 5, 9, 12}) {
            const Mat a = ionchain::mode_matrix(ionchain::equilibrium_positions(n), r_x);
            for (std::size_t i = 0; i < a.rows(); ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < a.cols(); ++j) row += a(i, j);
                REQUIRE(row == Catch::Approx(r_x * r_x).margin(1e-12 * r_x * r_x));
            }
        }
    }

    SECTION("coincident positions are rejected") {
        REQUIRE_THROWS_AS(ionchain::mode_matrix({0.1, 0.1}, r_x), std::invalid_argument);
        REQUIRE_THROWS_AS(ionchain::mode_matrix({0.5, -0.5}, r_x), std::invalid_argument);
    }
}

TEST_CASE("radial modes") {
    const TrapConfig trap = default_trap(2);
    const double r_x = trap.radial_ratio();
    const double omega_z = constants::two_pi * trap.omega_z_hz;

    SECTION("n = 2 eigenvalues: COM at r_x^2, rocking at r_x^2 - 1") {
        const Mat a = ionchain::mode_matrix(ionchain::equilibrium_positions(2), r_x);
        const auto modes = ionchain::radial_modes(a, omega_z);
        // analytic 2x2: diag d, off-diag w -> eigenvalues d + w and d - w
        const double lam0 = modes.frequencies[0] / omega_z;
        const double lam1 = modes.frequencies[1] / omega_z;
        REQUIRE(lam0 * lam0 == Catch::Approx(r_x * r_x).margin(1e-9));
        REQUIRE(lam1 * lam1 == Catch::Approx(r_x * r_x - 1.0).margin(1e-9));
    }

    SECTION("COM mode sits at omega_x with a flat eigenvector, n up to 12") {
        for (int n : {1, 3, 6, 12}) {
            const Mat a = ionchain::mode_matrix(ionchain::equilibrium_positions(n), r_x);
            const auto modes = ionchain::radial_modes(a, omega_z);
            const double omega_x = constants::two_pi * trap.omega_x_hz;
            REQUIRE(modes.frequencies[0] ==
                    Catch::Approx(omega_x).epsilon(1e-9));
            const double flat = 1.0 / std::sqrt(static_cast<double>(n));
            for (int i = 0; i < n; ++i)
                REQUIRE(modes.eigenvectors(i, 0) == Catch::Approx(flat).margin(1e-9));
        }
    }

    SECTION("unstable chain reports the offending mode") {
        // r_x too small: the zigzag mode goes soft for a long chain
        const Mat a = ionchain::mode_matrix(ionchain::equilibrium_positions(10), 1.2);
        REQUIRE_THROWS_AS(ionchain::radial_modes(a, omega_z), UnstableModeError);
    }
}

TEST_CASE("lamb-dicke parameters") {
    SECTION("single Ca-40 ion at 2*pi*1 MHz") {
        ionchain::ModeDecomposition modes;
        modes.frequencies = {constants::two_pi * 1.0e6};
        modes.eigenvectors = Mat::identity(1);
        const Mat eta = ionchain::lamb_dicke(modes, 729.15e-9, 39.96);
        // independent scalar evaluation of the same pinned constants
        const double expect = (constants::two_pi / 729.15e-9) *
                              std::sqrt(constants::hbar /
                                        (2.0 * 39.96 * constants::atomic_mass_kg *
                                         constants::two_pi * 1.0e6));
        REQUIRE(eta(0, 0) == Catch::Approx(expect).epsilon(1e-12));
        REQUIRE(eta(0, 0) == Catch::Approx(0.0969).margin(2e-4));
    }

    SECTION("column norms follow the zero-point amplitude") {
        const TrapConfig trap = default_trap(5);
        const ionchain::PhononData ph = ionchain::compute_phonons(trap);
        const double dk = constants::two_pi / trap.wavelength_m;
        const double mass = trap.mass_amu * constants::atomic_mass_kg;
        for (std::size_t m = 0; m < ph.frequencies.size(); ++m) {
            double col = 0.0;
            for (std::size_t i = 0; i < ph.frequencies.size(); ++i)
                col += ph.lamb_dicke(i, m) * ph.lamb_dicke(i, m);
            const double expect = dk * dk * constants::hbar / (2.0 * mass * ph.frequencies[m]);
            REQUIRE(col == Catch::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("coupling base") {
    const TrapConfig trap = default_trap(2);
    const ionchain::PhononData ph = ionchain::compute_phonons(trap);
    const double mu = trap.laser_detuning_rad();

    SECTION("matches a naive triple-loop summation") {
        const auto base = ionchain::coupling_base(ph, mu, trap.omega_max_hz);
        const std::size_t n = ph.frequencies.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double cij = 0.0;
                if (i != j)
                    for (std::size_t m = 0; m < n; ++m)
                        cij += ph.lamb_dicke(i, m) * ph.lamb_dicke(j, m) * ph.frequencies[m] /
                               (mu * mu - ph.frequencies[m] * ph.frequencies[m]);
                if (i == j)
                    REQUIRE(base.c(i, j) == 0.0);
                else
                    REQUIRE(base.c(i, j) == Catch::Approx(cij).epsilon(1e-12));
            }
        }
        REQUIRE(base.c(0, 1) > 0.0);  // COM term dominates just above the band
        REQUIRE(base.c(0, 1) == base.c(1, 0));
    }

    SECTION("resonant detuning is rejected with the mode index") {
        REQUIRE_THROWS_AS(ionchain::coupling_base(ph, ph.frequencies[1], trap.omega_max_hz),
                          ResonanceError);
    }

    SECTION("invariant under per-mode eigenvector sign flips") {
        const auto base = ionchain::coupling_base(ph, mu, trap.omega_max_hz);
        ionchain::PhononData flipped = ph;
        for (std::size_t i = 0; i < ph.frequencies.size(); ++i) {
            flipped.eigenvectors(i, 0) = -flipped.eigenvectors(i, 0);
            flipped.lamb_dicke(i, 0) = -flipped.lamb_dicke(i, 0);
        }
        const auto base2 = ionchain::coupling_base(flipped, mu, trap.omega_max_hz);
        for (std::size_t i = 0; i < base.c.rows(); ++i)
            for (std::size_t j = 0; j < base.c.cols(); ++j)
                REQUIRE(base2.c(i, j) == Catch::Approx(base.c(i, j)).margin(1e-12));
    }
}

TEST_CASE("coupling matrix") {
    const auto base = ionchain::coupling_base_from_trap(default_trap(6));

    SECTION("A = 0 gives J = 0, quadratic scaling in alpha") {
        REQUIRE(ionchain::coupling_matrix(base, Vec(6, 0.0)).max_abs() == 0.0);

        Vec a{0.3, -0.7, 0.9, 0.1, -0.4, 0.6};
        const Mat j1 = ionchain::coupling_matrix(base, a);
        Vec half = a;
        for (double& v : half) v *= 0.5;
        const Mat j2 = ionchain::coupling_matrix(base, half);
        for (std::size_t i = 0; i < j1.rows(); ++i)
            for (std::size_t k = 0; k < j1.cols(); ++k)
                REQUIRE(j2(i, k) == Catch::Approx(0.25 * j1(i, k)).margin(1e-12));
    }

    SECTION("hyperparameters outside [-1, 1] are rejected") {
        Vec a(6, 1.0);
        a[2] = 1.0001;
        REQUIRE_THROWS_AS(ionchain::coupling_matrix(base, a), std::invalid_argument);
    }

    SECTION("reference trap puts max |J| near 1 in 2*pi*kHz units") {
        const Mat j = ionchain::coupling_matrix(base, Vec(6, 1.0));
        const double jmax_khz = j.max_abs() / constants::two_pi;
        REQUIRE(jmax_khz > 1.0 / 3.0);
        REQUIRE(jmax_khz < 3.0);
    }
}

TEST_CASE("coupling base JSON round trip is exact") {
    const auto base = ionchain::coupling_base_from_trap(default_trap(4));
    nlohmann::json j = base;
    const auto back = j.get<ionchain::CouplingBase>();
    REQUIRE(back.n == base.n);
    REQUIRE(back.omega_max_hz == base.omega_max_hz);
    for (std::size_t i = 0; i < base.c.rows(); ++i)
        for (std::size_t k = 0; k < base.c.cols(); ++k)
            REQUIRE(back.c(i, k) == base.c(i, k));  // bit-exact via shortest-repr floats

    // text round trip too: parse(dump(parse(dump))) identical
    const std::string s1 = j.dump();
    const std::string s2 = nlohmann::json::parse(s1).dump();
    REQUIRE(s1 == s2);
}
