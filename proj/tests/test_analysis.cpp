#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "ionqaoa/analysis.hpp"
#include "ionqaoa/ionchain.hpp"
#include "ionqaoa/problems.hpp"
#include "ionqaoa/rng.hpp"

using namespace ionqaoa;
using linalg::Mat;
using linalg::Vec;

TEST_CASE("haar bin masses integrate to one") {
    for (int n : {4, 6}) {
        const Vec q = analysis::haar_bin_masses(75, 1 << (n - 1));
        const double total = std::accumulate(q.begin(), q.end(), 0.0);
        REQUIRE(std::abs(total - 1.0) <= 1e-10);
        for (double v : q) REQUIRE(v >= 0.0);
    }
}

TEST_CASE("expressibility descriptor") {
    const auto base = ionchain::coupling_base_from_trap(ionchain::TrapConfig{.n = 4});

    SECTION("histogram conserves samples and the result is deterministic") {
        const auto spec = sim::AnsatzSpec::ion_native(base, analysis::asymmetric_config(4));
        const auto a = analysis::expressibility_kl(spec, 2, 1000, 10, 5);
        const auto b = analysis::expressibility_kl(spec, 2, 1000, 10, 5);
        std::uint64_t total = 0;
        for (auto c : a.histogram.counts) total += c;
        REQUIRE(total == 1000);
        REQUIRE(a.d_kl == b.d_kl);
        REQUIRE(a.histogram.counts == b.histogram.counts);
        REQUIRE(a.d_kl >= -1e-12);
        REQUIRE(a.hilbert_dim == 8);
    }

    SECTION("a parameter-blind ansatz gives the delta-distribution divergence") {
        // zero couplings: every layer acts trivially on |+>^n, all fidelities 1
        ionchain::CouplingBase zero;
        zero.n = 4;
        zero.omega_max_hz = 30.0e3;
        zero.c = Mat(4, 4);
        const auto spec = sim::AnsatzSpec::ion_native(zero, Vec(4, 1.0));
        const int bins = 75;
        const auto res = analysis::expressibility_kl(spec, 3, 1000, bins, 11);
        REQUIRE(res.histogram.counts[bins - 1] == 1000);
        const double q_top = analysis::haar_bin_masses(bins, 8)[bins - 1];
        REQUIRE(res.d_kl == Catch::Approx(-std::log(q_top)).epsilon(1e-9));
    }

    SECTION("samples drawn from the Haar density itself give small divergence") {
        // inverse-CDF oracle for the Haar fidelity distribution, N = 32
        const int hilbert_dim = 32, bins = 75, samples = 10000;
        rng::Xoshiro256ss gen(17);
        std::vector<std::uint64_t> counts(bins, 0);
        for (int s = 0; s < samples; ++s) {
            const double f = 1.0 - std::pow(gen.uniform_pos(), 1.0 / (hilbert_dim - 1));
            int b = static_cast<int>(f * bins);
            b = std::min(std::max(b, 0), bins - 1);
            ++counts[b];
        }
        const Vec q = analysis::haar_bin_masses(bins, hilbert_dim);
        double d_kl = 0.0;
        for (int b = 0; b < bins; ++b) {
            if (counts[b] == 0) continue;
            const double pb = static_cast<double>(counts[b]) / samples;
            d_kl += pb * std::log(pb / q[b]);
        }
        REQUIRE(d_kl >= -1e-12);
        REQUIRE(d_kl < 0.05);
    }

    SECTION("input validation") {
        const auto spec = sim::AnsatzSpec::ion_native(base, analysis::asymmetric_config(4));
        REQUIRE_THROWS_AS(analysis::expressibility_kl(spec, 2, 0, 75, 1), std::invalid_argument);
        REQUIRE_THROWS_AS(analysis::expressibility_kl(spec, 2, 1000, 5, 1), std::invalid_argument);
    }
}

TEST_CASE("singular profiles") {
    const auto base = ionchain::coupling_base_from_trap(ionchain::TrapConfig{.n = 4});

    SECTION("unit-norm rows carry total energy K") {
        const auto spec = sim::AnsatzSpec::ion_native(base, analysis::asymmetric_config(4));
        const auto prof = analysis::singular_profile(spec, 3, 8, 21);
        double energy = 0.0;
        for (double s : prof.sigmas) energy += s * s;
        REQUIRE(energy == Catch::Approx(8.0).margin(1e-9));
        for (std::size_t k = 1; k < prof.sigmas.size(); ++k)
            REQUIRE(prof.sigmas[k - 1] >= prof.sigmas[k] - 1e-12);
    }

    SECTION("identical rows collapse to a single singular value sqrt(K)") {
        // parameter-blind ansatz: every sampled state is |+>^n up to phase
        ionchain::CouplingBase zero;
        zero.n = 4;
        zero.omega_max_hz = 30.0e3;
        zero.c = Mat(4, 4);
        const auto spec = sim::AnsatzSpec::ion_native(zero, Vec(4, 1.0));
        const auto prof = analysis::singular_profile(spec, 2, 6, 3);
        REQUIRE(prof.sigmas[0] == Catch::Approx(std::sqrt(6.0)).margin(1e-9));
        for (std::size_t k = 1; k < prof.sigmas.size(); ++k)
            REQUIRE(prof.sigmas[k] <= 1e-10);
    }

    SECTION("orthonormal rows give a flat profile of ones") {
        // Gram of K mutually orthogonal unit rows is the identity
        const std::size_t k = 5;
        std::vector<std::complex<double>> gram(k * k, {0.0, 0.0});
        for (std::size_t i = 0; i < k; ++i) gram[i * k + i] = {1.0, 0.0};
        const Vec eig = linalg::hermitian_eigenvalues(gram, k);
        for (double v : eig) REQUIRE(std::sqrt(v) == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("determinism and validation") {
        const auto spec = sim::AnsatzSpec::ion_native(base, analysis::asymmetric_config(4));
        const auto a = analysis::singular_profile(spec, 2, 6, 9);
        const auto b = analysis::singular_profile(spec, 2, 6, 9);
        REQUIRE(a.sigmas == b.sigmas);
        REQUIRE_THROWS_AS(analysis::singular_profile(spec, 2, 17, 9), std::invalid_argument);
    }
}
