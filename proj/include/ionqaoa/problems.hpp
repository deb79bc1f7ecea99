#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ionqaoa/rng.hpp"

namespace ionqaoa::problems {

struct SpectrumSummary {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::vector<std::uint64_t> ground_indices;
    int degeneracy = 0;
};

// Ground set uses tol_g = 1e-9 * max(1, |lambda_min|): diagonal energies are
// exact sums, so ties are exact up to float noise.
inline SpectrumSummary spectrum_summary(const std::vector<double>& energies) {
    if (energies.empty()) throw std::invalid_argument("spectrum_summary: empty energies");
    SpectrumSummary s;
    s.lambda_min = energies[0];
    s.lambda_max = energies[0];
    for (double e : energies) {
        if (e < s.lambda_min) s.lambda_min = e;
        if (e > s.lambda_max) s.lambda_max = e;
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(s.lambda_min));
    for (std::uint64_t z = 0; z < energies.size(); ++z)
        if (energies[z] <= s.lambda_min + tol) s.ground_indices.push_back(z);
    s.degeneracy = static_cast<int>(s.ground_indices.size());
    return s;
}

// Diagonal problem Hamiltonian over computational basis strings z; bit i of
// the index encodes spin s_i = +1 (bit 0) or -1 (bit 1).
struct DiagonalHamiltonian {
    int n = 0;
    std::vector<double> energies;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::vector<std::uint64_t> ground_indices;
    int degeneracy = 0;

    static DiagonalHamiltonian from_energies(int n, std::vector<double> energies) {
        DiagonalHamiltonian h;
        h.n = n;
        h.energies = std::move(energies);
        if (h.energies.size() != (std::uint64_t{1} << n))
            throw std::invalid_argument("DiagonalHamiltonian: energies must have 2^n entries");
        SpectrumSummary s = spectrum_summary(h.energies);
        h.lambda_min = s.lambda_min;
        h.lambda_max = s.lambda_max;
        h.ground_indices = std::move(s.ground_indices);
        h.degeneracy = s.degeneracy;
        return h;
    }
};

// Sherrington-Kirkpatrick instance: K_ij ~ N(0,1) i.i.d. for i < j, stored
// packed in lexicographic (i, j) order. Regeneration from the seed is
// bit-identical (xoshiro256** + two-word Box-Muller draws).
struct SkInstance {
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<double> couplings;  // packed upper triangle, i < j lexicographic

    static void validate_n(int n) {
        if (n < 2 || n > 20) throw std::invalid_argument("SkInstance: require 2 <= n <= 20");
    }

    static std::size_t pair_count(int n) {
        return static_cast<std::size_t>(n) * (n - 1) / 2;
    }

    static SkInstance sample(int n, std::uint64_t seed) {
        validate_n(n);
        SkInstance inst;
        inst.n = n;
        inst.seed = seed;
        inst.couplings.reserve(pair_count(n));
        rng::Xoshiro256ss gen(seed);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) inst.couplings.push_back(gen.normal());
        return inst;
    }

    static SkInstance from_couplings(int n, std::vector<double> packed, std::uint64_t seed = 0) {
        validate_n(n);
        if (packed.size() != pair_count(n))
            throw std::invalid_argument("SkInstance: coupling count mismatch");
        SkInstance inst;
        inst.n = n;
        inst.seed = seed;
        inst.couplings = std::move(packed);
        return inst;
    }

    double coupling(int i, int j) const {
        if (i > j) std::swap(i, j);
        // offset of (i, j) in lexicographic i < j order
        const std::size_t off =
            static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
            static_cast<std::size_t>(j - i - 1);
        return couplings[off];
    }

    // energies[z] = (1/sqrt(n)) sum_{i<j} K_ij s_i s_j
    std::vector<double> energies() const {
        const std::uint64_t dim = std::uint64_t{1} << n;
        std::vector<double> e(dim, 0.0);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j, ++idx) {
                const double k = scale * couplings[idx];
                for (std::uint64_t z = 0; z < dim; ++z) {
                    const bool anti = (((z >> i) ^ (z >> j)) & 1ULL) != 0;
                    e[z] += anti ? -k : k;
                }
            }
        }
        return e;
    }
};

inline DiagonalHamiltonian sk_hamiltonian(const SkInstance& inst) {
    return DiagonalHamiltonian::from_energies(inst.n, inst.energies());
}

inline DiagonalHamiltonian sk_hamiltonian(int n, std::uint64_t seed) {
    return sk_hamiltonian(SkInstance::sample(n, seed));
}

// State-preparation problem: energy -1 on the all-zeros and all-ones strings,
// 0 elsewhere. Minimizing it maximizes the overlap with the symmetrized
// basis-string (GHZ) state.
inline DiagonalHamiltonian ghz_prep_hamiltonian(int n) {
    if (n < 2) throw std::invalid_argument("ghz_prep_hamiltonian: require n >= 2");
    const std::uint64_t dim = std::uint64_t{1} << n;
    std::vector<double> e(dim, 0.0);
    e[0] = -1.0;
    e[dim - 1] = -1.0;
    return DiagonalHamiltonian::from_energies(n, std::move(e));
}

}  // namespace ionqaoa::problems
