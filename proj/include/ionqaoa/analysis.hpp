#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ionqaoa/heuristic.hpp"
#include "ionqaoa/linalg.hpp"
#include "ionqaoa/rng.hpp"
#include "ionqaoa/simulator.hpp"

namespace ionqaoa::analysis {

using linalg::Vec;

struct FidelityHistogram {
    int bins = 0;
    std::vector<std::uint64_t> counts;
    std::uint64_t samples = 0;
};

struct SingularProfile {
    Vec sigmas;  // descending
    int k = 0;
    int p = 0;
    int n = 0;
    std::uint64_t seed = 0;
};

struct ExpressibilityResult {
    double d_kl = 0.0;
    FidelityHistogram histogram;
    int hilbert_dim = 0;  // symmetry-reduced dimension used for the Haar density
};

// Exact bin masses of the Haar fidelity density rho(x) = (N-1)(1-x)^(N-2)
// on B equal-width bins: the integral over [a, b] is (1-a)^(N-1) - (1-b)^(N-1).
inline Vec haar_bin_masses(int bins, int hilbert_dim) {
    if (bins < 1) throw std::invalid_argument("haar_bin_masses: bins must be >= 1");
    if (hilbert_dim < 2) throw std::invalid_argument("haar_bin_masses: dimension must be >= 2");
    Vec q(bins);
    const double nm1 = hilbert_dim - 1;
    for (int b = 0; b < bins; ++b) {
        const double a = static_cast<double>(b) / bins;
        const double c = static_cast<double>(b + 1) / bins;
        q[b] = std::pow(1.0 - a, nm1) - std::pow(1.0 - c, nm1);
    }
    return q;
}

namespace detail {

inline sim::LayerParams sample_params(rng::Xoshiro256ss& gen, int p) {
    Vec betas(p), gammas(p);
    for (int k = 0; k < p; ++k)
        betas[k] = gen.uniform(heuristic::beta_range.lo, heuristic::beta_range.hi);
    for (int k = 0; k < p; ++k)
        gammas[k] = gen.uniform(heuristic::gamma_range.lo, heuristic::gamma_range.hi);
    return sim::LayerParams(std::move(betas), std::move(gammas));
}

inline double fidelity(const sim::StateVector& a, const sim::StateVector& b) {
    std::complex<double> ip(0.0, 0.0);
    for (std::uint64_t z = 0; z < a.dim(); ++z) ip += std::conj(a.amp[z]) * b.amp[z];
    return std::norm(ip);
}

}  // namespace detail

// Expressibility descriptor: KL divergence between the sampled fidelity
// distribution of the ansatz and the Haar distribution on the Z2-symmetric
// sector (dimension 2^(n-1)). Empirical bins are compared against exact
// bin-integrated Haar masses; empty bins contribute zero. Lower values mean
// a more expressible circuit.
inline ExpressibilityResult expressibility_kl(const sim::AnsatzSpec& spec, int p, int samples,
                                              int bins, std::uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("expressibility_kl: need samples >= 1000");
    if (bins < 10) throw std::invalid_argument("expressibility_kl: need bins >= 10");
    if (p < 1) throw std::invalid_argument("expressibility_kl: need p >= 1");

    FidelityHistogram hist;
    hist.bins = bins;
    hist.counts.assign(bins, 0);
    hist.samples = static_cast<std::uint64_t>(samples);

    for (int s = 0; s < samples; ++s) {
        // per-sample derived stream, so parallel evaluation stays reproducible
        rng::Xoshiro256ss gen(rng::derive_stream(seed, {0xF1DEULL, static_cast<std::uint64_t>(s)}));
        const sim::StateVector psi1 = sim::ansatz_state(spec, detail::sample_params(gen, p));
        const sim::StateVector psi2 = sim::ansatz_state(spec, detail::sample_params(gen, p));
        const double f = detail::fidelity(psi1, psi2);
        int b = static_cast<int>(f * bins);
        b = std::min(std::max(b, 0), bins - 1);
        ++hist.counts[b];
    }

    const int hilbert_dim = 1 << (spec.n - 1);
    const Vec q = haar_bin_masses(bins, hilbert_dim);
    double d_kl = 0.0;
    for (int b = 0; b < bins; ++b) {
        if (hist.counts[b] == 0) continue;  // 0 * log 0 = 0
        const double pb = static_cast<double>(hist.counts[b]) / static_cast<double>(samples);
        d_kl += pb * std::log(pb / q[b]);
    }
    return {d_kl, std::move(hist), hilbert_dim};
}

// Singular values of the K x 2^n matrix whose rows are ansatz states at
// uniform-random parameters. Computed from the K x K Gram matrix (K is tiny
// compared to 2^n), sigma_k = sqrt(eig_k), descending. A fast decay signals
// that the ansatz is locked to a low-dimensional subspace.
inline SingularProfile singular_profile(const sim::AnsatzSpec& spec, int p, int k_states,
                                        std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("singular_profile: need p >= 1");
    if (k_states < 1) throw std::invalid_argument("singular_profile: need k_states >= 1");
    if (static_cast<std::uint64_t>(k_states) > (std::uint64_t{1} << spec.n))
        throw std::invalid_argument("singular_profile: k_states must not exceed 2^n");

    std::vector<sim::StateVector> states;
    states.reserve(k_states);
    for (int k = 0; k < k_states; ++k) {
        rng::Xoshiro256ss gen(rng::derive_stream(seed, {0x51DEULL, static_cast<std::uint64_t>(k)}));
        states.push_back(sim::ansatz_state(spec, detail::sample_params(gen, p)));
    }

    const std::size_t kk = static_cast<std::size_t>(k_states);
    std::vector<std::complex<double>> gram(kk * kk);
    for (std::size_t i = 0; i < kk; ++i) {
        for (std::size_t j = 0; j < kk; ++j) {
            std::complex<double> ip(0.0, 0.0);
            for (std::uint64_t z = 0; z < states[i].dim(); ++z)
                ip += std::conj(states[i].amp[z]) * states[j].amp[z];
            gram[i * kk + j] = ip;
        }
    }

    Vec eig = linalg::hermitian_eigenvalues(gram, kk);
    SingularProfile prof;
    prof.k = k_states;
    prof.p = p;
    prof.n = spec.n;
    prof.seed = seed;
    prof.sigmas.resize(kk);
    // The Gram route squares the conditioning: eigenvalues below the noise
    // floor of the largest one are numerically indistinguishable from exact
    // rank deficiency and are reported as zero.
    const double floor = eig.empty() ? 0.0 : std::max(0.0, eig[0]) * 1e-13;
    for (std::size_t i = 0; i < kk; ++i)
        prof.sigmas[i] = eig[i] > floor ? std::sqrt(eig[i]) : 0.0;
    return prof;
}

// Reference asymmetric configuration: all couplings at full strength except
// the first ion, detuned to -0.3.
inline Vec asymmetric_config(int n, double detuned = -0.3) {
    if (n < 1) throw std::invalid_argument("asymmetric_config: n must be >= 1");
    Vec a(n, 1.0);
    a[0] = detuned;
    return a;
}

}  // namespace ionqaoa::analysis
