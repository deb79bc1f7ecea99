#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ionqaoa/errors.hpp"
#include "ionqaoa/ionchain.hpp"
#include "ionqaoa/linalg.hpp"
#include "ionqaoa/problems.hpp"

namespace ionqaoa::sim {

using linalg::Mat;
using linalg::Vec;
using cdouble = std::complex<double>;

enum class AnsatzVariant { IonNative, StandardQaoa };

// Diagonal ZZ energies of a coupling matrix: E_z = sum_{i<j} J_ij s_i s_j.
inline Vec zz_diagonal(const Mat& j) {
    const int n = static_cast<int>(j.rows());
    if (j.cols() != j.rows()) throw std::invalid_argument("zz_diagonal: matrix must be square");
    const std::uint64_t dim = std::uint64_t{1} << n;
    Vec diag(dim, 0.0);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double v = j(a, b);
            if (v == 0.0) continue;
            for (std::uint64_t z = 0; z < dim; ++z) {
                const bool anti = (((z >> a) ^ (z >> b)) & 1ULL) != 0;
                diag[z] += anti ? -v : v;
            }
        }
    }
    return diag;
}

// A circuit family: the ion-native ansatz applies the hardware XX evolution
// conjugated by Hadamards, which reduces to diagonal ZZ phases; standard
// QAOA applies phases of the problem energies directly. Either way each
// layer is one diagonal-phase pass plus n single-qubit X rotations, so the
// phase table is precomputed once per spec and reused across evaluations.
struct AnsatzSpec {
    AnsatzVariant variant = AnsatzVariant::IonNative;
    int n = 0;
    Mat j_matrix;    // ion-native only
    Vec phase_diag;  // 2^n diagonal generator values

    static AnsatzSpec ion_native(const Mat& j) {
        if (j.rows() != j.cols()) throw std::invalid_argument("AnsatzSpec: J must be square");
        if (!j.is_symmetric(1e-12 * std::max(1.0, j.max_abs())))
            throw std::invalid_argument("AnsatzSpec: J must be symmetric");
        AnsatzSpec s;
        s.variant = AnsatzVariant::IonNative;
        s.n = static_cast<int>(j.rows());
        s.j_matrix = j;
        s.phase_diag = zz_diagonal(j);
        return s;
    }

    static AnsatzSpec ion_native(const ionchain::CouplingBase& base, const Vec& a,
                                 double alpha = 1.0) {
        Vec scaled(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) scaled[i] = alpha * a[i];
        return ion_native(ionchain::coupling_matrix(base, scaled));
    }

    static AnsatzSpec standard_qaoa(const problems::DiagonalHamiltonian& h) {
        AnsatzSpec s;
        s.variant = AnsatzVariant::StandardQaoa;
        s.n = h.n;
        s.phase_diag = h.energies;
        return s;
    }
};

// Variational angles; the sampling convention is beta in [0, pi/2) and gamma
// in [0, 2pi), but the generators are defined for any angle (finite
// difference probes may step slightly outside the box).
struct LayerParams {
    Vec betas;
    Vec gammas;

    LayerParams() = default;
    LayerParams(Vec b, Vec g) : betas(std::move(b)), gammas(std::move(g)) {
        if (betas.size() != gammas.size())
            throw std::invalid_argument("LayerParams: betas and gammas must have equal length");
    }

    std::size_t depth() const { return betas.size(); }

    static LayerParams from_flat(const Vec& flat) {
        if (flat.size() % 2 != 0)
            throw std::invalid_argument("LayerParams: flat vector must have even length");
        const std::size_t p = flat.size() / 2;
        Vec b(flat.begin(), flat.begin() + p);
        Vec g(flat.begin() + p, flat.end());
        return LayerParams(std::move(b), std::move(g));
    }

    Vec to_flat() const {
        Vec flat(betas);
        flat.insert(flat.end(), gammas.begin(), gammas.end());
        return flat;
    }
};

struct StateVector {
    int n = 0;
    std::vector<cdouble> amp;

    std::uint64_t dim() const { return std::uint64_t{1} << n; }

    double norm() const {
        double s = 0.0;
        for (const cdouble& a : amp) s += std::norm(a);
        return std::sqrt(s);
    }
};

namespace detail {

inline void apply_phase_layer(StateVector& psi, const Vec& diag, double gamma) {
    const std::uint64_t dim = psi.dim();
    for (std::uint64_t z = 0; z < dim; ++z) psi.amp[z] *= std::polar(1.0, -gamma * diag[z]);
}

// exp(-i beta X) on every qubit
inline void apply_mixer_layer(StateVector& psi, double beta) {
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    const cdouble mis(0.0, -s);
    const std::uint64_t dim = psi.dim();
    for (int q = 0; q < psi.n; ++q) {
        const std::uint64_t step = std::uint64_t{1} << q;
        for (std::uint64_t base = 0; base < dim; base += 2 * step) {
            for (std::uint64_t off = 0; off < step; ++off) {
                const std::uint64_t i0 = base + off;
                const std::uint64_t i1 = i0 + step;
                const cdouble a0 = psi.amp[i0];
                const cdouble a1 = psi.amp[i1];
                psi.amp[i0] = c * a0 + mis * a1;
                psi.amp[i1] = c * a1 + mis * a0;
            }
        }
    }
}

inline StateVector qaoa_like_state(const AnsatzSpec& spec, const LayerParams& params) {
    if (params.betas.size() != params.gammas.size())
        throw std::invalid_argument("ansatz state: betas/gammas length mismatch");
    StateVector psi;
    psi.n = spec.n;
    const std::uint64_t dim = psi.dim();
    if (spec.phase_diag.size() != dim)
        throw std::invalid_argument("ansatz state: phase table dimension mismatch");
    psi.amp.assign(dim, cdouble(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    for (std::size_t k = 0; k < params.depth(); ++k) {
        apply_phase_layer(psi, spec.phase_diag, params.gammas[k]);
        apply_mixer_layer(psi, params.betas[k]);
    }
    return psi;
}

}  // namespace detail

inline StateVector ion_ansatz_state(const AnsatzSpec& spec, const LayerParams& params) {
    if (spec.variant != AnsatzVariant::IonNative)
        throw std::invalid_argument("ion_ansatz_state: spec is not ion-native");
    return detail::qaoa_like_state(spec, params);
}

inline StateVector standard_qaoa_state(const AnsatzSpec& spec, const LayerParams& params) {
    if (spec.variant != AnsatzVariant::StandardQaoa)
        throw std::invalid_argument("standard_qaoa_state: spec is not standard QAOA");
    return detail::qaoa_like_state(spec, params);
}

inline StateVector ansatz_state(const AnsatzSpec& spec, const LayerParams& params) {
    return detail::qaoa_like_state(spec, params);
}

inline double energy(const StateVector& psi, const problems::DiagonalHamiltonian& h) {
    if (psi.n != h.n) throw std::invalid_argument("energy: dimension mismatch");
    double e = 0.0;
    for (std::uint64_t z = 0; z < psi.dim(); ++z) e += std::norm(psi.amp[z]) * h.energies[z];
    return e;
}

inline double ground_overlap(const StateVector& psi, const problems::DiagonalHamiltonian& h) {
    if (psi.n != h.n) throw std::invalid_argument("ground_overlap: dimension mismatch");
    double g = 0.0;
    for (std::uint64_t z : h.ground_indices) g += std::norm(psi.amp[z]);
    return g;
}

inline double approx_ratio(double e, double lambda_min, double lambda_max) {
    if (!(lambda_max > lambda_min))
        throw NumericalError("approx_ratio: degenerate spectrum, lambda_max must exceed lambda_min");
    return (lambda_max - e) / (lambda_max - lambda_min);
}

}  // namespace ionqaoa::sim
