#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ionqaoa/constants.hpp"
#include "ionqaoa/errors.hpp"
#include "ionqaoa/linalg.hpp"

namespace ionqaoa::ionchain {

using linalg::Mat;
using linalg::Vec;

// Trap and laser parameters. Frequencies are ordinary frequencies in Hz
// (omega/2pi); angular frequencies in rad/s appear only in computed
// quantities and are named *_rad.
struct TrapConfig {
    int n = 6;
    double mass_amu = 39.96;          // 40Ca+
    double omega_x_hz = 1.0e6;        // radial COM frequency
    double omega_z_hz = 0.15e6;       // axial COM frequency
    double wavelength_m = 729.15e-9;  // laser wavelength
    double detuning_offset_hz = 1.0e3;  // offset of the beatnote above omega_x
    double omega_max_hz = 30.0e3;     // maximal Rabi frequency

    double radial_ratio() const { return omega_x_hz / omega_z_hz; }
    // mu = omega_x + 2*pi*offset, placed just above the radial COM mode
    double laser_detuning_rad() const {
        return constants::two_pi * (omega_x_hz + detuning_offset_hz);
    }

    void validate() const {
        if (n < 1) throw std::invalid_argument("TrapConfig: n must be >= 1");
        if (!(omega_x_hz > omega_z_hz && omega_z_hz > 0.0))
            throw std::invalid_argument("TrapConfig: require omega_x > omega_z > 0");
        if (!(mass_amu > 0.0)) throw std::invalid_argument("TrapConfig: mass must be positive");
        if (!(wavelength_m > 0.0))
            throw std::invalid_argument("TrapConfig: wavelength must be positive");
        if (!(detuning_offset_hz > 0.0))
            throw std::invalid_argument("TrapConfig: detuning offset must be positive");
        if (!(omega_max_hz > 0.0))
            throw std::invalid_argument("TrapConfig: omega_max must be positive");
    }
};

// Radial phonon decomposition of a linear chain.
struct PhononData {
    Vec positions;    // dimensionless equilibrium coordinates, ascending
    Vec frequencies;  // radial mode angular frequencies in rad/s, descending (mode 0 = COM)
    Mat eigenvectors; // column m is the orthonormal mode vector b^m
    Mat lamb_dicke;   // eta(i, m), dimensionless
};

// Phonon-determined part of the Ising couplings, fixed per trap.
struct CouplingBase {
    int n = 0;
    double omega_max_hz = 0.0;
    Mat c;  // symmetric, zero diagonal, units 1/(rad/s)
};

namespace detail {

// Gradient of V(u) = sum u_i^2 + sum_{i != j} 1/|u_i - u_j| (pairs counted
// twice, matching the dimensionless chain potential).
inline Vec chain_gradient(const Vec& u) {
    const std::size_t n = u.size();
    Vec g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = 2.0 * u[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = u[i] - u[j];
            g[i] -= 2.0 * (d > 0.0 ? 1.0 : -1.0) / (d * d);
        }
    }
    return g;
}

inline Mat chain_hessian(const Vec& u) {
    const std::size_t n = u.size();
    Mat h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 2.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = std::abs(u[i] - u[j]);
            const double w = 4.0 / (d * d * d);
            h(i, j) = -w;
            diag += w;
        }
        h(i, i) = diag;
    }
    return h;
}

}  // namespace detail

// Dimensionless equilibrium positions of n ions in a linear trap, found by
// damped Newton iteration from the empirical spacing guess
// u_i = (i - (n+1)/2) * 2 * 2.018 / n^0.559. The chain potential is strictly
// convex around the linear configuration, so Newton converges in a handful
// of steps for n <= 20.
inline Vec equilibrium_positions(int n) {
    if (n < 1) throw std::invalid_argument("equilibrium_positions: n must be >= 1");
    if (n == 1) return {0.0};

    const double spacing = 2.0 * 2.018 / std::pow(static_cast<double>(n), 0.559);
    Vec u(n);
    for (int i = 0; i < n; ++i) u[i] = (i + 1 - 0.5 * (n + 1)) * spacing;

    double gnorm = linalg::norm2(detail::chain_gradient(u));
    for (int iter = 0; iter < 100 && gnorm > 1e-12; ++iter) {
        Vec g = detail::chain_gradient(u);
        for (double& v : g) v = -v;
        Vec step = linalg::cholesky_solve(detail::chain_hessian(u), std::move(g));

        double t = 1.0;
        Vec trial(u.size());
        for (int back = 0; back < 40; ++back) {
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + t * step[i];
            const double tnorm = linalg::norm2(detail::chain_gradient(trial));
            if (tnorm < gnorm) {
                u = trial;
                gnorm = tnorm;
                break;
            }
            t *= 0.5;
        }
    }
    if (gnorm > 1e-10)
        throw ConvergenceError(
            "equilibrium_positions: Newton did not converge, |grad| = " + std::to_string(gnorm),
            gnorm);
    std::sort(u.begin(), u.end());
    return u;
}

// Dimensionless Hessian of the radial ion motion: diagonal r_x^2 minus the
// Coulomb sum, off-diagonal +1/|u_i - u_j|^3.
inline Mat mode_matrix(const Vec& u, double r_x) {
    const std::size_t n = u.size();
    if (n == 0) throw std::invalid_argument("mode_matrix: empty positions");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(u[i + 1] - u[i] > 1e-9))
            throw std::invalid_argument("mode_matrix: positions must be strictly increasing");

    Mat a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = r_x * r_x;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = std::abs(u[i] - u[j]);
            const double w = 1.0 / (d * d * d);
            a(i, j) = w;
            diag -= w;
        }
        a(i, i) = diag;
    }
    return a;
}

struct ModeDecomposition {
    Vec frequencies;  // rad/s, descending; frequencies[0] is the COM mode
    Mat eigenvectors; // columns, orthonormal, sign-fixed
};

// Radial normal modes: omega_m = sqrt(lambda_m) * omega_z with lambda_m the
// eigenvalues of the mode matrix. Eigenvalues are kept descending so mode 0
// is always the COM mode at omega_x.
inline ModeDecomposition radial_modes(const Mat& matrix, double omega_z_rad) {
    if (!matrix.is_symmetric(1e-12 * std::max(1.0, matrix.max_abs())))
        throw std::invalid_argument("radial_modes: matrix must be symmetric");
    linalg::EigenResult eig = linalg::eigh_jacobi(matrix);

    const std::size_t n = eig.values.size();
    ModeDecomposition out;
    out.frequencies.resize(n);
    out.eigenvectors = eig.vectors;
    for (std::size_t m = 0; m < n; ++m) {
        if (eig.values[m] <= 0.0)
            throw UnstableModeError("radial_modes: unstable chain, mode " + std::to_string(m) +
                                        " has eigenvalue " + std::to_string(eig.values[m]),
                                    m, eig.values[m]);
        out.frequencies[m] = std::sqrt(eig.values[m]) * omega_z_rad;
    }

    // Deterministic sign convention: the largest-magnitude component of each
    // mode vector is positive. C_ij is invariant under these flips anyway.
    for (std::size_t m = 0; m < n; ++m) {
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(out.eigenvectors(i, m)) > std::abs(out.eigenvectors(imax, m))) imax = i;
        if (out.eigenvectors(imax, m) < 0.0)
            for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, m) = -out.eigenvectors(i, m);
    }
    return out;
}

// eta(i, m) = (2*pi/lambda) * sqrt(hbar / (2*M*omega_m)) * b_i^m
inline Mat lamb_dicke(const ModeDecomposition& modes, double wavelength_m, double mass_amu) {
    const std::size_t n = modes.frequencies.size();
    if (modes.eigenvectors.rows() != n || modes.eigenvectors.cols() != n)
        throw std::invalid_argument("lamb_dicke: inconsistent mode data");
    for (double w : modes.frequencies)
        if (!(w > 0.0)) throw std::invalid_argument("lamb_dicke: mode frequencies must be positive");

    const double delta_k = constants::two_pi / wavelength_m;
    const double mass_kg = mass_amu * constants::atomic_mass_kg;
    Mat eta(n, n);
    for (std::size_t m = 0; m < n; ++m) {
        const double zpt = std::sqrt(constants::hbar / (2.0 * mass_kg * modes.frequencies[m]));
        for (std::size_t i = 0; i < n; ++i) eta(i, m) = delta_k * zpt * modes.eigenvectors(i, m);
    }
    return eta;
}

inline PhononData compute_phonons(const TrapConfig& trap) {
    trap.validate();
    PhononData ph;
    ph.positions = equilibrium_positions(trap.n);
    const Mat a = mode_matrix(ph.positions, trap.radial_ratio());
    ModeDecomposition modes = radial_modes(a, constants::two_pi * trap.omega_z_hz);
    ph.lamb_dicke = lamb_dicke(modes, trap.wavelength_m, trap.mass_amu);
    ph.frequencies = std::move(modes.frequencies);
    ph.eigenvectors = std::move(modes.eigenvectors);
    return ph;
}

// C_ij = sum_m eta_i^m eta_j^m omega_m / (mu^2 - omega_m^2), i < j,
// symmetrized, zero diagonal by convention.
inline CouplingBase coupling_base(const PhononData& phonon, double mu_rad, double omega_max_hz) {
    const std::size_t n = phonon.frequencies.size();
    for (std::size_t m = 0; m < n; ++m) {
        const double w = phonon.frequencies[m];
        if (std::abs(mu_rad - w) <= 1e-6 * w)
            throw ResonanceError("coupling_base: laser detuning resonant with mode " +
                                     std::to_string(m),
                                 m);
    }

    CouplingBase base;
    base.n = static_cast<int>(n);
    base.omega_max_hz = omega_max_hz;
    base.c = Mat(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double cij = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                const double w = phonon.frequencies[m];
                cij += phonon.lamb_dicke(i, m) * phonon.lamb_dicke(j, m) * w /
                       (mu_rad * mu_rad - w * w);
            }
            base.c(i, j) = cij;
            base.c(j, i) = cij;
        }
    }
    return base;
}

inline CouplingBase coupling_base_from_trap(const TrapConfig& trap) {
    return coupling_base(compute_phonons(trap), trap.laser_detuning_rad(), trap.omega_max_hz);
}

// J_ij = A_i A_j Omega_max^2 C_ij in rad/ms, so variational gamma angles in
// [0, 2pi) correspond to millisecond-scale propagation times. The physical
// coupling in 2*pi*kHz is J/(2*pi), about 1 for the reference trap at A = 1.
inline Mat coupling_matrix(const CouplingBase& base, const Vec& a) {
    const std::size_t n = static_cast<std::size_t>(base.n);
    if (a.size() != n) throw std::invalid_argument("coupling_matrix: hyperparameter size mismatch");
    for (double v : a)
        if (!(std::abs(v) <= 1.0))
            throw std::invalid_argument("coupling_matrix: hyperparameters must lie in [-1, 1]");

    const double omega_max_rad = constants::two_pi * base.omega_max_hz;
    const double scale = omega_max_rad * omega_max_rad / constants::rad_per_sec_per_rad_per_ms;
    Mat j(n, n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) {
            const double v = a[p] * a[q] * scale * base.c(p, q);
            j(p, q) = v;
            j(q, p) = v;
        }
    return j;
}

}  // namespace ionqaoa::ionchain
