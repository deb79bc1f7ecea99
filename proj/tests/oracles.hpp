#pragma once

// Test-only reference implementations, deliberately naive: dense
// matrix-exponential circuit construction, brute-force scans and summations.
// These never touch the fast paths they are used to check.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "ionqaoa/linalg.hpp"

namespace oracle {

using cdouble = std::complex<double>;
using cvec = std::vector<cdouble>;
using cmat = std::vector<cvec>;  // [row][col]
using ionqaoa::linalg::Mat;
using ionqaoa::linalg::Vec;

inline cmat zeros(std::size_t dim) { return cmat(dim, cvec(dim, cdouble(0.0, 0.0))); }

// sum_{i<j} J_ij X_i X_j as a dense matrix
inline Mat dense_xx_hamiltonian(const Mat& j) {
    const int n = static_cast<int>(j.rows());
    const std::size_t dim = std::size_t{1} << n;
    Mat h(dim, dim);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (std::size_t c = 0; c < dim; ++c)
                h(c ^ (std::size_t{1} << a) ^ (std::size_t{1} << b), c) += j(a, b);
    return h;
}

// sum_i X_i as a dense matrix
inline Mat dense_mixer_hamiltonian(int n) {
    const std::size_t dim = std::size_t{1} << n;
    Mat h(dim, dim);
    for (int a = 0; a < n; ++a)
        for (std::size_t c = 0; c < dim; ++c) h(c ^ (std::size_t{1} << a), c) += 1.0;
    return h;
}

inline cmat hadamard_all(int n) {
    const std::size_t dim = std::size_t{1} << n;
    const double s = 1.0 / std::sqrt(static_cast<double>(dim));
    cmat h = zeros(dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            h[r][c] = (std::popcount(r & c) % 2 == 0) ? s : -s;
    return h;
}

// exp(-i theta H) for real symmetric H via eigendecomposition
inline cmat expm_real_symmetric(const Mat& h, double theta) {
    const std::size_t dim = h.rows();
    const auto eig = ionqaoa::linalg::eigh_jacobi(h);
    cmat u = zeros(dim);
    for (std::size_t m = 0; m < dim; ++m) {
        const cdouble phase = std::polar(1.0, -theta * eig.values[m]);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c)
                u[r][c] += eig.vectors(r, m) * phase * eig.vectors(c, m);
    }
    return u;
}

inline cvec matvec(const cmat& u, const cvec& v) {
    const std::size_t dim = v.size();
    cvec out(dim, cdouble(0.0, 0.0));
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) out[r] += u[r][c] * v[c];
    return out;
}

inline cvec plus_state(int n) {
    const std::size_t dim = std::size_t{1} << n;
    return cvec(dim, cdouble(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
}

// Dense construction of the ion-native ansatz: per layer, Hadamards around
// the XX evolution, then the mixer exponential.
inline cvec ion_ansatz_oracle(const Mat& j, const Vec& betas, const Vec& gammas) {
    const int n = static_cast<int>(j.rows());
    const Mat hxx = dense_xx_hamiltonian(j);
    const Mat hx = dense_mixer_hamiltonian(n);
    const cmat had = hadamard_all(n);
    cvec psi = plus_state(n);
    for (std::size_t k = 0; k < betas.size(); ++k) {
        psi = matvec(had, psi);
        psi = matvec(expm_real_symmetric(hxx, gammas[k]), psi);
        psi = matvec(had, psi);
        psi = matvec(expm_real_symmetric(hx, betas[k]), psi);
    }
    return psi;
}

// Dense construction of standard QAOA with the problem exponent.
inline cvec standard_qaoa_oracle(const Vec& energies, int n, const Vec& betas, const Vec& gammas) {
    const std::size_t dim = energies.size();
    const Mat hx = dense_mixer_hamiltonian(n);
    cvec psi = plus_state(n);
    for (std::size_t k = 0; k < betas.size(); ++k) {
        cmat up = zeros(dim);
        for (std::size_t z = 0; z < dim; ++z) up[z][z] = std::polar(1.0, -gammas[k] * energies[z]);
        psi = matvec(up, psi);
        psi = matvec(expm_real_symmetric(hx, betas[k]), psi);
    }
    return psi;
}

inline double state_diff_norm(const cvec& a, const std::vector<cdouble>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

// Richardson-extrapolated central difference, for checking the optimizer's
// plain central-difference gradients.
template <typename F>
double richardson_gradient(F&& f, Vec x, std::size_t i, double h) {
    auto central = [&](double step) {
        const double xi = x[i];
        x[i] = xi + step;
        const double fp = f(x);
        x[i] = xi - step;
        const double fm = f(x);
        x[i] = xi;
        return (fp - fm) / (2.0 * step);
    };
    const double d1 = central(h);
    const double d2 = central(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace oracle
