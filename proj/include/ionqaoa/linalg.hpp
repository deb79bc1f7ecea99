#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ionqaoa/errors.hpp"

namespace ionqaoa::linalg {

using Vec = std::vector<double>;

// Dense row-major matrix sized for ion chains and parameter blocks
// (dimensions of a few dozen at most). Not a general linear algebra layer.
class Mat {
  public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return a_.empty(); }

    Vec& data() { return a_; }
    const Vec& data() const { return a_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    bool is_symmetric(double tol = 0.0) const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    Vec a_;
};

inline double dot(const Vec& a, const Vec& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

struct EigenResult {
    Vec values;   // sorted descending
    Mat vectors;  // column m is the eigenvector of values[m]
};

// Cyclic Jacobi rotations for real symmetric matrices. Chosen over faster
// tridiagonal methods for bit-reproducibility at chain-sized problems;
// stops when the off-diagonal Frobenius norm drops below 1e-13 relative
// to the matrix scale.
inline EigenResult eigh_jacobi(Mat a, double tol = 1e-13) {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n) throw std::invalid_argument("eigh_jacobi: matrix must be square");
    if (!a.is_symmetric(1e-12 * std::max(1.0, a.max_abs())))
        throw std::invalid_argument("eigh_jacobi: matrix must be symmetric");

    Mat v = Mat::identity(n);
    const double scale = std::max(1.0, a.max_abs());
    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() > tol * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenResult res;
    res.values.resize(n);
    res.vectors = Mat(n, n);
    for (std::size_t m = 0; m < n; ++m) {
        res.values[m] = a(order[m], order[m]);
        for (std::size_t i = 0; i < n; ++i) res.vectors(i, m) = v(i, order[m]);
    }
    return res;
}

// Solves a*x = b for symmetric positive definite a (in-place Cholesky).
inline Vec cholesky_solve(Mat a, Vec b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw std::invalid_argument("cholesky_solve: dimension mismatch");
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (d <= 0.0) throw NumericalError("cholesky_solve: matrix not positive definite");
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / ljj;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {  // forward
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * b[k];
        b[i] = s / a(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {  // backward
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a(k, ii) * b[k];
        b[ii] = s / a(ii, ii);
    }
    return b;
}

// Eigenvalues (descending) of a Hermitian matrix via its real symmetric
// embedding [[Re, -Im], [Im, Re]], whose spectrum is the Hermitian spectrum
// doubled. Sized for Gram matrices of a few dozen states.
inline Vec hermitian_eigenvalues(const std::vector<std::complex<double>>& g, std::size_t n) {
    if (g.size() != n * n) throw std::invalid_argument("hermitian_eigenvalues: bad size");
    Mat m(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double re = 0.5 * (g[i * n + j].real() + g[j * n + i].real());
            const double im = 0.5 * (g[i * n + j].imag() - g[j * n + i].imag());
            m(i, j) = re;
            m(n + i, n + j) = re;
            m(i, n + j) = -im;
            m(n + i, j) = im;
        }
    }
    EigenResult e = eigh_jacobi(std::move(m));
    Vec out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = e.values[2 * k];
    return out;
}

}  // namespace ionqaoa::linalg
