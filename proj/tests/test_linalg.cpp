#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "ionqaoa/linalg.hpp"

using namespace ionqaoa;
using linalg::Mat;
using linalg::Vec;

TEST_CASE("jacobi eigensolver on known matrices") {
    SECTION("2x2 with analytic spectrum") {
        Mat a(2, 2);
        a(0, 0) = 3.0;
        a(1, 1) = 3.0;
        a(0, 1) = a(1, 0) = 1.0;
        auto eig = linalg::eigh_jacobi(a);
        REQUIRE(eig.values[0] == Catch::Approx(4.0).margin(1e-12));
        REQUIRE(eig.values[1] == Catch::Approx(2.0).margin(1e-12));
    }

    SECTION("diagonal matrix is returned sorted descending") {
        Mat a(3, 3);
        a(0, 0) = -1.0;
        a(1, 1) = 5.0;
        a(2, 2) = 2.0;
        auto eig = linalg::eigh_jacobi(a);
        REQUIRE(eig.values[0] == Catch::Approx(5.0));
        REQUIRE(eig.values[1] == Catch::Approx(2.0));
        REQUIRE(eig.values[2] == Catch::Approx(-1.0));
    }

    SECTION("eigenvectors orthonormal and reconstruct the matrix") {
        // deterministic pseudo-random symmetric matrix
        const std::size_t n = 6;
        Mat a(n, n);
        double v = 0.1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                v = std::fmod(v * 7.7 + 0.31, 1.0) - 0.5;
                a(i, j) = a(j, i) = v;
            }
        auto eig = linalg::eigh_jacobi(a);
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += eig.vectors(i, p) * eig.vectors(i, q);
                REQUIRE(dot == Catch::Approx(p == q ? 1.0 : 0.0).margin(1e-12));
            }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double rec = 0.0;
                for (std::size_t m = 0; m < n; ++m)
                    rec += eig.vectors(i, m) * eig.values[m] * eig.vectors(j, m);
                REQUIRE(rec == Catch::Approx(a(i, j)).margin(1e-11));
            }
    }
}

TEST_CASE("cholesky solve recovers known solutions") {
    Mat a(3, 3);
    a(0, 0) = 4.0; a(0, 1) = 1.0; a(0, 2) = 0.5;
    a(1, 0) = 1.0; a(1, 1) = 3.0; a(1, 2) = 0.2;
    a(2, 0) = 0.5; a(2, 1) = 0.2; a(2, 2) = 2.0;
    const Vec x_true{1.0, -2.0, 0.5};
    Vec b(3, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i] += a(i, j) * x_true[j];
    const Vec x = linalg::cholesky_solve(a, b);
    for (int i = 0; i < 3; ++i) REQUIRE(x[i] == Catch::Approx(x_true[i]).margin(1e-12));

    Mat bad(2, 2);
    bad(0, 0) = 1.0;
    bad(1, 1) = -1.0;
    REQUIRE_THROWS_AS(linalg::cholesky_solve(bad, Vec{1.0, 1.0}), NumericalError);
}

TEST_CASE("hermitian eigenvalues via real embedding") {
    // [[2, i], [-i, 2]] has eigenvalues 3 and 1
    std::vector<std::complex<double>> g{
        {2.0, 0.0}, {0.0, 1.0},
        {0.0, -1.0}, {2.0, 0.0}};
    const Vec eig = linalg::hermitian_eigenvalues(g, 2);
    REQUIRE(eig[0] == Catch::Approx(3.0).margin(1e-12));
    REQUIRE(eig[1] == Catch::Approx(1.0).margin(1e-12));
}
