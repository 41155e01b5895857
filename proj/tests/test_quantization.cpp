#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "tqg/basis.hpp"
#include "tqg/errors.hpp"
#include "tqg/quantization.hpp"
#include "tqg/tqg_system.hpp"

using namespace tqg;
using Cd = std::complex<double>;

namespace {
const Cd I(0.0, 1.0);

MatrixField random_skew(int n, unsigned long long seed) {
    return project(random_band_limited_field(seed, n - 1),
                   MatrixHarmonicsBasis::build(n));
}
}  // namespace

TEST_CASE("su(2) generators: small spins and the Casimir identity") {
    CHECK_THROWS_AS(su2_generators(1), Error);

    // n = 2: spin-1/2, S_3 = diag(1/2, -1/2), ladder entry 1.
    auto x2 = su2_generators(2);
    const double hbar2 = quantization_hbar(2);
    CHECK(hbar2 == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(std::abs(x2[2](0, 0) - I * hbar2 * 0.5) < 1e-15);
    CHECK(std::abs(x2[2](1, 1) + I * hbar2 * 0.5) < 1e-15);
    // X_1 = i hbar (S_+ + S_-)/2 with S_+ = [[0,1],[0,0]].
    CHECK(std::abs(x2[0](0, 1) - I * hbar2 * 0.5) < 1e-15);
    CHECK(std::abs(x2[0](1, 0) - I * hbar2 * 0.5) < 1e-15);

    // n = 3: spin-1 ladder has superdiagonal (sqrt2, sqrt2).
    auto x3 = su2_generators(3);
    const double hbar3 = quantization_hbar(3);
    CHECK(std::abs(x3[0](0, 1) - I * hbar3 * 0.5 * std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(x3[0](1, 2) - I * hbar3 * 0.5 * std::sqrt(2.0)) < 1e-15);

    for (int n : {2, 3, 5, 16, 33}) {
        auto x = su2_generators(n);
        Eigen::MatrixXcd sum = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        sum += Eigen::MatrixXcd::Identity(n, n);
        CHECK(sum.norm() < 1e-10);
        for (const auto& xa : x) {
            CHECK((xa + xa.adjoint()).norm() < 1e-14);
        }
    }
}

TEST_CASE("basis: eigenvalues, T_00, T_10, orthonormality, conjugation") {
    SUBCASE("n=2 spectrum is {0, -2, -2, -2}") {
        const auto b = MatrixHarmonicsBasis::build(2);
        CHECK(b.eigenvalues(0)[0] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(b.eigenvalues(0)[1] == doctest::Approx(-2.0).epsilon(1e-14));
        CHECK(b.eigenvalues(1)[0] == doctest::Approx(-2.0).epsilon(1e-14));
    }

    SUBCASE("T_00 = I/sqrt(n)") {
        for (int n : {2, 7, 16}) {
            const auto b = MatrixHarmonicsBasis::build(n);
            const Eigen::MatrixXcd t00 = b.harmonic(0, 0);
            CHECK((t00 - Eigen::MatrixXcd::Identity(n, n) / std::sqrt(double(n)))
                      .norm() < 1e-13);
        }
    }

    SUBCASE("n=8: T_10 is S_3 normalized, eigenvalue -2") {
        const int n = 8;
        const auto b = MatrixHarmonicsBasis::build(n);
        Eigen::VectorXd s3(n);
        for (int j = 0; j < n; ++j) s3[j] = 0.5 * (n - 1) - j;
        const Eigen::VectorXd expected = s3 / s3.norm();
        const Eigen::MatrixXcd t10 = b.harmonic(1, 0);
        for (int j = 0; j < n; ++j) {
            CHECK(std::abs(t10(j, j) - expected[j]) < 1e-12);
        }
        CHECK(b.eigenvalues(0)[1] == doctest::Approx(-2.0).epsilon(1e-13));
    }

    SUBCASE("dense Frobenius-orthonormality at n=16") {
        const int n = 16;
        const auto b = MatrixHarmonicsBasis::build(n);
        double worst = 0.0;
        for (int m = 0; m < n; ++m) {
            for (int l = m; l < n; ++l) {
                for (int l2 = m; l2 < n; ++l2) {
                    const Cd g =
                        (b.harmonic(l, m).adjoint() * b.harmonic(l2, m)).trace();
                    worst = std::max(worst, std::abs(g - (l == l2 ? 1.0 : 0.0)));
                }
            }
        }
        CHECK(worst < 1e-10);
    }

    SUBCASE("conjugation convention T_{l,-m} = (-1)^m T_{lm}^dagger") {
        const auto b = MatrixHarmonicsBasis::build(9);
        for (int l : {1, 3, 6}) {
            for (int m = 1; m <= l; ++m) {
                const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
                CHECK((b.harmonic(l, -m) - sgn * b.harmonic(l, m).adjoint()).norm() <
                      1e-13);
            }
        }
    }

    SUBCASE("basis cache round trip") {
        const int n = 12;
        const auto b = MatrixHarmonicsBasis::build(n);
        const std::string path = "cache_test_n12.tqgb";
        b.write_cache(path);
        MatrixHarmonicsBasis loaded;
        REQUIRE(MatrixHarmonicsBasis::read_cache(path, n, loaded));
        for (int m = 0; m < n; ++m) {
            CHECK((loaded.eigenvectors(m) - b.eigenvectors(m)).norm() == 0.0);
            CHECK((loaded.eigenvalues(m) - b.eigenvalues(m)).norm() == 0.0);
        }
        // Corrupt one payload byte: loader must reject (checksum).
        {
            std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
            f.seekp(20);
            char c = 0x5a;
            f.write(&c, 1);
        }
        MatrixHarmonicsBasis bad;
        CHECK_FALSE(MatrixHarmonicsBasis::read_cache(path, n, bad));
        std::remove(path.c_str());
    }
}

TEST_CASE("laplacian_apply: eigen relation, kernel, linearity") {
    const int n = 10;
    const auto b = MatrixHarmonicsBasis::build(n);

    CHECK(laplacian_apply(Eigen::MatrixXcd::Identity(n, n), b).norm() < 1e-12);

    for (int l : {1, 4, 9}) {
        for (int m : {0, 1, std::min(l, 3)}) {
            const MatrixField t = I * b.harmonic(l, m);
            const MatrixField lap = laplacian_apply(t, b);
            CHECK((lap + double(l) * (l + 1.0) * t).norm() < 1e-10);
        }
    }

    const MatrixField w1 = random_skew(n, 11);
    const MatrixField w2 = random_skew(n, 22);
    const MatrixField lhs = laplacian_apply(2.5 * w1 - 0.75 * w2, b);
    const MatrixField rhs =
        2.5 * laplacian_apply(w1, b) - 0.75 * laplacian_apply(w2, b);
    CHECK((lhs - rhs).norm() < 1e-12 * std::max(1.0, rhs.norm()));

    CHECK((laplacian_apply(w1, b) + laplacian_apply(w1, b).adjoint()).norm() <
          1e-12 * w1.norm());

    CHECK_THROWS_AS(laplacian_apply(Eigen::MatrixXcd::Zero(4, 4), b), Error);
}

TEST_CASE("project/reconstruct: unit field, round trip, reality validation") {
    const int n = 14;
    const auto b = MatrixHarmonicsBasis::build(n);

    SUBCASE("zero and constant fields") {
        SphereField zero(3);
        CHECK(project(zero, b).norm() == 0.0);

        SphereField one(0);
        one.at(0, 0) = std::sqrt(4.0 * M_PI);
        const MatrixField unit = project(one, b);
        const MatrixField expected =
            I * std::sqrt(4.0 * M_PI / n) * Eigen::MatrixXcd::Identity(n, n);
        CHECK((unit - expected).norm() < 1e-13);
    }

    SUBCASE("reconstruct of i T_lm picks out the unit coefficient") {
        for (int l : {0, 2, 5}) {
            for (int m = -l; m <= l; m += std::max(1, l)) {
                const SphereField f = reconstruct(I * b.harmonic(l, m), b, n - 1);
                for (int l2 = 0; l2 <= f.lmax; ++l2) {
                    for (int m2 = -l2; m2 <= l2; ++m2) {
                        const Cd expect =
                            (l2 == l && m2 == m) ? Cd(1.0, 0.0) : Cd(0.0, 0.0);
                        CHECK(std::abs(f.at(l2, m2) - expect) < 1e-12);
                    }
                }
            }
        }
        CHECK(reconstruct(MatrixField::Zero(n, n), b, 5).coeffs.norm() == 0.0);
    }

    SUBCASE("round trip is the identity on band-limited fields") {
        const SphereField f = random_band_limited_field(99, n - 1);
        const SphereField back = reconstruct(project(f, b), b, n - 1);
        CHECK((back.coeffs - f.coeffs).norm() < 1e-12 * f.coeffs.norm());
        // Truncation: higher-degree input projects onto the resolvable band.
        const SphereField g = random_band_limited_field(100, n + 4);
        const SphereField gt = reconstruct(project(g, b), b, n - 1);
        for (int l = 0; l <= n - 1; ++l) {
            for (int m = -l; m <= l; ++m) {
                CHECK(std::abs(gt.at(l, m) - g.at(l, m)) < 1e-12);
            }
        }
    }

    SUBCASE("reality violation is rejected") {
        SphereField f(2);
        f.at(2, 1) = Cd(1.0, 0.5);
        f.at(2, -1) = Cd(7.0, 0.0);  // not -conj(c_{21})
        CHECK_THROWS_AS(project(f, b), Error);
    }

    SUBCASE("projection of a real field is exactly skew-hermitian") {
        const SphereField f = random_band_limited_field(5, n - 1);
        const MatrixField w = project(f, b);
        CHECK((w + w.adjoint()).norm() == 0.0);
    }

    CHECK_THROWS_AS(reconstruct(MatrixField::Zero(n, n), b, n), Error);
}

TEST_CASE("jordan product: unit, symmetry, closure") {
    const int n = 16;
    const auto b = MatrixHarmonicsBasis::build(n);
    SphereField one(0);
    one.at(0, 0) = std::sqrt(4.0 * M_PI);
    const MatrixField unit = project(one, b);

    const MatrixField f = random_skew(n, 31);
    const MatrixField g = random_skew(n, 32);

    CHECK((jordan_product(unit, f, b) - f).norm() < 1e-13 * f.norm());
    CHECK((jordan_product(f, g, b) - jordan_product(g, f, b)).norm() == 0.0);

    const MatrixField fg = jordan_product(f, g, b);
    CHECK((fg + fg.adjoint()).norm() < 1e-13 * fg.norm());

    CHECK_THROWS_AS(jordan_product(f, MatrixField::Zero(4, 4), b), Error);
}

TEST_CASE("scaled commutator: antisymmetry, trace, l=1 closed form") {
    const int n = 20;
    const auto b = MatrixHarmonicsBasis::build(n);
    const MatrixField f = random_skew(n, 41);
    const MatrixField g = random_skew(n, 42);

    CHECK(scaled_commutator(f, f, b).norm() == 0.0);
    CHECK(std::abs(scaled_commutator(f, g, b).trace()) <
          1e-12 * f.norm() * g.norm());

    // (1/hbar)[i T_10, i T_11] = -sqrt(3/n) T_11 exactly: T_10 ~ S_3 and
    // T_11 ~ S_+ lie in the adjoint triplet, so the bracket closes on it.
    const MatrixField t10 = b.harmonic(1, 0);
    const MatrixField t11 = b.harmonic(1, 1);
    const MatrixField got = scaled_commutator(I * t10, I * t11, b);
    const MatrixField expect = -std::sqrt(3.0 / n) * t11;
    CHECK((got - expect).norm() < 1e-13);

    const MatrixField c = scaled_commutator(f, g, b);
    CHECK((c + c.adjoint()).norm() < 1e-13 * c.norm());
}

TEST_CASE("evaluate_on_grid: constants, cos(theta), reality") {
    SphereField one(0);
    one.at(0, 0) = std::sqrt(4.0 * M_PI);
    const Eigen::MatrixXd g1 = evaluate_on_grid(one, 6, 8);
    CHECK((g1.array() - 1.0).abs().maxCoeff() < 1e-13);

    SphereField y10(1);
    y10.at(1, 0) = 1.0;
    const int nlat = 9, nlon = 12;
    const Eigen::MatrixXd g2 = evaluate_on_grid(y10, nlat, nlon);
    for (int j = 0; j < nlat; ++j) {
        const double theta = M_PI * (j + 0.5) / nlat;
        const double expect = std::sqrt(3.0 / (4.0 * M_PI)) * std::cos(theta);
        for (int k = 0; k < nlon; ++k) {
            CHECK(std::abs(g2(j, k) - expect) < 1e-13);
        }
    }

    const SphereField f = random_band_limited_field(77, 12);
    CHECK_NOTHROW(evaluate_on_grid(f, 20, 24));  // reality residual asserted inside
    CHECK_THROWS_AS(evaluate_on_grid(f, 1, 24), Error);
}
