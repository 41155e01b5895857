#pragma once

#include <Eigen/Dense>
#include <complex>

namespace tqg {

using Complex = std::complex<double>;

/// Truncated spherical-harmonic coefficient table for a scalar field on the
/// sphere. Coefficients c_{lm} are stored in (l, m) row-major order:
/// index(l, m) = l^2 + l + m, for 0 <= l <= lmax, -l <= m <= l.
///
/// A real-valued field satisfies the reality condition
///   c_{l,-m} = (-1)^m conj(c_{lm}).
/// Convention: orthonormal complex spherical harmonics with Condon-Shortley
/// phase.
struct SphereField {
    int lmax = 0;
    Eigen::VectorXcd coeffs;  // size (lmax+1)^2

    SphereField() : coeffs(1) { coeffs.setZero(); }

    explicit SphereField(int lmax_)
        : lmax(lmax_), coeffs((lmax_ + 1) * (lmax_ + 1)) {
        coeffs.setZero();
    }

    static int index(int l, int m) { return l * l + l + m; }

    Complex& at(int l, int m) { return coeffs[index(l, m)]; }
    const Complex& at(int l, int m) const { return coeffs[index(l, m)]; }

    int size() const { return static_cast<int>(coeffs.size()); }

    /// Largest violation of the reality condition, as an absolute value.
    double reality_residual() const {
        double worst = 0.0;
        for (int l = 0; l <= lmax; ++l) {
            worst = std::max(worst, std::abs(at(l, 0).imag()));
            for (int m = 1; m <= l; ++m) {
                const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
                worst = std::max(worst,
                                 std::abs(at(l, -m) - sgn * std::conj(at(l, m))));
            }
        }
        return worst;
    }

    /// Overwrites the m<0 (and imaginary m=0) entries so the reality
    /// condition holds exactly, keeping the m>=0 data.
    void enforce_reality() {
        for (int l = 0; l <= lmax; ++l) {
            at(l, 0) = Complex(at(l, 0).real(), 0.0);
            for (int m = 1; m <= l; ++m) {
                const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
                at(l, -m) = sgn * std::conj(at(l, m));
            }
        }
    }
};

/// Element of u(N): N x N skew-hermitian complex matrix.
using MatrixField = Eigen::MatrixXcd;

/// Frobenius-relative skew-hermitian defect ||W + W^dagger|| / ||W||.
inline double skew_hermitian_defect(const MatrixField& w) {
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    return (w + w.adjoint()).norm() / norm;
}

}  // namespace tqg
