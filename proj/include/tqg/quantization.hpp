#pragma once

#include <Eigen/Dense>

#include "tqg/basis.hpp"
#include "tqg/sphere_field.hpp"

namespace tqg {

/// Quantization map p_N: returns sum_{l<=N-1, |m|<=l} c_{lm} (i T_{lm}).
/// Coefficients beyond l = N-1 are ignored (truncation). The input must be a
/// real field (reality condition to 1e-10 of its sup coefficient), and the
/// output is skew-hermitian by construction.
MatrixField project(const SphereField& f, const MatrixHarmonicsBasis& basis);

/// Spectral coefficients of a matrix: c_{lm} = tr((i T_{lm})^dagger W),
/// for l <= lmax <= N-1.
SphereField reconstruct(const MatrixField& w, const MatrixHarmonicsBasis& basis,
                        int lmax);

/// Symmetrized product realizing the projection of a pointwise product:
/// F (.) G = -(i/2) sqrt(N/4pi) (FG + GF). Commutative; closed on
/// skew-hermitian matrices; project(1) is its unit.
MatrixField jordan_product(const MatrixField& f, const MatrixField& g,
                           const MatrixHarmonicsBasis& basis);

/// (1/hbar)(FG - GF); the Lie bracket of the Zeitlin truncation.
MatrixField scaled_commutator(const MatrixField& f, const MatrixField& g,
                              const MatrixHarmonicsBasis& basis);

/// Quantized Laplacian, applied per matrix diagonal through its symmetric
/// tridiagonal representation; O(N^2).
MatrixField laplacian_apply(const MatrixField& w, const MatrixHarmonicsBasis& basis);

/// Field values on the equiangular grid theta_j = pi (j + 1/2) / nlat,
/// phi_k = 2 pi k / nlon. Checks that the imaginary residual of the synthesis
/// stays below 1e-10 of the field magnitude.
Eigen::MatrixXd evaluate_on_grid(const SphereField& f, int nlat, int nlon);

}  // namespace tqg
