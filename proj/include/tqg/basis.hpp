#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "tqg/sphere_field.hpp"

namespace tqg {

/// Quantized coordinate matrices X_a = i*hbar*S_a of size n, where S_a is the
/// spin-(n-1)/2 representation of su(2) with S_3 = diag((n-1)/2, ..., -(n-1)/2)
/// and ladder entries sqrt(s(s+1) - m(m+-1)). Each X_a is skew-hermitian and
/// sum_a X_a^2 = -I (quantized unit sphere).
std::array<Eigen::MatrixXcd, 3> su2_generators(int n);

/// hbar = 2 / sqrt(n^2 - 1).
double quantization_hbar(int n);

/// Matrix-harmonics basis of u(N): eigen-decomposition data of the quantized
/// Laplacian W -> (1/hbar^2) sum_a [X_a, [X_a, W]], which maps each matrix
/// diagonal to itself and restricts to a real symmetric tridiagonal operator
/// per diagonal offset. The eigenvector for eigenvalue -l(l+1) on offset
/// m >= 0 holds the nonzero diagonal of T_{lm}; matrices for m < 0 follow the
/// conjugation convention T_{l,-m} = (-1)^m T_{lm}^dagger.
///
/// Normalization: tr(T_{lm}^dagger T_{l'm'}) = delta_{ll'} delta_{mm'}.
/// Phase: the first entry of each eigenvector above 1e-8 of its max is made
/// positive (the numerically robust reading of "first nonzero entry positive";
/// the leading single-signed lobe of the eigenvector makes both agree).
class MatrixHarmonicsBasis {
public:
    MatrixHarmonicsBasis() = default;  // empty; fill via build/load

    /// Builds the basis via n independent tridiagonal eigen-solves, O(n^3).
    static MatrixHarmonicsBasis build(int n);

    /// Loads from the cache file for this n if present and valid, otherwise
    /// builds and (re)writes the cache. Cache directory resolution:
    /// TQG_BASIS_CACHE_DIR env var, else `cache_dir`.
    static MatrixHarmonicsBasis load_or_build(int n, const std::string& cache_dir);

    int n() const { return n_; }
    double hbar() const { return hbar_; }

    const Eigen::MatrixXcd& x1() const { return x_[0]; }
    const Eigen::MatrixXcd& x2() const { return x_[1]; }
    const Eigen::MatrixXcd& x3() const { return x_[2]; }

    /// S_3 weights s_j = (n-1)/2 - j, j = 0..n-1.
    double weight(int j) const { return 0.5 * (n_ - 1) - j; }

    /// Tridiagonal representation of the Laplacian on diagonal offset |m|:
    /// main diagonal (size n-|m|) and off-diagonal (size n-|m|-1).
    const Eigen::VectorXd& laplacian_diag(int m) const { return lap_diag_[std::abs(m)]; }
    const Eigen::VectorXd& laplacian_off(int m) const { return lap_off_[std::abs(m)]; }

    /// Eigenvalues on offset m >= 0 ordered by degree l = m..n-1
    /// (eigenvalue(m)[l-m] is the computed value of -l(l+1)).
    const Eigen::VectorXd& eigenvalues(int m) const { return eigval_[m]; }

    /// Eigenvector matrix on offset m >= 0; column l-m is the nonzero
    /// diagonal of T_{lm}.
    const Eigen::MatrixXd& eigenvectors(int m) const { return eigvec_[m]; }

    /// Dense T_{lm} for any -l <= m <= l (built on demand; test/verification
    /// convenience, not used in hot paths).
    Eigen::MatrixXcd harmonic(int l, int m) const;

    /// Writes/reads the binary cache ("TQGB" format). read_cache returns
    /// false on any mismatch (magic, version, size, checksum).
    void write_cache(const std::string& path) const;
    static bool read_cache(const std::string& path, int n, MatrixHarmonicsBasis& out);

private:
    void build_operator_data();  // generators + tridiagonals from n_

    int n_ = 0;
    double hbar_ = 0.0;
    std::array<Eigen::MatrixXcd, 3> x_;
    std::vector<Eigen::VectorXd> lap_diag_;  // m = 0..n-1
    std::vector<Eigen::VectorXd> lap_off_;
    std::vector<Eigen::VectorXd> eigval_;
    std::vector<Eigen::MatrixXd> eigvec_;
};

}  // namespace tqg
