#include "tqg/quantization.hpp"

#include <cmath>
#include <vector>

#include "tqg/errors.hpp"
#include "tqg/legendre.hpp"

namespace tqg {

namespace {
const Complex kI(0.0, 1.0);

void require_same_size(const MatrixField& f, const MatrixField& g,
                       const MatrixHarmonicsBasis& basis) {
    if (f.rows() != basis.n() || f.rows() != f.cols() || g.rows() != g.cols() ||
        f.rows() != g.rows()) {
        throw size_error("matrix size mismatch with basis n=" +
                         std::to_string(basis.n()));
    }
}
}  // namespace

MatrixField project(const SphereField& f, const MatrixHarmonicsBasis& basis) {
    const int n = basis.n();
    const double scale = std::max(1.0, f.coeffs.cwiseAbs().maxCoeff());
    if (f.reality_residual() > 1e-10 * scale) {
        throw field_error("reality condition violated beyond 1e-10");
    }

    MatrixField w = MatrixField::Zero(n, n);
    const int ltop = std::min(f.lmax, n - 1);
    for (int m = 0; m <= ltop; ++m) {
        const int k = n - m;
        const auto& v = basis.eigenvectors(m);  // k x k, column l-m
        Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(k);
        for (int l = std::max(1, m); l <= ltop; ++l) coeff[l - m] = f.at(l, m);
        if (m == 0) {
            // m=0 coefficients are real for a real field; the retained part
            // is the real part so the output is exactly skew-hermitian.
            coeff[0] = f.at(0, 0);
            for (int i = 0; i < k; ++i) coeff[i] = Complex(coeff[i].real(), 0.0);
            const Eigen::VectorXcd diag = kI * (v * coeff);
            for (int j = 0; j < n; ++j) w(j, j) += diag[j];
        } else {
            if (coeff.isZero(0.0)) continue;
            // Upper-diagonal part A_m; the m<0 terms combine with reality to
            // the skew completion -A_m^dagger.
            const Eigen::VectorXcd diag = kI * (v * coeff);
            for (int j = 0; j < k; ++j) {
                w(j, j + m) += diag[j];
                w(j + m, j) -= std::conj(diag[j]);
            }
        }
    }
    return w;
}

SphereField reconstruct(const MatrixField& w, const MatrixHarmonicsBasis& basis,
                        int lmax) {
    const int n = basis.n();
    if (w.rows() != n || w.cols() != n) {
        throw size_error("matrix size mismatch with basis n=" + std::to_string(n));
    }
    if (lmax < 0 || lmax > n - 1) {
        throw size_error("reconstruct lmax out of range [0, n-1]");
    }
    SphereField f(lmax);
    for (int m = 0; m <= lmax; ++m) {
        const int k = n - m;
        const auto& v = basis.eigenvectors(m);
        Eigen::VectorXcd upper(k), lower(k);
        for (int j = 0; j < k; ++j) {
            upper[j] = w(j, j + m);
            lower[j] = w(j + m, j);
        }
        // c_{lm} = -i v^T diag_m(W); c_{l,-m} = (-1)^m (-i) v^T diag_{-m}(W).
        const Eigen::VectorXcd cm = -kI * (v.transpose() * upper);
        for (int l = m; l <= lmax; ++l) f.at(l, m) = cm[l - m];
        if (m > 0) {
            const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
            const Eigen::VectorXcd cneg = sgn * (-kI) * (v.transpose() * lower);
            for (int l = m; l <= lmax; ++l) f.at(l, -m) = cneg[l - m];
        }
    }
    return f;
}

MatrixField jordan_product(const MatrixField& f, const MatrixField& g,
                           const MatrixHarmonicsBasis& basis) {
    require_same_size(f, g, basis);
    const double c = 0.5 * std::sqrt(basis.n() / (4.0 * M_PI));
    MatrixField fg = f * g;
    fg.noalias() += g * f;
    return (-kI * c) * fg;
}

MatrixField scaled_commutator(const MatrixField& f, const MatrixField& g,
                              const MatrixHarmonicsBasis& basis) {
    require_same_size(f, g, basis);
    MatrixField c = f * g;
    c.noalias() -= g * f;
    return c / basis.hbar();
}

MatrixField laplacian_apply(const MatrixField& w, const MatrixHarmonicsBasis& basis) {
    const int n = basis.n();
    if (w.rows() != n || w.cols() != n) {
        throw size_error("matrix size mismatch with basis n=" + std::to_string(n));
    }
    MatrixField out(n, n);
    Eigen::VectorXcd d(n), r(n);
    for (int m = -(n - 1); m <= n - 1; ++m) {
        const int am = std::abs(m);
        const int k = n - am;
        const auto& a = basis.laplacian_diag(am);
        const auto& b = basis.laplacian_off(am);
        for (int j = 0; j < k; ++j) d[j] = (m >= 0) ? w(j, j + am) : w(j + am, j);
        for (int j = 0; j < k; ++j) {
            Complex v = a[j] * d[j];
            if (j > 0) v += b[j - 1] * d[j - 1];
            if (j + 1 < k) v += b[j] * d[j + 1];
            r[j] = v;
        }
        for (int j = 0; j < k; ++j) {
            if (m >= 0)
                out(j, j + am) = r[j];
            else
                out(j + am, j) = r[j];
        }
    }
    return out;
}

Eigen::MatrixXd evaluate_on_grid(const SphereField& f, int nlat, int nlon) {
    if (nlat < 2 || nlon < 4) {
        throw size_error("grid needs nlat >= 2 and nlon >= 4");
    }
    const int lmax = f.lmax;
    Eigen::MatrixXd grid(nlat, nlon);
    std::vector<double> plm;
    // Per-latitude azimuthal accumulators g_m(theta) = sum_l c_{lm} Pbar_{l|m|}.
    Eigen::VectorXcd gm(2 * lmax + 1);
    double max_abs = 0.0, max_imag = 0.0;
    for (int j = 0; j < nlat; ++j) {
        const double theta = M_PI * (j + 0.5) / nlat;
        legendre::table(lmax, std::cos(theta), plm);
        gm.setZero();
        for (int m = -lmax; m <= lmax; ++m) {
            const int am = std::abs(m);
            const double csphase = (m < 0 && am % 2 != 0) ? -1.0 : 1.0;
            Complex acc(0.0, 0.0);
            for (int l = am; l <= lmax; ++l) {
                acc += f.at(l, m) * plm[legendre::tri_index(l, am)];
            }
            gm[m + lmax] = csphase * acc;
        }
        for (int kphi = 0; kphi < nlon; ++kphi) {
            const double phi = 2.0 * M_PI * kphi / nlon;
            Complex v(0.0, 0.0);
            for (int m = -lmax; m <= lmax; ++m) {
                v += gm[m + lmax] * std::polar(1.0, m * phi);
            }
            grid(j, kphi) = v.real();
            max_abs = std::max(max_abs, std::abs(v));
            max_imag = std::max(max_imag, std::abs(v.imag()));
        }
    }
    if (max_imag > 1e-10 * std::max(1.0, max_abs)) {
        throw field_error("grid synthesis has non-real values; field violates "
                          "the reality condition");
    }
    return grid;
}

}  // namespace tqg
