#include "tqg/sphere_transform.hpp"

#include <cmath>
#include <vector>

#include "tqg/errors.hpp"
#include "tqg/legendre.hpp"

namespace tqg {

QuadratureGrid QuadratureGrid::for_degree(int degree) {
    QuadratureGrid g;
    const int nlat = degree / 2 + 2;
    gauss_legendre(nlat, g.mu, g.weights);
    g.nlon = degree + 2;
    return g;
}

Eigen::MatrixXcd synthesize_on_grid(const SphereField& f, const QuadratureGrid& grid) {
    const int lmax = f.lmax;
    const int nlat = grid.nlat();
    Eigen::MatrixXcd values(nlat, grid.nlon);
    std::vector<double> plm;
    Eigen::VectorXcd gm(2 * lmax + 1);
    for (int j = 0; j < nlat; ++j) {
        legendre::table(lmax, grid.mu[j], plm);
        for (int m = -lmax; m <= lmax; ++m) {
            const int am = std::abs(m);
            const double csphase = (m < 0 && am % 2 != 0) ? -1.0 : 1.0;
            Complex acc(0.0, 0.0);
            for (int l = am; l <= lmax; ++l) {
                acc += f.at(l, m) * plm[legendre::tri_index(l, am)];
            }
            gm[m + lmax] = csphase * acc;
        }
        for (int k = 0; k < grid.nlon; ++k) {
            const double phi = grid.phi(k);
            Complex v(0.0, 0.0);
            for (int m = -lmax; m <= lmax; ++m) {
                v += gm[m + lmax] * std::polar(1.0, m * phi);
            }
            values(j, k) = v;
        }
    }
    return values;
}

SphereField analyze_on_grid(const Eigen::MatrixXcd& values,
                            const QuadratureGrid& grid, int lmax) {
    const int nlat = grid.nlat();
    if (values.rows() != nlat || values.cols() != grid.nlon) {
        throw size_error("grid value array does not match quadrature grid");
    }
    if (grid.nlon < 2 * lmax + 1) {
        throw numeric_error("quadrature grid under-resolved in longitude for "
                            "degree " + std::to_string(lmax));
    }
    // Azimuthal sums G_m(theta_j) = (2pi/nlon) sum_k f e^{-i m phi_k}.
    Eigen::MatrixXcd gm(nlat, 2 * lmax + 1);
    const double dphi = 2.0 * M_PI / grid.nlon;
    for (int j = 0; j < nlat; ++j) {
        for (int m = -lmax; m <= lmax; ++m) {
            Complex acc(0.0, 0.0);
            for (int k = 0; k < grid.nlon; ++k) {
                acc += values(j, k) * std::polar(1.0, -m * grid.phi(k));
            }
            gm(j, m + lmax) = acc * dphi;
        }
    }
    SphereField f(lmax);
    std::vector<double> plm;
    for (int j = 0; j < nlat; ++j) {
        legendre::table(lmax, grid.mu[j], plm);
        for (int m = -lmax; m <= lmax; ++m) {
            const int am = std::abs(m);
            const double csphase = (m < 0 && am % 2 != 0) ? -1.0 : 1.0;
            for (int l = am; l <= lmax; ++l) {
                f.at(l, m) += grid.weights[j] * csphase *
                              plm[legendre::tri_index(l, am)] * gm(j, m + lmax);
            }
        }
    }
    return f;
}

SphereField analyze_function(const std::function<double(double, double)>& f,
                             int lmax, const QuadratureGrid& grid) {
    Eigen::MatrixXcd values(grid.nlat(), grid.nlon);
    for (int j = 0; j < grid.nlat(); ++j) {
        const double theta = std::acos(grid.mu[j]);
        for (int k = 0; k < grid.nlon; ++k) {
            values(j, k) = f(theta, grid.phi(k));
        }
    }
    return analyze_on_grid(values, grid, lmax);
}

}  // namespace tqg
