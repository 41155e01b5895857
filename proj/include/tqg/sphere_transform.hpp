#pragma once

#include <Eigen/Dense>
#include <functional>

#include "tqg/sphere_field.hpp"

namespace tqg {

/// Gauss-Legendre (latitude) x uniform (longitude) quadrature grid.
/// Latitude nodes are mu = cos(theta); analysis is exact for band-limited
/// integrands: degree d needs nlat >= d/2 + 1 and nlon >= d + 1.
struct QuadratureGrid {
    Eigen::VectorXd mu;       // ascending in mu
    Eigen::VectorXd weights;  // Gauss-Legendre weights
    int nlon = 0;

    static QuadratureGrid for_degree(int degree);
    int nlat() const { return static_cast<int>(mu.size()); }
    double phi(int k) const { return 2.0 * M_PI * k / nlon; }
};

/// Complex coefficient table indexed like SphereField but without the reality
/// requirement; used by quadrature-based oracles and field generators.
Eigen::MatrixXcd synthesize_on_grid(const SphereField& f, const QuadratureGrid& grid);

/// Spherical-harmonic analysis by quadrature: c_{lm} = sum f conj(Y_lm) w.
SphereField analyze_on_grid(const Eigen::MatrixXcd& values,
                            const QuadratureGrid& grid, int lmax);

/// Analysis of a pointwise function given in (theta, phi).
SphereField analyze_function(const std::function<double(double, double)>& f,
                             int lmax, const QuadratureGrid& grid);

}  // namespace tqg
