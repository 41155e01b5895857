#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tqg {

/// Orthonormalized associated Legendre functions Pbar_{lm}(x) with
/// Condon-Shortley phase, so that Y_{lm}(theta, phi) = Pbar_{lm}(cos theta)
/// e^{i m phi} and int |Y_{lm}|^2 dA = 1 over the unit sphere.
///
/// Values are returned for m >= 0 only; triangular storage with
/// tri_index(l, m) = l(l+1)/2 + m.
namespace legendre {

inline int tri_index(int l, int m) { return l * (l + 1) / 2 + m; }
inline int tri_size(int lmax) { return (lmax + 1) * (lmax + 2) / 2; }

/// Fills `out` (size tri_size(lmax)) with Pbar_{lm}(x), standard three-term
/// recurrences; stable in double for the degrees used here (l up to ~1000).
void table(int lmax, double x, std::vector<double>& out);

/// Fills `dout` with d/dtheta Pbar_{lm}(cos theta) at x = cos(theta),
/// requires sin(theta) > 0 (interior points only).
void theta_derivative_table(int lmax, double x, const std::vector<double>& plm,
                            std::vector<double>& dout);

}  // namespace legendre

/// Gauss-Legendre quadrature on (-1, 1): `nodes` ascending, weights positive,
/// exact for polynomials of degree <= 2n - 1.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

}  // namespace tqg
