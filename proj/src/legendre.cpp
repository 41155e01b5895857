#include "tqg/legendre.hpp"

#include <cmath>

#include "tqg/errors.hpp"

namespace tqg {
namespace legendre {

namespace {
constexpr double kFourPi = 4.0 * M_PI;
}

void table(int lmax, double x, std::vector<double>& out) {
    out.assign(tri_size(lmax), 0.0);
    const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));  // sin(theta)

    out[tri_index(0, 0)] = 1.0 / std::sqrt(kFourPi);
    if (lmax == 0) return;

    // Sectoral Pbar_{mm}: the minus sign carries the Condon-Shortley phase.
    for (int m = 1; m <= lmax; ++m) {
        out[tri_index(m, m)] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sx *
                               out[tri_index(m - 1, m - 1)];
    }
    // Pbar_{m+1,m}
    for (int m = 0; m < lmax; ++m) {
        out[tri_index(m + 1, m)] =
            std::sqrt(2.0 * m + 3.0) * x * out[tri_index(m, m)];
    }
    // Upward recurrence in l.
    for (int m = 0; m <= lmax; ++m) {
        for (int l = m + 2; l <= lmax; ++l) {
            const double a =
                std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            const double b = std::sqrt(
                ((double(l - 1) * (l - 1)) - double(m) * m) /
                (4.0 * double(l - 1) * (l - 1) - 1.0));
            out[tri_index(l, m)] =
                a * (x * out[tri_index(l - 1, m)] - b * out[tri_index(l - 2, m)]);
        }
    }
}

void theta_derivative_table(int lmax, double x, const std::vector<double>& plm,
                            std::vector<double>& dout) {
    const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    if (sx <= 0.0) {
        throw numeric_error("Legendre theta-derivative requested at a pole");
    }
    const double cot = x / sx;
    dout.assign(tri_size(lmax), 0.0);
    // d/dtheta Pbar_{lm} = m cot(theta) Pbar_{lm}
    //                      + sqrt((l-m)(l+m+1)) Pbar_{l,m+1}.
    for (int l = 0; l <= lmax; ++l) {
        for (int m = 0; m <= l; ++m) {
            double v = m * cot * plm[tri_index(l, m)];
            if (m < l) {
                v += std::sqrt(double(l - m) * (l + m + 1)) *
                     plm[tri_index(l, m + 1)];
            }
            dout[tri_index(l, m)] = v;
        }
    }
}

}  // namespace legendre

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    if (n < 1) throw size_error("Gauss-Legendre rule needs n >= 1");
    nodes.resize(n);
    weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

}  // namespace tqg
