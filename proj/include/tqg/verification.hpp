#pragma once

#include <string>
#include <vector>

#include "tqg/tqg_system.hpp"

namespace tqg {

/// Result of one independent oracle run; pass iff every measured error is
/// within its threshold.
struct OracleReport {
    std::string name;
    std::string parameters;
    struct Entry {
        std::string label;
        double measured = 0.0;
        double threshold = 0.0;
        bool within() const { return measured <= threshold; }
    };
    std::vector<Entry> entries;

    bool pass() const {
        for (const auto& e : entries)
            if (!e.within()) return false;
        return true;
    }
    std::string line() const;
};

/// Quantized Laplacian through its definition (1/hbar^2) sum_a [X_a,[X_a,W]],
/// evaluated with the generator matrices; independent of the per-diagonal
/// tridiagonal path used by laplacian_apply.
MatrixField laplacian_via_generators(const MatrixField& w,
                                     const MatrixHarmonicsBasis& basis);

/// Brute-force stream solve: flattens P -> Lap_N P - gamma S (.) P (operator
/// applied via generators and the generic symmetrized product) into a dense
/// N^2 x N^2 system and solves it directly. N <= 24.
MatrixField dense_helmholtz_oracle(const MatrixField& q, const MatrixField& b,
                                   const StaticData& sd);

/// Same oracle with an explicit right-hand side.
MatrixField dense_helmholtz_oracle_rhs(const MatrixField& rhs, const StaticData& sd);

/// Pointwise product on a Gauss-Legendre x uniform grid resolving degree
/// f.lmax + g.lmax, analyzed back to coefficients; exact to quadrature
/// precision for band-limited products.
SphereField grid_product_oracle(const SphereField& f, const SphereField& g);

/// Spherical Poisson bracket {f, g} = (d_theta f d_phi g - d_phi f d_theta g)
/// / sin(theta), evaluated spectrally on the quadrature grid and analyzed
/// back to coefficients.
SphereField grid_bracket_oracle(const SphereField& f, const SphereField& g);

/// Verifies Lap_N T_lm = -l(l+1) T_lm for all (l, m) against the generator
/// realization, and Frobenius-orthonormality of the basis (dense pair check
/// for n <= 64). n <= 256.
OracleReport spectrum_check(int n);

/// Convergence of the symmetrized product against the grid oracle over the
/// given sizes; expects slope -1 +- 0.25 on a log-log fit.
OracleReport product_convergence_check(const std::vector<int>& sizes);

/// Convergence of the scaled commutator against the bracket oracle with the
/// -sqrt(4pi/N) correspondence factor; slope -1 +- 0.25.
OracleReport bracket_convergence_check(const std::vector<int>& sizes);

/// Agreement of the diagonal-split Helmholtz solve with the dense oracle
/// over random states; reports the worst relative error.
OracleReport helmholtz_equivalence_check(int n, const std::vector<double>& gammas,
                                         int trials, unsigned long long seed);

/// Forward Euler reference integrator (test-only, first order); used solely
/// to validate the order-check harness.
void euler_reference_step(TqgState& state, const StaticData& sd, double h);

/// Self-convergence order of the midpoint scheme: runs h, h/2, h/4 against
/// an h/16 reference and fits the slope of the final-state error; pass for
/// slope 2.0 +- 0.3. With `euler_control` also checks the first-order
/// reference lands at slope 1.0 +- 0.3.
OracleReport order_check(const SimConfig& config, bool euler_control = false);

/// Full oracle suite behind the `verify` CLI subcommand.
std::vector<OracleReport> run_verification_suite(int n_hint);

}  // namespace tqg
