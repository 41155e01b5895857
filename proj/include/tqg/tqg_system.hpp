#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tqg/basis.hpp"
#include "tqg/config.hpp"
#include "tqg/quantization.hpp"
#include "tqg/sphere_field.hpp"

namespace tqg {

/// Pair (Q, B) of potential-vorticity and buoyancy matrices.
struct TqgState {
    double time = 0.0;
    MatrixField Q;
    MatrixField B;
};

struct DiagnosticsRecord {
    long step = 0;
    double time = 0.0;
    double hamiltonian = 0.0;
    std::vector<double> casimirs_b;   // (4pi/N) i^{-k} tr(B^k), k = 1..K
    std::vector<double> casimirs_qb;  // (4pi/N) i^{-(k+1)} tr(Q B^k), k = 0..K
    int fp_iterations = 0;
    double fp_residual = 0.0;
};

/// Precomputed operators for a configuration. Immutable after assembly and
/// shareable across threads.
class StaticData {
public:
    MatrixHarmonicsBasis basis;
    MatrixField M;         // p_N(mu), mu = cos(theta); diagonal
    MatrixField S;         // M (.) M, quantized mu^2; diagonal
    MatrixField H1;        // quantized bathymetry
    MatrixField coriolis;  // (2/Ro) * coriolis_scale * M
    double rossby = 0.0;
    double gamma = 0.0;
    double coriolis_scale = 1.0;

    /// Entrywise real factor of M (.) X: (hbar/2)(s_j + s_k).
    double m_factor(int j, int k) const { return m_half_[j] + m_half_[k]; }
    /// Entrywise real factor of S (.) X: (hbar^2/2)(s_j^2 + s_k^2).
    double s_factor(int j, int k) const { return s_half_[j] + s_half_[k]; }

    /// M (.) X without forming products, O(N^2).
    MatrixField jordan_with_m(const MatrixField& x) const;

    friend StaticData assemble_static(const SimConfig& config,
                                      MatrixHarmonicsBasis basis);

    /// Stream matrix from the inhomogeneous Helmholtz equation
    ///   Lap_N P - gamma S (.) P = Q - M (.) (B - H1) - coriolis,
    /// solved diagonal-by-diagonal, O(N^2). For gamma = 0 the m = 0 block is
    /// singular; the right-hand side is projected off T_00 and P's T_00
    /// coefficient is set to zero (mean-mode convention).
    MatrixField helmholtz_solve(const MatrixField& q, const MatrixField& b) const;

    /// Same elliptic solve with an explicit right-hand side (test hook).
    MatrixField helmholtz_solve_rhs(const MatrixField& rhs) const;

    /// Lap_N P - gamma S (.) P, for residual checks.
    MatrixField helmholtz_apply(const MatrixField& p) const;

private:
    // LDL^T factors of the per-diagonal systems (tridiagonal + diagonal).
    std::vector<Eigen::VectorXd> fact_d_;
    std::vector<Eigen::VectorXd> fact_l_;
    std::vector<double> m_half_;  // (hbar/2) s_j
    std::vector<double> s_half_;  // (hbar^2/2) s_j^2
    bool gamma_zero_ = false;
};

StaticData assemble_static(const SimConfig& config, MatrixHarmonicsBasis basis);

/// Convenience: builds (or loads from cache) the basis, then assembles.
StaticData assemble_static(const SimConfig& config,
                           const std::string& basis_cache_dir = "tqg_basis_cache");

/// J = H1 - M (.) P.
MatrixField source_current(const MatrixField& p, const StaticData& sd);

/// Evolution right-hand side:
///   Qdot = [Q, P]_N + [B, J]_N,   Bdot = [B, P]_N.
void rhs(const TqgState& state, const StaticData& sd, MatrixField& qdot,
         MatrixField& bdot);

/// H = 1/2 tr((Q - coriolis + M (.) (H1 - B))^dagger P) + tr(B^dagger H1);
/// returns the real part, asserting the imaginary residual is negligible.
double hamiltonian(const TqgState& state, const StaticData& sd);

/// Casimir traces: fills casimirs_b with (4pi/N) i^{-k} tr(B^k), k = 1..K,
/// and casimirs_qb with (4pi/N) i^{-(k+1)} tr(Q B^k), k = 0..K. For
/// skew-hermitian inputs these phased traces are real; the imaginary parts
/// are returned through *imag_residual for invariant checks.
void casimirs(const TqgState& state, int max_power, std::vector<double>& casimirs_b,
              std::vector<double>& casimirs_qb, double* imag_residual = nullptr);

/// Seeded random initial state: independent standard-normal draws for the
/// spectral coefficients with 1 <= l <= init_lmax (m = 0 real; the l = 0
/// mean is zero), reality enforced, Q and B from independent sub-streams.
TqgState random_initial_state(const SimConfig& config,
                              const MatrixHarmonicsBasis& basis);

/// Seeded band-limited real field with standard-normal coefficients; shared
/// by the random initial state and the verification oracles.
SphereField random_band_limited_field(unsigned long long seed, int lmax);

/// Low-pass filter (1 - alpha^2 Lap)^{-1}: c_{lm} /= 1 + alpha^2 l(l+1).
SphereField helmholtz_filter(const SphereField& f, double alpha);

/// Band-limited bathymetry projected to u(N) per the configuration.
MatrixField builtin_bathymetry(const BathymetrySpec& spec,
                               const MatrixHarmonicsBasis& basis);

}  // namespace tqg
