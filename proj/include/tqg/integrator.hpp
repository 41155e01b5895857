#pragma once

#include <functional>

#include "tqg/config.hpp"
#include "tqg/tqg_system.hpp"

namespace tqg {

struct StepReport {
    int iterations = 0;
    double residual = 0.0;  // Frobenius norm of the last combined update
    bool converged = false;
};

/// One step of the semidirect-product Lie-Poisson midpoint scheme. The
/// 1/hbar bracket scaling is absorbed into effective fields Pe = P~/hbar,
/// Je = J~/hbar, so the scheme uses plain matrix products. Fixed-point sweep
/// from (B~, Q~) = (B_n, Q_n), refreshing Pe, Je each sweep:
///   B~ <- B_n + (h/2)[B~, Pe] + (h^2/4) Pe B~ Pe
///   Q~ <- Q_n + (h/2)([Q~, Pe] + [B~, Je])
///         + (h^2/4)(Pe Q~ Pe + Je B~ Pe + Pe B~ Je)
/// and on convergence the explicit update
///   B_{n+1} = B_n + h[B~, Pe],  Q_{n+1} = Q_n + h([Q~, Pe] + [B~, Je]).
/// Throws StepFailure when the residual does not reach fp_tol within
/// fp_max_iter sweeps.
StepReport step(TqgState& state, const StaticData& sd, double h, double fp_tol,
                int fp_max_iter);

struct IntegrationSinks {
    /// Called at the diagnostics cadence (and for the initial state).
    std::function<void(const DiagnosticsRecord&)> diagnostics;
    /// Called at the snapshot cadence and for the final state.
    std::function<void(const TqgState&, long step)> snapshot;
};

/// Advances with fixed h = config.dt until time >= t_final. A failing step is
/// retried as 2, 4, 8 equal sub-steps (at most 3 halvings), then the run
/// aborts with the step failure after flushing prior outputs.
TqgState integrate(TqgState state, const StaticData& sd, const SimConfig& config,
                   const IntegrationSinks& sinks);

}  // namespace tqg
