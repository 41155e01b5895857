#include "tqg/integrator.hpp"

#include <cmath>

#include "tqg/errors.hpp"

namespace tqg {

namespace {
void skew_part(MatrixField& w) {
    // Roundoff hygiene: iterates stay exactly skew-hermitian.
    w = 0.5 * (w - w.adjoint()).eval();
}
}  // namespace

StepReport step(TqgState& state, const StaticData& sd, double h, double fp_tol,
                int fp_max_iter) {
    if (h == 0.0) throw config_error("step size must be nonzero");
    const double hbar = sd.basis.hbar();
    const MatrixField q0 = state.Q;
    const MatrixField b0 = state.B;
    MatrixField qt = q0;
    MatrixField bt = b0;

    StepReport report;
    MatrixField pe, je, bp, pb, qp, pq, bj, jb;
    for (int it = 1; it <= fp_max_iter; ++it) {
        pe = sd.helmholtz_solve(qt, bt) / hbar;
        je = source_current(hbar * pe, sd) / hbar;

        bp.noalias() = bt * pe;
        pb.noalias() = pe * bt;
        qp.noalias() = qt * pe;
        pq.noalias() = pe * qt;
        bj.noalias() = bt * je;
        jb.noalias() = je * bt;

        MatrixField bn = b0 + 0.5 * h * (bp - pb);
        bn.noalias() += 0.25 * h * h * (pb * pe);
        MatrixField qn = q0 + 0.5 * h * (qp - pq + bj - jb);
        qn.noalias() += 0.25 * h * h * (pq * pe);
        qn.noalias() += 0.25 * h * h * (jb * pe);
        qn.noalias() += 0.25 * h * h * (pb * je);

        const double resid = std::sqrt((bn - bt).squaredNorm() + (qn - qt).squaredNorm());
        bt = std::move(bn);
        qt = std::move(qn);
        report.iterations = it;
        report.residual = resid;
        if (resid <= fp_tol) {
            report.converged = true;
            break;
        }
    }
    if (!report.converged) {
        throw StepFailure(report.residual, report.iterations);
    }

    // Explicit update with Pe, Je refreshed from the converged midpoint.
    pe = sd.helmholtz_solve(qt, bt) / hbar;
    je = source_current(hbar * pe, sd) / hbar;
    state.B = b0 + h * (bt * pe - pe * bt);
    state.Q = q0 + h * (qt * pe - pe * qt + bt * je - je * bt);
    skew_part(state.B);
    skew_part(state.Q);
    state.time += h;
    return report;
}

namespace {
// Advances across one interval of width h, subdividing on step failure.
StepReport advance_interval(TqgState& state, const StaticData& sd, double h,
                            const SimConfig& config, int halvings_left) {
    try {
        return step(state, sd, h, config.fp_tol, config.fp_max_iter);
    } catch (const StepFailure&) {
        if (halvings_left == 0) throw;
    }
    const TqgState saved = state;
    try {
        StepReport combined = advance_interval(state, sd, 0.5 * h, config,
                                               halvings_left - 1);
        const StepReport second =
            advance_interval(state, sd, 0.5 * h, config, halvings_left - 1);
        combined.iterations += second.iterations;
        combined.residual = std::max(combined.residual, second.residual);
        return combined;
    } catch (const StepFailure&) {
        state = saved;
        throw;
    }
}
}  // namespace

TqgState integrate(TqgState state, const StaticData& sd, const SimConfig& config,
                   const IntegrationSinks& sinks) {
    config.validate();
    const double h = config.dt;
    const double t0 = state.time;
    long total = 0;
    if (config.t_final > t0) {
        total = static_cast<long>(std::ceil((config.t_final - t0) / h - 1e-9));
    }
    // Global step index keeps output cadences aligned across resumed runs.
    const long k0 = std::llround(t0 / h);

    auto emit_diagnostics = [&](long global, const StepReport& report) {
        if (!sinks.diagnostics) return;
        DiagnosticsRecord rec;
        rec.step = global;
        rec.time = state.time;
        rec.hamiltonian = hamiltonian(state, sd);
        casimirs(state, config.casimir_max_power, rec.casimirs_b, rec.casimirs_qb);
        rec.fp_iterations = report.iterations;
        rec.fp_residual = report.residual;
        sinks.diagnostics(rec);
    };

    if (k0 == 0) emit_diagnostics(0, StepReport{0, 0.0, true});
    for (long k = 1; k <= total; ++k) {
        const StepReport report = advance_interval(state, sd, h, config, 3);
        state.time = t0 + static_cast<double>(k) * h;  // no accumulation drift
        const long global = k0 + k;
        const bool last = (k == total);
        if (last || global % config.diag_every == 0) emit_diagnostics(global, report);
        if (sinks.snapshot &&
            ((config.snapshot_every > 0 && global % config.snapshot_every == 0) || last)) {
            sinks.snapshot(state, global);
        }
    }
    if (total == 0 && sinks.snapshot) sinks.snapshot(state, k0);
    return state;
}

}  // namespace tqg
