#include "tqg/verification.hpp"

#include <Eigen/SparseCore>
#include <cmath>
#include <cstdio>
#include <vector>

#include "tqg/errors.hpp"
#include "tqg/integrator.hpp"
#include "tqg/legendre.hpp"
#include "tqg/sphere_transform.hpp"

namespace tqg {

namespace {
const Complex kI(0.0, 1.0);

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double xm = 0.0, ym = 0.0;
    for (int i = 0; i < n; ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= n;
    ym /= n;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        num += (x[i] - xm) * (y[i] - ym);
        den += (x[i] - xm) * (x[i] - xm);
    }
    return num / den;
}

using SparseCd = Eigen::SparseMatrix<Complex>;

SparseCd to_sparse(const Eigen::MatrixXcd& m) {
    SparseCd s = m.sparseView(1.0, 1e-300);
    s.makeCompressed();
    return s;
}

// Deterministic band-limited real test field; variant decorrelates fields.
SphereField deterministic_field(int lmax, int variant) {
    SphereField f(lmax);
    for (int l = 1; l <= lmax; ++l) {
        f.at(l, 0) = Complex(std::cos(0.7 * (l * l + variant)), 0.0);
        for (int m = 1; m <= l; ++m) {
            f.at(l, m) = Complex(std::cos(0.7 * l * l + 1.9 * m + variant),
                                 std::sin(1.3 * l + 0.5 * m * m - variant));
        }
    }
    f.enforce_reality();
    return f;
}

struct GridDerivatives {
    Eigen::MatrixXcd value, dtheta, dphi;
};

GridDerivatives synthesize_with_derivatives(const SphereField& f,
                                            const QuadratureGrid& grid) {
    const int lmax = f.lmax;
    const int nlat = grid.nlat();
    GridDerivatives out;
    out.value.resize(nlat, grid.nlon);
    out.dtheta.resize(nlat, grid.nlon);
    out.dphi.resize(nlat, grid.nlon);
    std::vector<double> plm, dplm;
    Eigen::VectorXcd gm(2 * lmax + 1), gm_dt(2 * lmax + 1);
    for (int j = 0; j < nlat; ++j) {
        legendre::table(lmax, grid.mu[j], plm);
        legendre::theta_derivative_table(lmax, grid.mu[j], plm, dplm);
        for (int m = -lmax; m <= lmax; ++m) {
            const int am = std::abs(m);
            const double csphase = (m < 0 && am % 2 != 0) ? -1.0 : 1.0;
            Complex acc(0.0, 0.0), acc_dt(0.0, 0.0);
            for (int l = am; l <= lmax; ++l) {
                acc += f.at(l, m) * plm[legendre::tri_index(l, am)];
                acc_dt += f.at(l, m) * dplm[legendre::tri_index(l, am)];
            }
            gm[m + lmax] = csphase * acc;
            gm_dt[m + lmax] = csphase * acc_dt;
        }
        for (int k = 0; k < grid.nlon; ++k) {
            const double phi = grid.phi(k);
            Complex v(0.0, 0.0), vt(0.0, 0.0), vp(0.0, 0.0);
            for (int m = -lmax; m <= lmax; ++m) {
                const Complex e = std::polar(1.0, m * phi);
                v += gm[m + lmax] * e;
                vt += gm_dt[m + lmax] * e;
                vp += gm[m + lmax] * e * Complex(0.0, double(m));
            }
            out.value(j, k) = v;
            out.dtheta(j, k) = vt;
            out.dphi(j, k) = vp;
        }
    }
    return out;
}
}  // namespace

std::string OracleReport::line() const {
    std::string s = (pass() ? "PASS " : "FAIL ") + name;
    if (!parameters.empty()) s += " [" + parameters + "]";
    for (const auto& e : entries) {
        s += "  " + e.label + "=" + fmt(e.measured) + " (<= " + fmt(e.threshold) + ")";
    }
    return s;
}

MatrixField laplacian_via_generators(const MatrixField& w,
                                     const MatrixHarmonicsBasis& basis) {
    const int n = basis.n();
    if (w.rows() != n || w.cols() != n) {
        throw size_error("matrix size mismatch with basis n=" + std::to_string(n));
    }
    MatrixField acc = MatrixField::Zero(n, n);
    const Eigen::MatrixXcd* xs[3] = {&basis.x1(), &basis.x2(), &basis.x3()};
    for (const auto* x : xs) {
        MatrixField inner = (*x) * w;
        inner.noalias() -= w * (*x);
        acc.noalias() += (*x) * inner;
        acc.noalias() -= inner * (*x);
    }
    return acc / (basis.hbar() * basis.hbar());
}

MatrixField dense_helmholtz_oracle_rhs(const MatrixField& r, const StaticData& sd) {
    const int n = sd.basis.n();
    if (n > 24) throw size_error("dense Helmholtz oracle capped at N <= 24");
    if (r.rows() != n || r.cols() != n) throw size_error("oracle size mismatch");

    const int nn = n * n;
    Eigen::MatrixXcd op(nn, nn);
    MatrixField unit = MatrixField::Zero(n, n);
    for (int col = 0; col < nn; ++col) {
        unit(col % n, col / n) = 1.0;
        MatrixField image = laplacian_via_generators(unit, sd.basis);
        if (sd.gamma != 0.0) {
            image.noalias() -= sd.gamma * jordan_product(sd.S, unit, sd.basis);
        }
        op.col(col) = Eigen::Map<const Eigen::VectorXcd>(image.data(), nn);
        unit(col % n, col / n) = 0.0;
    }
    Eigen::VectorXcd rhs_vec = Eigen::Map<const Eigen::VectorXcd>(r.data(), nn);
    Eigen::VectorXcd sol;
    if (sd.gamma == 0.0) {
        // Mean-mode convention: remove the identity component of the RHS and
        // take the minimum-norm solution, which carries no T_00 part.
        Eigen::VectorXcd null_dir =
            Eigen::Map<const Eigen::VectorXcd>(MatrixField::Identity(n, n).eval().data(), nn) /
            std::sqrt(double(n));
        rhs_vec -= null_dir * (null_dir.adjoint() * rhs_vec);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(op);
        sol = cod.solve(rhs_vec);
        sol -= null_dir * (null_dir.adjoint() * sol);
    } else {
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(op);
        sol = lu.solve(rhs_vec);
    }
    return Eigen::Map<const MatrixField>(sol.data(), n, n);
}

MatrixField dense_helmholtz_oracle(const MatrixField& q, const MatrixField& b,
                                   const StaticData& sd) {
    const MatrixField rhs =
        q - jordan_product(sd.M, b - sd.H1, sd.basis) - sd.coriolis;
    return dense_helmholtz_oracle_rhs(rhs, sd);
}

SphereField grid_product_oracle(const SphereField& f, const SphereField& g) {
    const int lmax = f.lmax + g.lmax;
    const auto grid = QuadratureGrid::for_degree(2 * lmax);
    const Eigen::MatrixXcd fv = synthesize_on_grid(f, grid);
    const Eigen::MatrixXcd gv = synthesize_on_grid(g, grid);
    return analyze_on_grid(fv.cwiseProduct(gv), grid, lmax);
}

SphereField grid_bracket_oracle(const SphereField& f, const SphereField& g) {
    const int lmax = f.lmax + g.lmax;
    const auto grid = QuadratureGrid::for_degree(2 * lmax);
    const GridDerivatives fd = synthesize_with_derivatives(f, grid);
    const GridDerivatives gd = synthesize_with_derivatives(g, grid);
    Eigen::MatrixXcd bracket(grid.nlat(), grid.nlon);
    for (int j = 0; j < grid.nlat(); ++j) {
        const double sin_theta = std::sqrt(1.0 - grid.mu[j] * grid.mu[j]);
        for (int k = 0; k < grid.nlon; ++k) {
            bracket(j, k) = (fd.dtheta(j, k) * gd.dphi(j, k) -
                             fd.dphi(j, k) * gd.dtheta(j, k)) /
                            sin_theta;
        }
    }
    return analyze_on_grid(bracket, grid, lmax);
}

OracleReport spectrum_check(int n) {
    if (n > 256) throw size_error("spectrum check capped at n <= 256");
    const auto basis = MatrixHarmonicsBasis::build(n);
    const SparseCd x1 = to_sparse(basis.x1());
    const SparseCd x2 = to_sparse(basis.x2());
    const SparseCd x3 = to_sparse(basis.x3());
    const SparseCd* xs[3] = {&x1, &x2, &x3};

    double max_eig = 0.0;
    double max_dense_gap = 0.0;
    for (int m = 0; m < n; ++m) {
        for (int l = m; l < n; ++l) {
            SparseCd t = to_sparse(basis.harmonic(l, m));
            SparseCd acc(n, n);
            for (const auto* x : xs) {
                const SparseCd inner = (*x) * t - t * (*x);
                acc = acc + SparseCd((*x) * inner - inner * (*x));
            }
            MatrixField residual =
                MatrixField(acc) / (basis.hbar() * basis.hbar());
            residual += double(l) * (l + 1.0) * MatrixField(t);
            max_eig = std::max(max_eig, residual.norm());
            if (n <= 12) {
                const MatrixField dense =
                    laplacian_via_generators(MatrixField(t), basis) +
                    double(l) * (l + 1.0) * MatrixField(t);
                max_dense_gap =
                    std::max(max_dense_gap, (dense - residual).norm());
            }
        }
    }
    double max_gram = 0.0;
    for (int m = 0; m < n; ++m) {
        const auto& v = basis.eigenvectors(m);
        const Eigen::MatrixXd gram =
            v.transpose() * v - Eigen::MatrixXd::Identity(v.cols(), v.cols());
        max_gram = std::max(max_gram, gram.cwiseAbs().maxCoeff());
    }

    OracleReport report;
    report.name = "laplacian-spectrum";
    report.parameters = "n=" + std::to_string(n);
    report.entries.push_back({"eigen_residual", max_eig, 1e-8});
    report.entries.push_back({"orthonormality", max_gram, 1e-10});
    if (n <= 12) {
        report.entries.push_back({"band_vs_dense", max_dense_gap, 1e-12});
    }
    return report;
}

OracleReport product_convergence_check(const std::vector<int>& sizes) {
    const SphereField f = deterministic_field(5, 1);
    const SphereField g = deterministic_field(5, 2);
    const SphereField expect = grid_product_oracle(f, g);
    std::vector<double> xs, ys;
    double worst = 0.0;
    for (int n : sizes) {
        const auto basis = MatrixHarmonicsBasis::build(n);
        const MatrixField w =
            jordan_product(project(f, basis), project(g, basis), basis);
        const SphereField got = reconstruct(w, basis, expect.lmax);
        const double err = (got.coeffs - expect.coeffs).norm() / expect.coeffs.norm();
        xs.push_back(std::log(double(n)));
        ys.push_back(std::log(err));
        worst = std::max(worst, err);
    }
    const double slope = fit_slope(xs, ys);
    OracleReport report;
    report.name = "product-rule-convergence";
    report.parameters = "slope=" + fmt(slope);
    report.entries.push_back({"|slope+1|", std::abs(slope + 1.0), 0.25});
    report.entries.push_back({"largest_error", worst, 1.0});
    return report;
}

OracleReport bracket_convergence_check(const std::vector<int>& sizes) {
    const SphereField f = deterministic_field(4, 3);
    const SphereField g = deterministic_field(4, 4);
    const SphereField bracket = grid_bracket_oracle(f, g);
    std::vector<double> xs, ys;
    for (int n : sizes) {
        const auto basis = MatrixHarmonicsBasis::build(n);
        const MatrixField w =
            scaled_commutator(project(f, basis), project(g, basis), basis);
        const SphereField got = reconstruct(w, basis, bracket.lmax);
        // Correspondence: (1/hbar)[p f, p g] ~ -sqrt(4pi/N) p({f, g}).
        const double factor = -std::sqrt(4.0 * M_PI / n);
        const double err = (got.coeffs - factor * bracket.coeffs).norm() /
                           (std::abs(factor) * bracket.coeffs.norm());
        xs.push_back(std::log(double(n)));
        ys.push_back(std::log(err));
    }
    const double slope = fit_slope(xs, ys);
    OracleReport report;
    report.name = "bracket-convergence";
    report.parameters = "slope=" + fmt(slope);
    report.entries.push_back({"|slope+1|", std::abs(slope + 1.0), 0.25});
    return report;
}

OracleReport helmholtz_equivalence_check(int n, const std::vector<double>& gammas,
                                         int trials, unsigned long long seed) {
    OracleReport report;
    report.name = "helmholtz-oracle-equivalence";
    report.parameters = "n=" + std::to_string(n) + " trials=" + std::to_string(trials);
    const auto basis = MatrixHarmonicsBasis::build(n);
    double worst = 0.0;
    for (double gamma : gammas) {
        SimConfig cfg;
        cfg.n = n;
        cfg.rossby = 0.01;
        cfg.gamma = gamma;
        cfg.dt = 1.0;
        cfg.t_final = 0.0;
        cfg.seed = seed;
        cfg.init_lmax = n - 1;
        StaticData sd = assemble_static(cfg, basis);
        for (int t = 0; t < trials; ++t) {
            const unsigned long long s = seed + 1000 * t + 7;
            sd.H1 = project(random_band_limited_field(s ^ 0xb0ba, n - 1), basis);
            const MatrixField q = project(random_band_limited_field(s, n - 1), basis);
            const MatrixField b =
                project(random_band_limited_field(s ^ 0xfefe, n - 1), basis);
            const MatrixField fast = sd.helmholtz_solve(q, b);
            const MatrixField slow = dense_helmholtz_oracle(q, b, sd);
            worst = std::max(worst, (fast - slow).norm() / slow.norm());
        }
    }
    report.entries.push_back({"relative_error", worst, 1e-10});
    return report;
}

void euler_reference_step(TqgState& state, const StaticData& sd, double h) {
    MatrixField qdot, bdot;
    rhs(state, sd, qdot, bdot);
    state.Q += h * qdot;
    state.B += h * bdot;
    state.time += h;
}

OracleReport order_check(const SimConfig& config, bool euler_control) {
    if (config.n > 32) throw size_error("order check capped at N <= 32");
    const StaticData sd = assemble_static(config, MatrixHarmonicsBasis::build(config.n));
    const TqgState initial = random_initial_state(config, sd.basis);
    const double t_end = config.t_final;

    auto run_midpoint = [&](double h) {
        TqgState s = initial;
        const long steps = std::lround(t_end / h);
        for (long k = 0; k < steps; ++k) step(s, sd, h, config.fp_tol, config.fp_max_iter);
        return s;
    };
    auto run_euler = [&](double h) {
        TqgState s = initial;
        const long steps = std::lround(t_end / h);
        for (long k = 0; k < steps; ++k) euler_reference_step(s, sd, h);
        return s;
    };

    const TqgState ref = run_midpoint(config.dt / 16.0);
    const double ref_norm = std::sqrt(ref.Q.squaredNorm() + ref.B.squaredNorm());
    if (ref_norm == 0.0) {
        throw numeric_error("order check is degenerate for a zero state");
    }

    auto fit = [&](auto&& runner) {
        std::vector<double> xs, ys;
        for (int k = 0; k < 3; ++k) {
            const double h = config.dt / double(1 << k);
            const TqgState s = runner(h);
            const double err = std::sqrt((s.Q - ref.Q).squaredNorm() +
                                         (s.B - ref.B).squaredNorm()) /
                               ref_norm;
            xs.push_back(std::log(h));
            ys.push_back(std::log(err));
        }
        return fit_slope(xs, ys);
    };

    const double slope = fit(run_midpoint);
    OracleReport report;
    report.name = "temporal-order";
    report.parameters = "n=" + std::to_string(config.n) + " slope=" + fmt(slope);
    report.entries.push_back({"|slope-2|", std::abs(slope - 2.0), 0.3});
    if (euler_control) {
        const double euler_slope = fit(run_euler);
        report.parameters += " euler_slope=" + fmt(euler_slope);
        report.entries.push_back({"|euler_slope-1|", std::abs(euler_slope - 1.0), 0.3});
    }
    return report;
}

std::vector<OracleReport> run_verification_suite(int n_hint) {
    std::vector<OracleReport> reports;
    reports.push_back(spectrum_check(8));
    reports.push_back(spectrum_check(std::max(8, std::min(n_hint, 256))));
    reports.push_back(product_convergence_check({16, 32, 64}));
    reports.push_back(bracket_convergence_check({16, 32, 64}));
    reports.push_back(helmholtz_equivalence_check(12, {0.0, 100.0, 1000.0}, 5, 2024));

    SimConfig order_cfg;
    order_cfg.n = 16;
    order_cfg.rossby = 0.01;
    order_cfg.gamma = 100.0;
    order_cfg.dt = 0.02;
    order_cfg.t_final = 0.4;
    order_cfg.seed = 7;
    order_cfg.init_lmax = 8;
    reports.push_back(order_check(order_cfg, /*euler_control=*/true));
    return reports;
}

}  // namespace tqg
