#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "tqg/errors.hpp"
#include "tqg/quantization.hpp"
#include "tqg/tqg_system.hpp"

using namespace tqg;
using Cd = std::complex<double>;

namespace {
const Cd I(0.0, 1.0);

SimConfig make_config(int n, double gamma, double coriolis_scale = 1.0) {
    SimConfig c;
    c.n = n;
    c.rossby = 0.01;
    c.gamma = gamma;
    c.dt = 0.01;
    c.t_final = 1.0;
    c.seed = 12345;
    c.init_lmax = n - 1;
    c.coriolis_scale = coriolis_scale;
    return c;
}

StaticData make_static(const SimConfig& c) {
    return assemble_static(c, MatrixHarmonicsBasis::build(c.n));
}

MatrixField unit_of_product(const MatrixHarmonicsBasis& b) {
    SphereField one(0);
    one.at(0, 0) = std::sqrt(4.0 * M_PI);
    return project(one, b);
}

double offdiag_norm(const MatrixField& w) {
    MatrixField copy = w;
    copy.diagonal().setZero();
    return copy.norm();
}
}  // namespace

TEST_CASE("assemble_static: M and S match the Legendre expansion of mu, mu^2") {
    for (int n : {8, 24, 48}) {
        const StaticData sd = make_static(make_config(n, 100.0));

        CHECK(offdiag_norm(sd.M) == 0.0);
        CHECK(offdiag_norm(sd.S) == 0.0);
        CHECK(sd.M.diagonal().real().norm() == 0.0);
        CHECK(sd.S.diagonal().real().norm() == 0.0);

        // reconstruct(M): single (1,0) coefficient sqrt(4pi/3).
        const SphereField m = reconstruct(sd.M, sd.basis, n - 1);
        CHECK(std::abs(m.at(1, 0) - std::sqrt(4.0 * M_PI / 3.0)) < 1e-12);
        SphereField m_rest = m;
        m_rest.at(1, 0) = 0.0;
        CHECK(m_rest.coeffs.norm() < 1e-12);

        // reconstruct(S): only (0,0) and (2,0); exact finite-n values
        //   c_00 = sqrt(4pi)/3
        //   c_20 = (2/3) sqrt(4pi/5) sqrt((n^2-4)/(n^2-1)),
        // approaching mu^2 = 1/3 + (2/3) P_2(mu) as n grows.
        const SphereField s = reconstruct(sd.S, sd.basis, n - 1);
        const double c00 = std::sqrt(4.0 * M_PI) / 3.0;
        const double c20 = (2.0 / 3.0) * std::sqrt(4.0 * M_PI / 5.0) *
                           std::sqrt((double(n) * n - 4.0) / (double(n) * n - 1.0));
        CHECK(std::abs(s.at(0, 0) - c00) < 1e-12);
        CHECK(std::abs(s.at(2, 0) - c20) < 1e-12);
        SphereField s_rest = s;
        s_rest.at(0, 0) = 0.0;
        s_rest.at(2, 0) = 0.0;
        CHECK(s_rest.coeffs.norm() < 1e-12);
        // Continuum limit to O(1/n).
        CHECK(std::abs(s.at(2, 0) - (2.0 / 3.0) * std::sqrt(4.0 * M_PI / 5.0)) <
              3.0 / n);
    }
}

TEST_CASE("helmholtz_solve: eigenmodes, residual, linearity, zonal balance") {
    SUBCASE("gamma=0 eigen case: P = -i T_lm / (l(l+1))") {
        const int n = 12;
        SimConfig cfg = make_config(n, 0.0, 0.0);
        const StaticData sd = make_static(cfg);
        for (int l : {1, 3, 7}) {
            for (int m : {0, 1, -2}) {
                if (std::abs(m) > l) continue;
                const MatrixField q = I * sd.basis.harmonic(l, m);
                const MatrixField p =
                    sd.helmholtz_solve(q, MatrixField::Zero(n, n));
                const MatrixField expect = -q / (double(l) * (l + 1.0));
                CHECK((p - expect).norm() < 1e-12);
            }
        }
    }

    SUBCASE("residual against the operator, random states") {
        for (double gamma : {0.0, 100.0, 1000.0}) {
            const int n = 20;
            const StaticData sd = make_static(make_config(n, gamma));
            const MatrixField q =
                project(random_band_limited_field(3, n - 1), sd.basis);
            const MatrixField b =
                project(random_band_limited_field(4, n - 1), sd.basis);
            MatrixField rhs_mat = q - sd.jordan_with_m(b - sd.H1) - sd.coriolis;
            if (gamma == 0.0) {
                // Mean-mode convention: the solve sees the RHS with its T_00
                // component removed.
                const Cd mean = rhs_mat.trace() / double(n);
                rhs_mat -= mean * MatrixField::Identity(n, n);
            }
            const MatrixField p = sd.helmholtz_solve(q, b);
            CHECK((sd.helmholtz_apply(p) - rhs_mat).norm() < 1e-10 * rhs_mat.norm());
            if (gamma == 0.0) {
                CHECK(std::abs(p.trace()) < 1e-12 * p.norm());  // no T_00 part
            }
        }
    }

    SUBCASE("linearity in the right-hand side") {
        const int n = 16;
        const StaticData sd = make_static(make_config(n, 50.0));
        const MatrixField r1 =
            project(random_band_limited_field(7, n - 1), sd.basis);
        const MatrixField r2 =
            project(random_band_limited_field(8, n - 1), sd.basis);
        const MatrixField lhs = sd.helmholtz_solve_rhs(1.5 * r1 - 0.25 * r2);
        const MatrixField rhs_comb =
            1.5 * sd.helmholtz_solve_rhs(r1) - 0.25 * sd.helmholtz_solve_rhs(r2);
        CHECK((lhs - rhs_comb).norm() < 1e-11 * rhs_comb.norm());
    }

    SUBCASE("coriolis-only balance is zonal") {
        const int n = 18;
        const StaticData sd = make_static(make_config(n, 100.0));
        const MatrixField p = sd.helmholtz_solve(MatrixField::Zero(n, n),
                                                 MatrixField::Zero(n, n));
        CHECK(p.norm() > 0.0);
        CHECK(offdiag_norm(p) < 1e-13 * p.norm());
    }
}

TEST_CASE("source_current") {
    const int n = 10;
    StaticData sd = make_static(make_config(n, 100.0));
    const MatrixField zero = MatrixField::Zero(n, n);

    CHECK(source_current(zero, sd).norm() == 0.0);  // H1 = 0 default

    const MatrixField j = source_current(unit_of_product(sd.basis), sd);
    CHECK((j + sd.M).norm() < 1e-13 * sd.M.norm());

    sd.H1 = project(random_band_limited_field(17, n - 1), sd.basis);
    CHECK((source_current(zero, sd) - sd.H1).norm() == 0.0);
}

TEST_CASE("rhs: QG reduction, steady zonal balance, tracelessness") {
    const int n = 12;
    const StaticData sd = make_static(make_config(n, 100.0));

    SUBCASE("constant buoyancy decouples: Bdot = 0 and [B, J] = 0") {
        TqgState state;
        state.Q = project(random_band_limited_field(21, n - 1), sd.basis);
        state.B = 0.7 * unit_of_product(sd.basis);
        MatrixField qdot, bdot;
        rhs(state, sd, qdot, bdot);
        CHECK(bdot.norm() < 1e-12 * state.B.norm());
        const MatrixField p = sd.helmholtz_solve(state.Q, state.B);
        const MatrixField j = source_current(p, sd);
        CHECK(scaled_commutator(state.B, j, sd.basis).norm() <
              1e-12 * state.B.norm() * j.norm());
    }

    SUBCASE("zero state under coriolis stays steady") {
        TqgState state;
        state.Q = MatrixField::Zero(n, n);
        state.B = MatrixField::Zero(n, n);
        MatrixField qdot, bdot;
        rhs(state, sd, qdot, bdot);
        CHECK(qdot.norm() == 0.0);
        CHECK(bdot.norm() == 0.0);
    }

    SUBCASE("commutator updates are traceless and skew") {
        TqgState state;
        state.Q = project(random_band_limited_field(23, n - 1), sd.basis);
        state.B = project(random_band_limited_field(24, n - 1), sd.basis);
        MatrixField qdot, bdot;
        rhs(state, sd, qdot, bdot);
        const double scale = state.Q.norm() + state.B.norm();
        CHECK(std::abs(qdot.trace()) < 1e-12 * scale * scale);
        CHECK(std::abs(bdot.trace()) < 1e-12 * scale * scale);
        CHECK((qdot + qdot.adjoint()).norm() < 1e-13 * qdot.norm());
        CHECK((bdot + bdot.adjoint()).norm() < 1e-13 * bdot.norm());
    }
}

TEST_CASE("hamiltonian: special values and conservation identities") {
    SUBCASE("empty system has zero energy") {
        const int n = 8;
        const StaticData sd = make_static(make_config(n, 100.0, 0.0));
        TqgState state;
        state.Q = MatrixField::Zero(n, n);
        state.B = MatrixField::Zero(n, n);
        CHECK(hamiltonian(state, sd) == 0.0);
    }

    SUBCASE("B = H1 = 0 reduces to the QG energy") {
        const int n = 14;
        const StaticData sd = make_static(make_config(n, 100.0));
        TqgState state;
        state.Q = project(random_band_limited_field(31, n - 1), sd.basis);
        state.B = MatrixField::Zero(n, n);
        const MatrixField r = state.Q - sd.coriolis;
        const MatrixField p = sd.helmholtz_solve_rhs(r);
        const double expect = 0.5 * r.conjugate().cwiseProduct(p).sum().real();
        CHECK(hamiltonian(state, sd) == doctest::Approx(expect).epsilon(1e-13));
    }

    SUBCASE("directional derivative of H along the flow vanishes") {
        for (int n : {8, 16}) {
            SimConfig cfg = make_config(n, 100.0);
            cfg.bathymetry.kind = BathymetrySpec::Kind::GaussianCaps;
            cfg.bathymetry.caps = {{35.0, 120.0, 0.6, 0.8}};
            const StaticData sd = make_static(cfg);
            TqgState state;
            state.Q = project(random_band_limited_field(41 + n, n - 1), sd.basis);
            state.B = project(random_band_limited_field(42 + n, n - 1), sd.basis);
            MatrixField qdot, bdot;
            rhs(state, sd, qdot, bdot);

            // dH/dt = Re tr(P^dag (Qdot - M (.) Bdot)) + Re tr(Bdot^dag H1),
            // using self-adjointness of the Helmholtz operator.
            const MatrixField p = sd.helmholtz_solve(state.Q, state.B);
            const double t1 =
                p.conjugate().cwiseProduct(qdot - sd.jordan_with_m(bdot)).sum().real();
            const double t2 = bdot.conjugate().cwiseProduct(sd.H1).sum().real();
            const double scale = p.norm() * (qdot.norm() + bdot.norm()) +
                                 bdot.norm() * sd.H1.norm();
            CHECK(std::abs(t1 + t2) < 1e-10 * scale);

            // Finite-difference cross-check of the same derivative.
            const double eps = 1e-6 / std::max(1.0, qdot.norm() + bdot.norm());
            TqgState plus{0.0, state.Q + eps * qdot, state.B + eps * bdot};
            TqgState minus{0.0, state.Q - eps * qdot, state.B - eps * bdot};
            const double fd =
                (hamiltonian(plus, sd) - hamiltonian(minus, sd)) / (2.0 * eps);
            const double href = std::abs(hamiltonian(state, sd)) + scale;
            CHECK(std::abs(fd) < 1e-5 * href);
        }
    }

    SUBCASE("Casimir directional derivatives vanish along the flow") {
        const int n = 16;
        SimConfig cfg = make_config(n, 100.0);
        cfg.bathymetry.kind = BathymetrySpec::Kind::GaussianCaps;
        cfg.bathymetry.caps = {{-20.0, 45.0, 0.8, 1.2}};
        const StaticData sd = make_static(cfg);
        TqgState state;
        state.Q = project(random_band_limited_field(51, n - 1), sd.basis);
        state.B = project(random_band_limited_field(52, n - 1), sd.basis);
        MatrixField qdot, bdot;
        rhs(state, sd, qdot, bdot);

        const double bn = state.B.norm(), qn = state.Q.norm();
        MatrixField bpow = MatrixField::Identity(n, n);
        for (int k = 1; k <= 4; ++k) {
            // d/dt tr(B^k) = k tr(B^{k-1} Bdot)
            const Cd db =
                double(k) * bpow.cwiseProduct(bdot.transpose()).sum();
            CHECK(std::abs(db) <
                  1e-11 * k * std::pow(bn, k - 1) * bdot.norm() + 1e-14);
            // d/dt tr(Q B^k) = tr(Qdot B^k) + sum_j tr(Q B^j Bdot B^{k-j-1})
            MatrixField bk = bpow * state.B;
            Cd dqb = qdot.cwiseProduct(bk.transpose()).sum();
            for (int j = 0; j < k; ++j) {
                MatrixField mid = state.Q;
                for (int t = 0; t < j; ++t) mid = MatrixField(mid * state.B);
                mid = MatrixField(mid * bdot);
                for (int t = 0; t < k - 1 - j; ++t) mid = MatrixField(mid * state.B);
                dqb += mid.trace();
            }
            const double scale =
                qn * std::pow(bn, k) + k * qn * std::pow(bn, k - 1) * bdot.norm() +
                qdot.norm() * std::pow(bn, k);
            CHECK(std::abs(dqb) < 1e-11 * scale + 1e-14);
            bpow = std::move(bk);
        }
    }
}

TEST_CASE("casimirs: conventions and an eigen-decomposition cross-check") {
    const int n = 16;
    const auto basis = MatrixHarmonicsBasis::build(n);

    SUBCASE("pure T_00 buoyancy: tr(B^2) = -beta^2") {
        const double beta = 1.7;
        TqgState state;
        state.B = I * beta * MatrixField(basis.harmonic(0, 0));
        state.Q = MatrixField::Zero(n, n);
        const Cd tr2 = (state.B * state.B).trace();
        CHECK(std::abs(tr2 - Cd(-beta * beta, 0.0)) < 1e-13);
        std::vector<double> cb, cqb;
        casimirs(state, 2, cb, cqb);
        // Reported value: (4pi/N) Re(i^{-2} tr(B^2)) = (4pi/N) beta^2.
        CHECK(cb[1] ==
              doctest::Approx(4.0 * M_PI / n * beta * beta).epsilon(1e-12));
    }

    SUBCASE("phased traces are real; tr(Q B^2) matches the eigen route") {
        TqgState state;
        state.Q = project(random_band_limited_field(61, n - 1), basis);
        state.B = project(random_band_limited_field(62, n - 1), basis);
        double resid = 0.0;
        std::vector<double> cb, cqb;
        casimirs(state, 4, cb, cqb, &resid);
        CHECK(resid < 1e-11);

        // Diagonalize B = U D U^dag and compare tr(Q B^2).
        Eigen::ComplexEigenSolver<MatrixField> es(state.B);
        const MatrixField qu =
            es.eigenvectors().adjoint() * state.Q * es.eigenvectors();
        Cd tr(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            tr += qu(i, i) * es.eigenvalues()[i] * es.eigenvalues()[i];
        }
        const Cd direct =
            state.Q.cwiseProduct((state.B * state.B).transpose()).sum();
        CHECK(std::abs(tr - direct) <
              1e-11 * state.Q.norm() * state.B.norm() * state.B.norm());
    }
}

TEST_CASE("random_initial_state: determinism and structure") {
    const int n = 20;
    const auto basis = MatrixHarmonicsBasis::build(n);
    SimConfig cfg = make_config(n, 100.0);
    cfg.init_lmax = 12;

    const TqgState a = random_initial_state(cfg, basis);
    const TqgState b = random_initial_state(cfg, basis);
    CHECK((a.Q - b.Q).norm() == 0.0);
    CHECK((a.B - b.B).norm() == 0.0);

    SimConfig other = cfg;
    other.seed += 1;
    const TqgState c = random_initial_state(other, basis);
    CHECK((a.Q - c.Q).norm() > 0.0);

    SimConfig zero_cfg = cfg;
    zero_cfg.init_lmax = 0;
    const TqgState z = random_initial_state(zero_cfg, basis);
    CHECK(z.Q.norm() == 0.0);
    CHECK(z.B.norm() == 0.0);

    CHECK((a.Q + a.Q.adjoint()).norm() <= 1e-13 * a.Q.norm());
    CHECK((a.B + a.B.adjoint()).norm() <= 1e-13 * a.B.norm());

    // buoyancy_only zeroes Q but leaves the B stream untouched.
    SimConfig bo = cfg;
    bo.init_mode = InitMode::BuoyancyOnly;
    const TqgState bos = random_initial_state(bo, basis);
    CHECK(bos.Q.norm() == 0.0);
    CHECK((bos.B - a.B).norm() == 0.0);

    // The mean mode stays empty.
    CHECK(std::abs(a.Q.trace()) < 1e-13 * a.Q.norm());
}

TEST_CASE("helmholtz_filter") {
    const SphereField f = random_band_limited_field(71, 70);

    const SphereField same = helmholtz_filter(f, 0.0);
    CHECK((same.coeffs - f.coeffs).norm() == 0.0);

    const double alpha = 1.0 / 64.0;
    const SphereField g = helmholtz_filter(f, alpha);
    CHECK(g.at(0, 0) == f.at(0, 0));
    // l = 64 attenuation: 1/(1 + 64*65/4096) = 0.496 to 3 s.f.
    const double expect = 1.0 / (1.0 + alpha * alpha * 64.0 * 65.0);
    CHECK(expect == doctest::Approx(0.49612403100775193).epsilon(1e-15));
    CHECK(std::abs(g.at(64, 10) - f.at(64, 10) * expect) < 1e-15);
}

TEST_CASE("builtin_bathymetry") {
    const int n = 24;
    const auto basis = MatrixHarmonicsBasis::build(n);

    BathymetrySpec zero;
    CHECK(builtin_bathymetry(zero, basis).norm() == 0.0);

    BathymetrySpec cap;
    cap.kind = BathymetrySpec::Kind::GaussianCaps;
    cap.caps = {{90.0, 0.0, 0.7, 1.0}};  // north pole: axisymmetric
    const MatrixField h1 = builtin_bathymetry(cap, basis);
    CHECK(h1.norm() > 0.0);
    CHECK(offdiag_norm(h1) < 1e-12 * h1.norm());
    CHECK((h1 + h1.adjoint()).norm() < 1e-13 * h1.norm());

    BathymetrySpec file;
    file.kind = BathymetrySpec::Kind::SpectralFile;
    file.file = "does_not_exist.tqgz";
    CHECK_THROWS_AS(builtin_bathymetry(file, basis), Error);
}
