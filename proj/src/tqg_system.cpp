#include "tqg/tqg_system.hpp"

#include <cmath>
#include <random>

#include "tqg/errors.hpp"
#include "tqg/snapshot.hpp"
#include "tqg/sphere_transform.hpp"

namespace tqg {

namespace {
const Complex kI(0.0, 1.0);

// Deterministic standard-normal stream: mt19937_64 + Box-Muller, so results
// do not depend on the standard library's distribution implementation.
class NormalStream {
public:
    explicit NormalStream(unsigned long long seed) : gen_(seed) {}

    double next() {
        if (have_) {
            have_ = false;
            return cached_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(2.0 * M_PI * u2);
        have_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

private:
    double uniform() { return (gen_() >> 11) * 0x1.0p-53; }
    std::mt19937_64 gen_;
    bool have_ = false;
    double cached_ = 0.0;
};

SphereField random_real_field(NormalStream& stream, int lmax) {
    SphereField f(lmax);
    for (int l = 1; l <= lmax; ++l) {
        f.at(l, 0) = Complex(stream.next(), 0.0);
        for (int m = 1; m <= l; ++m) {
            const double re = stream.next();
            const double im = stream.next();
            f.at(l, m) = Complex(re, im);
        }
    }
    f.enforce_reality();
    return f;
}
}  // namespace

void SimConfig::validate() const {
    if (n < 2) throw config_error("n must be >= 2");
    if (!(rossby > 0.0)) throw config_error("rossby must be > 0");
    if (!(gamma >= 0.0)) throw config_error("gamma must be >= 0");
    if (!(dt > 0.0)) throw config_error("dt must be > 0");
    if (!std::isfinite(t_final)) throw config_error("t_final must be finite");
    if (init_lmax < 0 || init_lmax > n - 1) {
        throw config_error("init_lmax must lie in [0, n-1]");
    }
    if (!(fp_tol > 0.0)) throw config_error("fp_tol must be > 0");
    if (fp_max_iter < 1) throw config_error("fp_max_iter must be >= 1");
    if (casimir_max_power < 1) throw config_error("casimir_max_power must be >= 1");
    if (coriolis_scale < 0.0 || coriolis_scale > 1.0) {
        throw config_error("coriolis_scale must lie in [0, 1]");
    }
    if (diag_every < 1) throw config_error("diag_every must be >= 1");
    if (snapshot_every < 0) throw config_error("snapshot_every must be >= 0");
    if (bathymetry.kind == BathymetrySpec::Kind::SpectralFile &&
        bathymetry.file.empty()) {
        throw config_error("bathymetry spectral_file needs bathymetry_file");
    }
}

MatrixField StaticData::jordan_with_m(const MatrixField& x) const {
    const int n = basis.n();
    MatrixField out(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) out(k, j) = m_factor(k, j) * x(k, j);
    }
    return out;
}

StaticData assemble_static(const SimConfig& config, MatrixHarmonicsBasis basis) {
    config.validate();
    const int n = config.n;
    if (basis.n() != n) throw size_error("basis size does not match config n");

    StaticData sd;
    sd.basis = std::move(basis);
    sd.rossby = config.rossby;
    sd.gamma = config.gamma;
    sd.coriolis_scale = config.coriolis_scale;

    SphereField mu(1);
    mu.at(1, 0) = std::sqrt(4.0 * M_PI / 3.0);
    sd.M = project(mu, sd.basis);
    sd.S = jordan_product(sd.M, sd.M, sd.basis);
    sd.H1 = builtin_bathymetry(config.bathymetry, sd.basis);
    sd.coriolis = (2.0 / config.rossby) * config.coriolis_scale * sd.M;

    const double hbar = sd.basis.hbar();
    sd.m_half_.resize(n);
    sd.s_half_.resize(n);
    for (int j = 0; j < n; ++j) {
        const double sj = sd.basis.weight(j);
        sd.m_half_[j] = 0.5 * hbar * sj;
        sd.s_half_[j] = 0.5 * hbar * hbar * sj * sj;
    }

    sd.gamma_zero_ = (config.gamma == 0.0);
    sd.fact_d_.resize(n);
    sd.fact_l_.resize(n);
    for (int m = 0; m < n; ++m) {
        if (sd.gamma_zero_ && m == 0) continue;  // eigen-deflated path
        const int k = n - m;
        const auto& off = sd.basis.laplacian_off(m);
        Eigen::VectorXd a(k);
        for (int j = 0; j < k; ++j) {
            a[j] = sd.basis.laplacian_diag(m)[j] -
                   config.gamma * (sd.s_half_[j] + sd.s_half_[j + m]);
        }
        Eigen::VectorXd d(k), l(std::max(0, k - 1));
        const double floor = 1e-14 * a.cwiseAbs().maxCoeff() + 1e-300;
        d[0] = a[0];
        for (int j = 0; j + 1 < k; ++j) {
            if (std::abs(d[j]) < floor) {
                throw config_error("singular Helmholtz block at diagonal " +
                                   std::to_string(m));
            }
            l[j] = off[j] / d[j];
            d[j + 1] = a[j + 1] - off[j] * l[j];
        }
        if (std::abs(d[k - 1]) < floor) {
            throw config_error("singular Helmholtz block at diagonal " +
                               std::to_string(m));
        }
        sd.fact_d_[m] = std::move(d);
        sd.fact_l_[m] = std::move(l);
    }
    return sd;
}

StaticData assemble_static(const SimConfig& config, const std::string& basis_cache_dir) {
    return assemble_static(config,
                           MatrixHarmonicsBasis::load_or_build(config.n, basis_cache_dir));
}

MatrixField StaticData::helmholtz_solve_rhs(const MatrixField& r) const {
    const int n = basis.n();
    if (r.rows() != n || r.cols() != n) {
        throw size_error("Helmholtz right-hand side size mismatch");
    }
    MatrixField p(n, n);
    Eigen::VectorXcd v(n);
    for (int m = 0; m < n; ++m) {
        const int k = n - m;
        for (int sign = 0; sign < (m == 0 ? 1 : 2); ++sign) {
            for (int j = 0; j < k; ++j) {
                v[j] = (sign == 0) ? r(j, j + m) : r(j + m, j);
            }
            if (gamma_zero_ && m == 0) {
                // Mean-mode convention: expand in the Laplacian eigenbasis,
                // zero the l = 0 component, divide by -l(l+1).
                const auto& vec = basis.eigenvectors(0);
                Eigen::VectorXcd coeff = vec.transpose() * v.head(k);
                coeff[0] = Complex(0.0, 0.0);
                for (int i = 1; i < k; ++i) coeff[i] /= basis.eigenvalues(0)[i];
                v.head(k) = vec * coeff;
            } else {
                const auto& d = fact_d_[m];
                const auto& l = fact_l_[m];
                for (int j = 1; j < k; ++j) v[j] -= l[j - 1] * v[j - 1];
                for (int j = 0; j < k; ++j) v[j] /= d[j];
                for (int j = k - 2; j >= 0; --j) v[j] -= l[j] * v[j + 1];
            }
            for (int j = 0; j < k; ++j) {
                if (sign == 0)
                    p(j, j + m) = v[j];
                else
                    p(j + m, j) = v[j];
            }
        }
    }
    return p;
}

MatrixField StaticData::helmholtz_solve(const MatrixField& q,
                                        const MatrixField& b) const {
    const int n = basis.n();
    if (q.rows() != n || b.rows() != n || q.cols() != n || b.cols() != n) {
        throw size_error("state size does not match basis");
    }
    MatrixField rhs = q - jordan_with_m(b - H1) - coriolis;
    return helmholtz_solve_rhs(rhs);
}

MatrixField StaticData::helmholtz_apply(const MatrixField& p) const {
    MatrixField out = laplacian_apply(p, basis);
    const int n = basis.n();
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) out(k, j) -= gamma * s_factor(k, j) * p(k, j);
    }
    return out;
}

MatrixField source_current(const MatrixField& p, const StaticData& sd) {
    if (p.rows() != sd.basis.n() || p.cols() != sd.basis.n()) {
        throw size_error("stream matrix size mismatch");
    }
    return sd.H1 - sd.jordan_with_m(p);
}

void rhs(const TqgState& state, const StaticData& sd, MatrixField& qdot,
         MatrixField& bdot) {
    const MatrixField p = sd.helmholtz_solve(state.Q, state.B);
    const MatrixField j = source_current(p, sd);
    qdot = scaled_commutator(state.Q, p, sd.basis);
    qdot += scaled_commutator(state.B, j, sd.basis);
    bdot = scaled_commutator(state.B, p, sd.basis);
}

double hamiltonian(const TqgState& state, const StaticData& sd) {
    const MatrixField r =
        state.Q - sd.coriolis + sd.jordan_with_m(sd.H1 - state.B);
    const MatrixField p = sd.helmholtz_solve_rhs(r);
    const Complex h = 0.5 * r.conjugate().cwiseProduct(p).sum() +
                      state.B.conjugate().cwiseProduct(sd.H1).sum();
    const double scale =
        std::abs(h.real()) + r.norm() * p.norm() + state.B.norm() * sd.H1.norm();
    if (std::abs(h.imag()) > 1e-11 * std::max(1.0, scale)) {
        throw numeric_error("Hamiltonian has a non-negligible imaginary part");
    }
    return h.real();
}

void casimirs(const TqgState& state, int max_power, std::vector<double>& casimirs_b,
              std::vector<double>& casimirs_qb, double* imag_residual) {
    const int n = static_cast<int>(state.B.rows());
    const double pref = 4.0 * M_PI / n;
    casimirs_b.assign(max_power, 0.0);
    casimirs_qb.assign(max_power + 1, 0.0);
    double worst = 0.0;

    // i^{-k} for k = 0..3.
    const Complex phase[4] = {Complex(1, 0), Complex(0, -1), Complex(-1, 0),
                              Complex(0, 1)};
    auto record = [&](Complex phased, double scale, double* out) {
        worst = std::max(worst, std::abs(phased.imag()) / std::max(1.0, scale));
        *out = pref * phased.real();
    };

    record(phase[1] * state.Q.trace(), state.Q.norm(), &casimirs_qb[0]);
    MatrixField bk = state.B;
    const double bnorm = state.B.norm();
    const double qnorm = state.Q.norm();
    for (int k = 1; k <= max_power; ++k) {
        if (k > 1) bk = MatrixField(bk * state.B);
        const Complex trb = bk.trace();
        const Complex trqb = state.Q.cwiseProduct(bk.transpose()).sum();
        const double bscale = std::pow(bnorm, k);
        record(phase[k % 4] * trb, bscale, &casimirs_b[k - 1]);
        record(phase[(k + 1) % 4] * trqb, qnorm * bscale, &casimirs_qb[k]);
    }
    if (imag_residual) *imag_residual = worst;
}

SphereField random_band_limited_field(unsigned long long seed, int lmax) {
    NormalStream stream(seed);
    return random_real_field(stream, lmax);
}

TqgState random_initial_state(const SimConfig& config,
                              const MatrixHarmonicsBasis& basis) {
    if (config.init_lmax > basis.n() - 1) {
        throw config_error("init_lmax exceeds n-1");
    }
    NormalStream q_stream(config.seed);
    NormalStream b_stream(config.seed ^ 0x517cc1b727220a95ULL);

    TqgState state;
    state.time = 0.0;
    const SphereField qf = random_real_field(q_stream, config.init_lmax);
    const SphereField bf = random_real_field(b_stream, config.init_lmax);
    state.Q = (config.init_mode == InitMode::BuoyancyOnly)
                  ? MatrixField::Zero(basis.n(), basis.n())
                  : project(qf, basis);
    state.B = project(bf, basis);
    return state;
}

SphereField helmholtz_filter(const SphereField& f, double alpha) {
    if (alpha < 0.0) throw config_error("filter alpha must be >= 0");
    SphereField out = f;
    for (int l = 0; l <= f.lmax; ++l) {
        const double factor = 1.0 / (1.0 + alpha * alpha * l * (l + 1.0));
        for (int m = -l; m <= l; ++m) out.at(l, m) *= factor;
    }
    return out;
}

MatrixField builtin_bathymetry(const BathymetrySpec& spec,
                               const MatrixHarmonicsBasis& basis) {
    const int n = basis.n();
    switch (spec.kind) {
        case BathymetrySpec::Kind::Zero:
            return MatrixField::Zero(n, n);
        case BathymetrySpec::Kind::GaussianCaps: {
            if (spec.caps.empty()) {
                throw config_error("gaussian_caps bathymetry needs parameters");
            }
            const int lmax = std::min(n - 1, 128);
            const auto grid = QuadratureGrid::for_degree(2 * lmax);
            SphereField f = analyze_function(
                [&spec](double theta, double phi) {
                    double v = 0.0;
                    for (const auto& cap : spec.caps) {
                        const double tc = M_PI / 2.0 - cap.lat_deg * M_PI / 180.0;
                        const double pc = cap.lon_deg * M_PI / 180.0;
                        double c = std::cos(tc) * std::cos(theta) +
                                   std::sin(tc) * std::sin(theta) *
                                       std::cos(phi - pc);
                        c = std::min(1.0, std::max(-1.0, c));
                        const double dist = std::acos(c);
                        const double u = dist / cap.width;
                        v += cap.amplitude * std::exp(-u * u);
                    }
                    return v;
                },
                lmax, grid);
            f.enforce_reality();
            return project(f, basis);
        }
        case BathymetrySpec::Kind::SpectralFile: {
            const Snapshot snap = read_snapshot(spec.file);
            return project(snap.h1, basis);
        }
    }
    throw config_error("unknown bathymetry kind");
}

}  // namespace tqg
