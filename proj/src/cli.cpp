#include "tqg/cli.hpp"

#include <CLI11.hpp>
#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "tqg/config_parse.hpp"
#include "tqg/diagnostics_io.hpp"
#include "tqg/errors.hpp"
#include "tqg/integrator.hpp"
#include "tqg/quantization.hpp"
#include "tqg/snapshot.hpp"
#include "tqg/tqg_system.hpp"
#include "tqg/verification.hpp"

namespace tqg {

namespace {
namespace fs = std::filesystem;

constexpr const char* kDefaultCacheDir = "tqg_basis_cache";

/// One writer per output directory.
class DirectoryLock {
public:
    explicit DirectoryLock(const fs::path& dir) : path_(dir / ".lock") {
        const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0) {
            throw io_error("output directory is locked by another run (" +
                           path_.string() + " exists)");
        }
        ::close(fd);
    }
    ~DirectoryLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    fs::path path_;
};

std::string snapshot_name(long step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%08ld.tqgz", step);
    return buf;
}

Snapshot make_snapshot(const TqgState& state, const StaticData& sd,
                       const SimConfig& config) {
    Snapshot s;
    s.n = static_cast<std::uint32_t>(config.n);
    s.lmax = static_cast<std::uint32_t>(config.n - 1);
    s.time = state.time;
    s.rossby = config.rossby;
    s.gamma = config.gamma;
    s.coriolis_scale = config.coriolis_scale;
    s.seed = config.seed;
    s.q = reconstruct(state.Q, sd.basis, config.n - 1);
    s.b = reconstruct(state.B, sd.basis, config.n - 1);
    s.h1 = reconstruct(sd.H1, sd.basis, config.n - 1);
    s.q.enforce_reality();
    s.b.enforce_reality();
    s.h1.enforce_reality();
    return s;
}

TqgState state_from_snapshot(const Snapshot& snap, const StaticData& sd) {
    TqgState state;
    state.time = snap.time;
    state.Q = project(snap.q, sd.basis);
    state.B = project(snap.b, sd.basis);
    return state;
}

/// Runs the integration loop writing snapshots and diagnostics into `dir`.
void run_in_directory(const fs::path& dir, const SimConfig& config,
                      StaticData& sd, TqgState state, bool append_diag) {
    const long k0 = std::llround(state.time / config.dt);
    write_snapshot((dir / snapshot_name(k0)).string(),
                   make_snapshot(state, sd, config));

    DiagnosticsWriter diag((dir / "diagnostics.csv").string(),
                           config.casimir_max_power, append_diag);
    IntegrationSinks sinks;
    sinks.diagnostics = [&diag](const DiagnosticsRecord& rec) { diag.append(rec); };
    sinks.snapshot = [&](const TqgState& s, long step) {
        write_snapshot((dir / snapshot_name(step)).string(),
                       make_snapshot(s, sd, config));
    };
    integrate(std::move(state), sd, config, sinks);
}

int cmd_init(const std::string& config_path, const std::string& out_path) {
    const SimConfig config = parse_config_file(config_path);
    StaticData sd = assemble_static(config, kDefaultCacheDir);
    const TqgState state = random_initial_state(config, sd.basis);
    write_snapshot(out_path, make_snapshot(state, sd, config));
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& state_path,
            const std::string& out_dir) {
    const SimConfig config = parse_config_file(config_path);
    fs::create_directories(out_dir);
    DirectoryLock lock(out_dir);

    StaticData sd = assemble_static(config, kDefaultCacheDir);
    TqgState state;
    bool append = false;
    if (!state_path.empty()) {
        const Snapshot snap = read_snapshot(state_path);
        if (snap.n != static_cast<std::uint32_t>(config.n)) {
            throw config_error("snapshot N does not match config n");
        }
        // The snapshot is self-contained: its h1 block wins over the config
        // bathymetry.
        sd.H1 = project(snap.h1, sd.basis);
        state = state_from_snapshot(snap, sd);
        append = std::llround(state.time / config.dt) != 0;
    } else {
        state = random_initial_state(config, sd.basis);
    }

    std::ofstream cfg_copy(fs::path(out_dir) / "config.cfg");
    cfg_copy << render_config(config);
    cfg_copy.close();

    run_in_directory(out_dir, config, sd, std::move(state), append);
    return 0;
}

int cmd_resume(const std::string& out_dir) {
    const fs::path dir(out_dir);
    const SimConfig config = parse_config_file((dir / "config.cfg").string());

    long latest = -1;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        long step = 0;
        if (std::sscanf(name.c_str(), "snap_%08ld.tqgz", &step) == 1) {
            latest = std::max(latest, step);
        }
    }
    if (latest < 0) throw io_error("no snapshots found in " + out_dir);

    DirectoryLock lock(dir);
    StaticData sd = assemble_static(config, kDefaultCacheDir);
    const Snapshot snap = read_snapshot((dir / snapshot_name(latest)).string());
    sd.H1 = project(snap.h1, sd.basis);
    TqgState state = state_from_snapshot(snap, sd);

    // Drop diagnostics rows past the restart point (an interrupted run may
    // have written rows after the last snapshot).
    const fs::path diag_path = dir / "diagnostics.csv";
    bool append = false;
    if (fs::exists(diag_path)) {
        const auto rows = read_diagnostics(diag_path.string(), config.casimir_max_power);
        DiagnosticsWriter rewrite(diag_path.string(), config.casimir_max_power);
        for (const auto& r : rows) {
            if (r.step <= latest) rewrite.append(r);
        }
        append = true;
    }
    run_in_directory(dir, config, sd, std::move(state), append);
    return 0;
}

int cmd_export_grid(const std::string& state_path, const std::string& field,
                    std::optional<double> filter_alpha, int nlat, int nlon,
                    const std::string& out_path) {
    const Snapshot snap = read_snapshot(state_path);
    SphereField data;
    if (field == "q") {
        data = snap.q;
    } else if (field == "b") {
        data = snap.b;
    } else if (field == "h1") {
        data = snap.h1;
    } else if (field == "psi") {
        SimConfig cfg;
        cfg.n = static_cast<int>(snap.n);
        cfg.rossby = snap.rossby;
        cfg.gamma = snap.gamma;
        cfg.coriolis_scale = snap.coriolis_scale;
        cfg.seed = snap.seed;
        cfg.dt = 1.0;
        cfg.t_final = 0.0;
        cfg.init_lmax = 0;
        StaticData sd = assemble_static(cfg, kDefaultCacheDir);
        sd.H1 = project(snap.h1, sd.basis);
        const MatrixField p =
            sd.helmholtz_solve(project(snap.q, sd.basis), project(snap.b, sd.basis));
        data = reconstruct(p, sd.basis, cfg.n - 1);
        data.enforce_reality();
    } else {
        throw usage_error("field must be one of q, b, psi, h1");
    }
    if (filter_alpha) data = helmholtz_filter(data, *filter_alpha);

    const Eigen::MatrixXd grid = evaluate_on_grid(data, nlat, nlon);
    std::ofstream out(out_path);
    if (!out) throw io_error("cannot open grid output: " + out_path);
    out << "theta,phi,value\n";
    char buf[128];
    for (int j = 0; j < nlat; ++j) {
        const double theta = M_PI * (j + 0.5) / nlat;
        for (int k = 0; k < nlon; ++k) {
            const double phi = 2.0 * M_PI * k / nlon;
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", theta, phi,
                          grid(j, k));
            out << buf;
        }
    }
    if (!out) throw io_error("failed writing grid output: " + out_path);
    return 0;
}

int cmd_diagnose(const std::string& state_path, const std::string& config_path) {
    const SimConfig config = parse_config_file(config_path);
    const Snapshot snap = read_snapshot(state_path);
    if (snap.n != static_cast<std::uint32_t>(config.n)) {
        throw config_error("snapshot N does not match config n");
    }
    StaticData sd = assemble_static(config, kDefaultCacheDir);
    sd.H1 = project(snap.h1, sd.basis);
    const TqgState state = state_from_snapshot(snap, sd);

    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::cout << "time = " << num(state.time) << "\n";
    std::cout << "hamiltonian = " << num(hamiltonian(state, sd)) << "\n";
    std::vector<double> cb, cqb;
    casimirs(state, config.casimir_max_power, cb, cqb);
    for (std::size_t k = 0; k < cb.size(); ++k) {
        std::cout << "cas_b_" << (k + 1) << " = " << num(cb[k]) << "\n";
    }
    for (std::size_t k = 0; k < cqb.size(); ++k) {
        std::cout << "cas_qb_" << k << " = " << num(cqb[k]) << "\n";
    }
    return 0;
}

int cmd_verify(int n) {
    const auto reports = run_verification_suite(n);
    bool ok = true;
    for (const auto& r : reports) {
        std::cout << r.line() << "\n";
        ok = ok && r.pass();
    }
    return ok ? 0 : 1;
}
}  // namespace

int cli(int argc, const char* const* argv) {
    CLI::App app{"Structure-preserving thermal quasi-geostrophic simulator on the sphere"};
    app.require_subcommand(1);

    std::string config_path, state_path, out_path, out_dir, field = "q";
    int nlat = 0, nlon = 0, verify_n = 32;
    double filter_alpha = -1.0;

    auto* init = app.add_subcommand("init", "Write a seeded random initial snapshot");
    init->add_option("--config", config_path)->required();
    init->add_option("--out", out_path)->required();

    auto* run = app.add_subcommand("run", "Integrate and write snapshots + diagnostics");
    run->add_option("--config", config_path)->required();
    run->add_option("--state", state_path);
    run->add_option("--out-dir", out_dir)->required();

    auto* resume = app.add_subcommand("resume", "Continue from the latest snapshot");
    resume->add_option("--out-dir", out_dir)->required();

    auto* exportg = app.add_subcommand("export-grid", "Evaluate a field on a grid (CSV)");
    exportg->add_option("--state", state_path)->required();
    exportg->add_option("--field", field)->check(CLI::IsMember({"q", "b", "psi", "h1"}));
    exportg->add_option("--filter-alpha", filter_alpha);
    exportg->add_option("--nlat", nlat)->required();
    exportg->add_option("--nlon", nlon)->required();
    exportg->add_option("--out", out_path)->required();

    auto* diagnose = app.add_subcommand("diagnose", "Print Hamiltonian and Casimirs");
    diagnose->add_option("--state", state_path)->required();
    diagnose->add_option("--config", config_path)->required();

    auto* verify = app.add_subcommand("verify", "Run the independent oracle suite");
    verify->add_option("--n", verify_n);

    try {
        app.parse(argc, argv);
        if (init->parsed()) return cmd_init(config_path, out_path);
        if (run->parsed()) return cmd_run(config_path, state_path, out_dir);
        if (resume->parsed()) return cmd_resume(out_dir);
        if (exportg->parsed()) {
            std::optional<double> alpha;
            if (exportg->count("--filter-alpha")) alpha = filter_alpha;
            return cmd_export_grid(state_path, field, alpha, nlat, nlon, out_path);
        }
        if (diagnose->parsed()) return cmd_diagnose(state_path, config_path);
        if (verify->parsed()) return cmd_verify(verify_n);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace tqg
