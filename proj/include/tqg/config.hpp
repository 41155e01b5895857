#pragma once

#include <string>
#include <vector>

namespace tqg {

/// One Gaussian bump: exp(-(angular distance to center / width)^2).
/// Center in degrees (latitude in [-90, 90], longitude in [0, 360)),
/// width in radians.
struct GaussianCap {
    double lat_deg = 90.0;
    double lon_deg = 0.0;
    double width = 0.5;
    double amplitude = 1.0;
};

struct BathymetrySpec {
    enum class Kind { Zero, GaussianCaps, SpectralFile };
    Kind kind = Kind::Zero;
    std::vector<GaussianCap> caps;  // for GaussianCaps
    std::string file;               // for SpectralFile (snapshot-format, h1 block)
};

enum class InitMode { Random, BuoyancyOnly };

struct SimConfig {
    int n = 0;                 // matrix size N (required)
    double rossby = 0.0;       // Ro > 0 (required)
    double gamma = 0.0;        // Lamb parameter gamma = 4/Bu >= 0 (required)
    double dt = 0.0;           // time step > 0 (required)
    double t_final = 0.0;      // (required)
    unsigned long long seed = 0;  // (required)

    int init_lmax = 100;       // highest degree of random initial coefficients
    InitMode init_mode = InitMode::Random;
    BathymetrySpec bathymetry;
    double coriolis_scale = 1.0;  // test hook, default physical value
    double fp_tol = 1e-13;
    int fp_max_iter = 100;
    int casimir_max_power = 4;

    // Output cadences in steps; snapshot_every = 0 means final snapshot only.
    int diag_every = 1;
    int snapshot_every = 0;

    void validate() const;  // throws config errors on range violations
};

}  // namespace tqg
