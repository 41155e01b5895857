#pragma once

#include <cstdint>
#include <string>

#include "tqg/sphere_field.hpp"

namespace tqg {

/// Bit-exact simulation snapshot. Binary layout, little-endian:
///   magic "TQGZ" | u32 version=1 | u32 N | u32 lmax | f64 time | f64 rossby
///   | f64 gamma | f64 coriolis_scale | u64 seed
///   | blocks q, b, h1: (lmax+1)^2 coefficients as (re, im) f64 pairs in
///     (l, m) row-major order.
/// Header invariant: lmax = N - 1.
struct Snapshot {
    std::uint32_t n = 0;
    std::uint32_t lmax = 0;
    double time = 0.0;
    double rossby = 0.0;
    double gamma = 0.0;
    double coriolis_scale = 1.0;
    std::uint64_t seed = 0;
    SphereField q;
    SphereField b;
    SphereField h1;
};

void write_snapshot(const std::string& path, const Snapshot& snapshot);
Snapshot read_snapshot(const std::string& path);

}  // namespace tqg
