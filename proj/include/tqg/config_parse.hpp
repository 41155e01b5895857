#pragma once

#include <string>

#include "tqg/config.hpp"

namespace tqg {

/// Parses flat key=value text ('#' starts a comment) into a validated
/// SimConfig. Required keys: n, dt, t_final, rossby, gamma, seed. Unknown
/// keys are errors. See README for the full key list and defaults.
SimConfig parse_config(const std::string& text);

SimConfig parse_config_file(const std::string& path);

/// Canonical key=value rendering (parse_config round-trips it); used to
/// persist the effective configuration into run directories.
std::string render_config(const SimConfig& config);

}  // namespace tqg
