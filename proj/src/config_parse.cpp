#include "tqg/config_parse.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "tqg/errors.hpp"

namespace tqg {

namespace {
std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t idx = 0;
        const double v = std::stod(value, &idx);
        if (idx != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("key '" + key + "' needs a real number, got '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t idx = 0;
        const long long v = std::stoll(value, &idx);
        if (idx != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("key '" + key + "' needs an integer, got '" + value + "'");
    }
}

unsigned long long parse_seed(const std::string& value) {
    try {
        std::size_t idx = 0;
        const unsigned long long v = std::stoull(value, &idx);
        if (idx != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("key 'seed' needs a non-negative integer, got '" + value + "'");
    }
}

std::vector<GaussianCap> parse_caps(const std::string& value) {
    std::vector<GaussianCap> caps;
    std::stringstream groups(value);
    std::string group;
    while (std::getline(groups, group, ';')) {
        group = trim(group);
        if (group.empty()) continue;
        std::stringstream parts(group);
        std::string item;
        std::vector<double> nums;
        while (std::getline(parts, item, ',')) {
            nums.push_back(parse_real("bathymetry_params", trim(item)));
        }
        if (nums.size() != 4) {
            throw config_error("bathymetry_params expects lat,lon,width,amp groups");
        }
        GaussianCap cap;
        cap.lat_deg = nums[0];
        cap.lon_deg = nums[1];
        cap.width = nums[2];
        cap.amplitude = nums[3];
        if (!(cap.width > 0.0)) throw config_error("gaussian cap width must be > 0");
        caps.push_back(cap);
    }
    if (caps.empty()) throw config_error("bathymetry_params is empty");
    return caps;
}
}  // namespace

SimConfig parse_config(const std::string& text) {
    static const std::vector<std::string> known = {
        "n", "rossby", "gamma", "dt", "t_final", "seed",
        "init_lmax", "init_mode", "coriolis_scale", "fp_tol", "fp_max_iter",
        "casimir_max_power", "diag_every", "snapshot_every",
        "bathymetry", "bathymetry_params", "bathymetry_file"};

    std::map<std::string, std::string> kv;
    std::stringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("line " + std::to_string(lineno) +
                               " is not key=value: '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw config_error("unknown key '" + key + "'");
        }
        if (kv.count(key)) throw config_error("duplicate key '" + key + "'");
        if (value.empty()) throw config_error("key '" + key + "' has no value");
        kv[key] = value;
    }

    for (const char* req : {"n", "dt", "t_final", "rossby", "gamma", "seed"}) {
        if (!kv.count(req)) {
            throw config_error(std::string("missing required key '") + req + "'");
        }
    }

    SimConfig c;
    c.n = static_cast<int>(parse_int("n", kv["n"]));
    c.rossby = parse_real("rossby", kv["rossby"]);
    c.gamma = parse_real("gamma", kv["gamma"]);
    c.dt = parse_real("dt", kv["dt"]);
    c.t_final = parse_real("t_final", kv["t_final"]);
    c.seed = parse_seed(kv["seed"]);

    // The default init_lmax of 100 is clamped to the resolvable band; an
    // explicit value must fit as-is.
    c.init_lmax = kv.count("init_lmax")
                      ? static_cast<int>(parse_int("init_lmax", kv["init_lmax"]))
                      : std::min(100, c.n - 1);
    if (kv.count("init_mode")) {
        const std::string& v = kv["init_mode"];
        if (v == "random")
            c.init_mode = InitMode::Random;
        else if (v == "buoyancy_only")
            c.init_mode = InitMode::BuoyancyOnly;
        else
            throw config_error("init_mode must be 'random' or 'buoyancy_only'");
    }
    if (kv.count("coriolis_scale"))
        c.coriolis_scale = parse_real("coriolis_scale", kv["coriolis_scale"]);
    if (kv.count("fp_tol")) c.fp_tol = parse_real("fp_tol", kv["fp_tol"]);
    if (kv.count("fp_max_iter"))
        c.fp_max_iter = static_cast<int>(parse_int("fp_max_iter", kv["fp_max_iter"]));
    if (kv.count("casimir_max_power"))
        c.casimir_max_power =
            static_cast<int>(parse_int("casimir_max_power", kv["casimir_max_power"]));
    if (kv.count("diag_every"))
        c.diag_every = static_cast<int>(parse_int("diag_every", kv["diag_every"]));
    if (kv.count("snapshot_every"))
        c.snapshot_every =
            static_cast<int>(parse_int("snapshot_every", kv["snapshot_every"]));

    const std::string bathy = kv.count("bathymetry") ? kv["bathymetry"] : "none";
    if (bathy == "none" || bathy == "zero") {
        c.bathymetry.kind = BathymetrySpec::Kind::Zero;
        if (kv.count("bathymetry_params") || kv.count("bathymetry_file")) {
            throw config_error("bathymetry parameters given for bathymetry=none");
        }
    } else if (bathy == "gaussian_caps") {
        c.bathymetry.kind = BathymetrySpec::Kind::GaussianCaps;
        if (!kv.count("bathymetry_params")) {
            throw config_error("bathymetry=gaussian_caps needs bathymetry_params");
        }
        c.bathymetry.caps = parse_caps(kv["bathymetry_params"]);
    } else if (bathy == "spectral_file") {
        c.bathymetry.kind = BathymetrySpec::Kind::SpectralFile;
        if (!kv.count("bathymetry_file")) {
            throw config_error("bathymetry=spectral_file needs bathymetry_file");
        }
        c.bathymetry.file = kv["bathymetry_file"];
    } else {
        throw config_error("unknown bathymetry '" + bathy + "'");
    }

    c.validate();
    return c;
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const SimConfig& c) {
    char buf[64];
    auto real = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::string out;
    out += "n = " + std::to_string(c.n) + "\n";
    out += "rossby = " + real(c.rossby) + "\n";
    out += "gamma = " + real(c.gamma) + "\n";
    out += "dt = " + real(c.dt) + "\n";
    out += "t_final = " + real(c.t_final) + "\n";
    out += "seed = " + std::to_string(c.seed) + "\n";
    out += "init_lmax = " + std::to_string(c.init_lmax) + "\n";
    out += std::string("init_mode = ") +
           (c.init_mode == InitMode::Random ? "random" : "buoyancy_only") + "\n";
    out += "coriolis_scale = " + real(c.coriolis_scale) + "\n";
    out += "fp_tol = " + real(c.fp_tol) + "\n";
    out += "fp_max_iter = " + std::to_string(c.fp_max_iter) + "\n";
    out += "casimir_max_power = " + std::to_string(c.casimir_max_power) + "\n";
    out += "diag_every = " + std::to_string(c.diag_every) + "\n";
    out += "snapshot_every = " + std::to_string(c.snapshot_every) + "\n";
    switch (c.bathymetry.kind) {
        case BathymetrySpec::Kind::Zero:
            out += "bathymetry = none\n";
            break;
        case BathymetrySpec::Kind::GaussianCaps: {
            out += "bathymetry = gaussian_caps\n";
            out += "bathymetry_params = ";
            for (std::size_t i = 0; i < c.bathymetry.caps.size(); ++i) {
                const auto& cap = c.bathymetry.caps[i];
                if (i) out += "; ";
                out += real(cap.lat_deg) + "," + real(cap.lon_deg) + "," +
                       real(cap.width) + "," + real(cap.amplitude);
            }
            out += "\n";
            break;
        }
        case BathymetrySpec::Kind::SpectralFile:
            out += "bathymetry = spectral_file\n";
            out += "bathymetry_file = " + c.bathymetry.file + "\n";
            break;
    }
    return out;
}

}  // namespace tqg
