#include "flyatom/config_io.hpp"

#include "flyatom/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace flyatom {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object())
        throw ConfigError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("unknown configuration key '" + where + (where.empty() ? "" : ".") + it.key() + "'");
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("configuration key '") + key + "' has the wrong type");
    }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key))
        return;
    T value{};
    read(j, key, value);
    out = value;
}

} // namespace

std::string to_string(EntropyLevels levels) {
    return levels == EntropyLevels::parity_sector ? "parity_sector" : "lowest_bare";
}

EntropyLevels entropy_levels_from_string(const std::string& name) {
    if (name == "parity_sector")
        return EntropyLevels::parity_sector;
    if (name == "lowest_bare")
        return EntropyLevels::lowest_bare;
    throw ConfigError("unknown entropy_levels '" + name + "' (parity_sector | lowest_bare)");
}

SimulationConfig config_from_json(const json& j, const ParseOptions& options) {
    reject_unknown(j,
                   {"E_K", "Xi", "omega_c", "omega_a", "eta0", "mu_c", "profile", "x0", "k0", "mu_s", "dt", "t_end",
                    "n_phot", "n_guard", "grid", "output", "entropy_cut", "entropy_levels"},
                   "");
    SimulationConfig c;
    read(j, "omega_c", c.freq.omega_c);
    read(j, "omega_a", c.freq.omega_a);
    read(j, "eta0", c.coupling.eta0);
    read(j, "mu_c", c.coupling.mu_c);
    if (j.contains("profile")) {
        std::string shape;
        read(j, "profile", shape);
        try {
            c.coupling.shape = profile_shape_from_string(shape);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }
    read(j, "x0", c.x0);
    read(j, "k0", c.k0);
    read(j, "mu_s", c.mu_s);
    read(j, "dt", c.dt);
    read(j, "t_end", c.t_end);
    read(j, "n_phot", c.dims.n_phot);
    read(j, "n_guard", c.dims.n_guard);
    read(j, "entropy_cut", c.entropy_cut);
    if (j.contains("entropy_levels")) {
        std::string name;
        read(j, "entropy_levels", name);
        c.entropy_levels = entropy_levels_from_string(name);
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        reject_unknown(g, {"x_min", "x_max", "n_x"}, "grid");
        read(g, "x_min", c.grid.x_min);
        read(g, "x_max", c.grid.x_max);
        read(g, "n_x", c.grid.n_x);
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        reject_unknown(o, {"stride", "snapshot_times"}, "output");
        read(o, "stride", c.output.stride);
        read(o, "snapshot_times", c.output.snapshot_times);
    }

    if (j.contains("E_K") && j.contains("Xi"))
        throw ConfigError("give either E_K or Xi, not both");
    if (j.contains("E_K")) {
        read(j, "E_K", c.kinetic_energy);
        if (!(c.kinetic_energy > 0))
            throw ConfigError("E_K must be positive");
    } else if (j.contains("Xi")) {
        double xi = 0;
        read(j, "Xi", xi);
        c.kinetic_energy = kinetic_energy_for_xi(c, xi);
    } else if (options.require_kinetic_energy) {
        throw ConfigError("E_K (or Xi) is required");
    }

    if (c.kinetic_energy > 0) {
        validate(c);
    } else {
        // Check everything that does not depend on the kinetic energy.
        SimulationConfig probe = c;
        probe.kinetic_energy = 1.0;
        validate(probe);
    }
    return c;
}

SimulationConfig parse_config_text(const std::string& text, const ParseOptions& options) {
    json j;
    try {
        j = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object() : json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    return config_from_json(j, options);
}

SimulationConfig parse_config_file(const std::filesystem::path& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read configuration file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config_text(text.str(), options);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

json config_to_json(const SimulationConfig& c) {
    json j;
    if (c.kinetic_energy > 0)
        j["E_K"] = c.kinetic_energy;
    j["omega_c"] = c.freq.omega_c;
    j["omega_a"] = c.freq.omega_a;
    j["eta0"] = c.coupling.eta0;
    j["mu_c"] = c.coupling.mu_c;
    j["profile"] = to_string(c.coupling.shape);
    j["x0"] = c.x0;
    j["k0"] = c.k0;
    j["mu_s"] = c.mu_s;
    if (c.dt)
        j["dt"] = *c.dt;
    j["t_end"] = c.t_end;
    j["n_phot"] = c.dims.n_phot;
    j["n_guard"] = c.dims.n_guard;
    json grid;
    if (c.grid.x_min)
        grid["x_min"] = *c.grid.x_min;
    if (c.grid.x_max)
        grid["x_max"] = *c.grid.x_max;
    grid["n_x"] = c.grid.n_x;
    j["grid"] = grid;
    j["output"] = {{"stride", c.output.stride}, {"snapshot_times", c.output.snapshot_times}};
    j["entropy_cut"] = c.entropy_cut;
    j["entropy_levels"] = to_string(c.entropy_levels);
    return j;
}

json derived_to_json(const DerivedParameters& d) {
    return {{"mass", d.mass}, {"v0", d.v0},         {"Xi", d.xi},           {"tau0", d.tau0},
            {"mu_t", d.mu_t}, {"dt", d.dt},         {"n_steps", d.n_steps}, {"stride", d.stride}};
}

} // namespace flyatom
