#pragma once

// JSON configuration files. All keys are optional except the kinetic energy,
// given either as "E_K" or as the adiabatic parameter "Xi"; omitted keys take
// the default parameter set. Unknown keys are rejected.
//
//   {
//     "E_K": 40,                       or "Xi": 1.27
//     "omega_c": 1, "omega_a": 1,
//     "eta0": 0.3, "mu_c": 1, "profile": "gaussian",
//     "x0": -4.1667, "k0": 62.83, "mu_s": 0.25,
//     "dt": 0.0157, "t_end": 1,
//     "n_phot": 9, "n_guard": 10,
//     "grid": {"x_min": -16.7, "x_max": 16.7, "n_x": 2048},
//     "output": {"stride": 0, "snapshot_times": [0, 0.5, 1]},
//     "entropy_cut": 4, "entropy_levels": "parity_sector"
//   }

#include "flyatom/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace flyatom {

struct ParseOptions {
    /// Sweeps supply the kinetic energy per run, so their base config may omit it.
    bool require_kinetic_energy = true;
};

std::string to_string(EntropyLevels levels);
EntropyLevels entropy_levels_from_string(const std::string& name);

/// Throws ConfigError on unknown keys, wrong types or invalid values.
SimulationConfig config_from_json(const nlohmann::json& j, const ParseOptions& options = {});
SimulationConfig parse_config_text(const std::string& text, const ParseOptions& options = {});
/// Throws IoError if the file cannot be read.
SimulationConfig parse_config_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Every field explicitly, so the result parses back to the same configuration.
nlohmann::json config_to_json(const SimulationConfig& config);

nlohmann::json derived_to_json(const DerivedParameters& derived);

} // namespace flyatom
