#pragma once

// Orchestration: single runs, parameter sweeps and figure presets, each
// leaving CSV/text outputs plus a JSON manifest with checksums and
// convergence diagnostics.

#include "flyatom/config.hpp"
#include "flyatom/observables.hpp"
#include "flyatom/output.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace flyatom {

using Logger = std::function<void(const std::string&)>;

struct Thresholds {
    double norm_drift = 1e-8;       ///< fatal
    double energy_drift = 1e-6;     ///< relative, reported
    double boundary_leakage = 1e-8; ///< reported
};

struct RunDiagnostics {
    double norm_drift = 0;       ///< max |norm(t) - norm(0)|
    double energy_drift = 0;     ///< max |E(t) - E(0)| / max(|E(0)|, E_K)
    double boundary_leakage = 0; ///< max boundary probability over records
    double gauge_transformed_max_abs = 0; ///< max |<a'^dag a'>_d - <a^dag a>_c|
    double gauge_physical_max_rel = 0;    ///< max relative gap of <X- X+> between gauges
    double physical_photons_min = 0;
    int continuity_events_coulomb = 0;
    int continuity_events_dipole = 0;
};

struct RunManifest {
    std::string label;
    std::string status = "ok"; ///< "ok" or "failed"
    std::string message;
    SimulationConfig config;
    DerivedParameters derived;
    std::string version = FLYATOM_VERSION;
    double wall_time = 0; ///< seconds
    std::vector<OutputFile> files;
    RunDiagnostics diagnostics;
    Thresholds thresholds;

    nlohmann::json to_json() const;
};

struct RunOptions {
    std::filesystem::path output_dir = "out";
    std::string label = "run";
    std::vector<std::string> observables; ///< CSV columns; empty means all
    std::optional<std::vector<double>> snapshot_times; ///< overrides config.output.snapshot_times
    bool write_files = true;
    Logger log;
};

struct Snapshot {
    long step = 0;
    double t = 0;
    WavepacketState state;
};

struct RunResult {
    RunManifest manifest;
    std::vector<TimeSeriesRecord> records;
    std::vector<Snapshot> snapshots;
};

/// Runs one configuration from t = 0 to t_end tau0. If the norm drift exceeds
/// its threshold the manifest is written with status "failed" and a
/// NumericalError is thrown.
RunResult run_single(const SimulationConfig& config, const RunOptions& options = {});

enum class SweepAxis { kinetic_energy, xi };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

struct SweepOptions {
    SweepAxis axis = SweepAxis::kinetic_energy;
    std::vector<double> values;
    std::string observable = "physical_photons";
    int parallelism = 1;
    std::filesystem::path output_dir = "out";
    std::string label = "sweep";
    Logger log;
};

struct SweepRun {
    double value = 0;
    double kinetic_energy = 0;
    double xi = 0;
    std::string status = "ok";
    std::string message;
    std::string directory; ///< relative to the sweep output directory
    double final_value = 0;
    double perturbative = 0; ///< perturbative_photon_number(eta0, Xi)
    std::vector<TimeSeriesRecord> records;
};

struct SweepResult {
    std::vector<SweepRun> runs;
    std::vector<double> times;              ///< row times of the matrix (tau0)
    std::vector<std::vector<double>> matrix; ///< [time][run]
    nlohmann::json manifest;
};

/// Independent runs over one axis, executed on `parallelism` threads. Failed
/// runs are recorded and do not stop the others. Writes a time x value matrix
/// of the chosen observable and the final-value curve with the perturbative
/// photon number alongside.
SweepResult run_sweep(const SimulationConfig& base, const SweepOptions& options);

/// log-spaced values lo..hi inclusive.
std::vector<double> log_space(double lo, double hi, int count);

struct PresetRun {
    std::string label;
    SimulationConfig config;
    std::vector<double> snapshot_times;
};

struct PresetSweep {
    SimulationConfig base;
    SweepAxis axis = SweepAxis::kinetic_energy;
    std::vector<double> values;
    std::string observable;
};

struct Preset {
    std::string name;
    std::string description;
    std::vector<PresetRun> runs;
    std::optional<PresetSweep> sweep;
};

std::vector<std::string> preset_names();
/// Throws InputError for unknown names.
Preset make_preset(const std::string& name);

struct PresetOptions {
    std::filesystem::path output_dir = "out";
    int parallelism = 1;
    int stride = 0; ///< overrides the output stride when > 0
    Logger log;
};

/// Runs every member of a preset and writes <name>_manifest.json.
nlohmann::json run_preset(const Preset& preset, const PresetOptions& options);

} // namespace flyatom
