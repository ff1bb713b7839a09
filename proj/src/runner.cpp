#include "flyatom/runner.hpp"

#include "flyatom/config_io.hpp"
#include "flyatom/errors.hpp"
#include "flyatom/perturbation.hpp"
#include "flyatom/propagator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

namespace flyatom {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void say(const Logger& log, const std::string& msg) {
    if (log)
        log(msg);
}

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "t%.4f", t);
    return buf;
}

json observable_units() {
    return {{"norm", "dimensionless"},
            {"energy", "omega_c (Coulomb gauge, p^2/2m + H_R)"},
            {"mean_x", "mu_c"},
            {"mean_p", "k0"},
            {"kinetic_energy", "omega_c"},
            {"bare_photons", "<a^dag a>, Coulomb gauge"},
            {"bare_photons_dipole", "<a^dag a> of T psi, dipole gauge"},
            {"transformed_photons_dipole", "<a'^dag a'> with a' = T a T^dag, dipole gauge"},
            {"physical_photons", "<X- X+>, Coulomb-gauge representation"},
            {"physical_photons_dipole", "<X- X+>, dipole-gauge representation"},
            {"entropy", "von Neumann, log base entropy_cut"},
            {"pop_g0", "probability"},
            {"pop_e1", "probability"},
            {"pop_g2", "probability"},
            {"pop_e3", "probability"},
            {"boundary_probability", "probability within 1/16 of the domain of either edge"}};
}

} // namespace

json RunManifest::to_json() const {
    const RunDiagnostics& d = diagnostics;
    json files_json = json::array();
    for (const auto& f : files)
        files_json.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return {
        {"label", label},
        {"status", status},
        {"message", message},
        {"version", version},
        {"wall_time_s", wall_time},
        {"config", config_to_json(config)},
        {"derived", derived_to_json(derived)},
        {"files", files_json},
        {"diagnostics",
         {{"norm_drift", d.norm_drift},
          {"energy_drift", d.energy_drift},
          {"boundary_leakage", d.boundary_leakage},
          {"gauge_transformed_max_abs", d.gauge_transformed_max_abs},
          {"gauge_physical_max_rel", d.gauge_physical_max_rel},
          {"physical_photons_min", d.physical_photons_min},
          {"continuity_events", {{"coulomb", d.continuity_events_coulomb}, {"dipole", d.continuity_events_dipole}}},
          {"thresholds",
           {{"norm_drift", thresholds.norm_drift},
            {"energy_drift", thresholds.energy_drift},
            {"boundary_leakage", thresholds.boundary_leakage}}},
          {"within_thresholds",
           {{"norm_drift", d.norm_drift < thresholds.norm_drift},
            {"energy_drift", d.energy_drift < thresholds.energy_drift},
            {"boundary_leakage", d.boundary_leakage < thresholds.boundary_leakage}}}}},
    };
}

RunResult run_single(const SimulationConfig& config, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    validate(config);
    RunResult result;
    RunManifest& m = result.manifest;
    m.label = options.label;
    m.config = config;
    m.derived = derive_parameters(config);
    if (options.snapshot_times)
        m.config.output.snapshot_times = *options.snapshot_times;
    validate(m.config);

    std::vector<std::string> columns = options.observables;
    if (columns.empty())
        columns.assign(observable_names.begin(), observable_names.end());
    for (const auto& c : columns)
        observable_index(c);

    const Grid grid = Grid::from_config(config);
    say(options.log, options.label + ": E_K=" + format_double(config.kinetic_energy) + " Xi=" +
                         format_double(m.derived.xi) + " steps=" + std::to_string(m.derived.n_steps));
    SplitStepPropagator propagator(grid, config, m.derived.dt);
    const ObservableContext context(grid, config, propagator.shared_spectra());
    m.diagnostics.continuity_events_coulomb = context.continuity_events(Gauge::coulomb);
    m.diagnostics.continuity_events_dipole = context.continuity_events(Gauge::dipole);

    WavepacketState state = initial_state(grid, config);
    const EvolutionPlan plan = EvolutionPlan::from(m.derived, m.config.output.snapshot_times);
    evolve(
        state, propagator, plan,
        [&](const WavepacketState& s, long step, double t) { result.records.push_back(context.measure(s, step, t)); },
        [&](const WavepacketState& s, long step, double t) { result.snapshots.push_back({step, t, s}); });

    RunDiagnostics& d = m.diagnostics;
    const TimeSeriesRecord& first = result.records.front();
    const double e0 = first["energy"];
    const double energy_scale = std::max(std::abs(e0), config.kinetic_energy);
    d.physical_photons_min = first["physical_photons"];
    for (const auto& r : result.records) {
        d.norm_drift = std::max(d.norm_drift, std::abs(r["norm"] - first["norm"]));
        d.energy_drift = std::max(d.energy_drift, std::abs(r["energy"] - e0) / energy_scale);
        d.boundary_leakage = std::max(d.boundary_leakage, r["boundary_probability"]);
        d.gauge_transformed_max_abs =
            std::max(d.gauge_transformed_max_abs, std::abs(r["transformed_photons_dipole"] - r["bare_photons"]));
        const double pc = r["physical_photons"], pd = r["physical_photons_dipole"];
        d.gauge_physical_max_rel = std::max(d.gauge_physical_max_rel, std::abs(pc - pd) / std::max(std::abs(pc), 1e-12));
        d.physical_photons_min = std::min({d.physical_photons_min, pc, pd});
    }
    if (!(d.norm_drift <= m.thresholds.norm_drift)) {
        m.status = "failed";
        m.message = "norm drift " + format_double(d.norm_drift) + " exceeds " + format_double(m.thresholds.norm_drift);
    }

    if (options.write_files) {
        const fs::path dir = options.output_dir;
        std::vector<fs::path> written;
        const fs::path csv = dir / (options.label + "_timeseries.csv");
        write_text(csv, time_series_csv(result.records, columns));
        written.push_back(csv);
        const fs::path sidecar = dir / (options.label + "_timeseries.json");
        json units = observable_units();
        json selected = json::object();
        for (const auto& c : columns)
            selected[c] = units[c];
        write_json(sidecar, {{"columns", json::array({"step", "t"})},
                             {"observables", selected},
                             {"time_unit", "tau0 = |2 x0 / v0|"},
                             {"version", m.version},
                             {"config", config_to_json(m.config)},
                             {"derived", derived_to_json(m.derived)}});
        written.push_back(sidecar);
        for (const auto& snap : result.snapshots) {
            const fs::path p = dir / (options.label + "_snapshot_" + time_tag(snap.t) + ".txt");
            write_text(p, snapshot_text(snap.state, grid, config.dims));
            written.push_back(p);
        }
        for (const auto& p : written)
            m.files.push_back(inventory_entry(dir, p));
    }
    m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (options.write_files)
        write_json(fs::path(options.output_dir) / (options.label + "_manifest.json"), m.to_json());
    char took[32];
    std::snprintf(took, sizeof took, "%.1f", m.wall_time);
    say(options.log, options.label + ": done in " + took + " s, status " + m.status);
    if (m.status != "ok")
        throw NumericalError(options.label + ": " + m.message);
    return result;
}

std::string to_string(SweepAxis axis) {
    return axis == SweepAxis::kinetic_energy ? "E_K" : "Xi";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "E_K" || name == "ek" || name == "EK")
        return SweepAxis::kinetic_energy;
    if (name == "Xi" || name == "xi")
        return SweepAxis::xi;
    throw InputError("unknown sweep axis '" + name + "' (E_K | Xi)");
}

std::vector<double> log_space(double lo, double hi, int count) {
    if (count < 1 || !(lo > 0) || !(hi >= lo))
        throw InputError("log_space needs 0 < lo <= hi and count >= 1");
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i)
        v[i] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    return v;
}

SweepResult run_sweep(const SimulationConfig& base, const SweepOptions& options) {
    if (options.values.empty())
        throw InputError("sweep needs at least one value");
    for (std::size_t i = 0; i < options.values.size(); ++i) {
        if (!std::isfinite(options.values[i]) || !(options.values[i] > 0))
            throw InputError("sweep values must be finite and positive");
        if (i > 0 && !(options.values[i] > options.values[i - 1]))
            throw InputError("sweep values must be strictly increasing");
    }
    const int obs = observable_index(options.observable);
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = options.output_dir;

    SweepResult result;
    result.runs.resize(options.values.size());
    for (std::size_t i = 0; i < options.values.size(); ++i) {
        SweepRun& r = result.runs[i];
        r.value = options.values[i];
        r.kinetic_energy =
            options.axis == SweepAxis::kinetic_energy ? r.value : kinetic_energy_for_xi(base, r.value);
        char name[64];
        std::snprintf(name, sizeof name, "%s_%03zu", to_string(options.axis).c_str(), i);
        r.directory = (fs::path(options.label) / name).generic_string();
    }

    std::mutex log_mutex;
    Logger log = [&](const std::string& msg) {
        if (!options.log)
            return;
        std::lock_guard lock(log_mutex);
        options.log(msg);
    };
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < result.runs.size(); i = next++) {
            SweepRun& r = result.runs[i];
            SimulationConfig c = base;
            c.kinetic_energy = r.kinetic_energy;
            c.output.snapshot_times.clear();
            RunOptions ro;
            ro.output_dir = dir / r.directory;
            ro.label = "run";
            ro.log = [&log, &r](const std::string& msg) { log(r.directory + " " + msg); };
            try {
                r.xi = derive_parameters(c).xi;
                r.perturbative = c.coupling.eta0 > 0 ? perturbative_photon_number(c.coupling.eta0, r.xi) : 0.0;
                RunResult rr = run_single(c, ro);
                r.records = std::move(rr.records);
                r.final_value = r.records.back().values[obs];
            } catch (const std::exception& e) {
                r.status = "failed";
                r.message = e.what();
                r.final_value = std::nan("");
                log(r.directory + ": " + r.message);
            }
        }
    };
    const int threads = std::clamp(options.parallelism, 1, static_cast<int>(result.runs.size()));
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < threads; ++t)
            pool.emplace_back(worker);
        worker();
    }

    // Time grid of the first successful run; others are interpolated only if their grid differs.
    const SweepRun* reference = nullptr;
    for (const auto& r : result.runs)
        if (r.status == "ok") {
            reference = &r;
            break;
        }
    if (reference)
        for (const auto& rec : reference->records)
            result.times.push_back(rec.t);
    result.matrix.assign(result.times.size(), std::vector<double>(result.runs.size(), std::nan("")));
    for (std::size_t c = 0; c < result.runs.size(); ++c) {
        const SweepRun& r = result.runs[c];
        if (r.status != "ok")
            continue;
        const bool same = r.records.size() == result.times.size() &&
                          std::equal(r.records.begin(), r.records.end(), result.times.begin(),
                                     [](const TimeSeriesRecord& a, double t) { return a.t == t; });
        for (std::size_t k = 0; k < result.times.size(); ++k) {
            if (same) {
                result.matrix[k][c] = r.records[k].values[obs];
                continue;
            }
            const double t = result.times[k];
            auto hi = std::lower_bound(r.records.begin(), r.records.end(), t,
                                       [](const TimeSeriesRecord& a, double v) { return a.t < v; });
            if (hi == r.records.end()) {
                result.matrix[k][c] = r.records.back().values[obs];
            } else if (hi == r.records.begin() || hi->t == t) {
                result.matrix[k][c] = hi->values[obs];
            } else {
                auto lo = hi - 1;
                const double w = (t - lo->t) / (hi->t - lo->t);
                result.matrix[k][c] = (1 - w) * lo->values[obs] + w * hi->values[obs];
            }
        }
    }

    const std::string axis = to_string(options.axis);
    std::string matrix = "t";
    for (const auto& r : result.runs)
        matrix += "," + axis + "=" + format_double(r.value);
    matrix += "\n";
    for (std::size_t k = 0; k < result.times.size(); ++k) {
        matrix += format_double(result.times[k]);
        for (double v : result.matrix[k])
            matrix += "," + format_double(v);
        matrix += "\n";
    }
    std::string curve = axis + ",E_K,Xi,final_" + options.observable + ",perturbative_photons\n";
    for (const auto& r : result.runs)
        curve += format_double(r.value) + "," + format_double(r.kinetic_energy) + "," + format_double(r.xi) + "," +
                 format_double(r.final_value) + "," + format_double(r.perturbative) + "\n";
    const fs::path matrix_path = dir / (options.label + "_matrix.csv");
    const fs::path curve_path = dir / (options.label + "_final.csv");
    write_text(matrix_path, matrix);
    write_text(curve_path, curve);

    json runs = json::array();
    json files = json::array();
    for (const auto& p : {matrix_path, curve_path}) {
        const OutputFile f = inventory_entry(dir, p);
        files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    }
    int failures = 0;
    for (const auto& r : result.runs) {
        failures += r.status != "ok";
        runs.push_back({{"value", r.value},
                        {"E_K", r.kinetic_energy},
                        {"Xi", r.xi},
                        {"status", r.status},
                        {"message", r.message},
                        {"directory", r.directory},
                        {"manifest", r.directory + "/run_manifest.json"},
                        {"final_value", r.final_value},
                        {"perturbative_photons", r.perturbative}});
    }
    result.manifest = {{"label", options.label},
                       {"kind", "sweep"},
                       {"status", failures == 0 ? "ok" : "partial"},
                       {"failed_runs", failures},
                       {"axis", axis},
                       {"observable", options.observable},
                       {"version", FLYATOM_VERSION},
                       {"base_config", config_to_json(base)},
                       {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
                       {"files", files},
                       {"runs", runs}};
    write_json(dir / (options.label + "_manifest.json"), result.manifest);
    return result;
}

std::vector<std::string> preset_names() {
    return {"fig2", "fig3", "fig4", "fig4a", "fig4b", "fig5", "fig6a", "fig6b", "fig7"};
}

Preset make_preset(const std::string& name) {
    SimulationConfig base;
    auto single = [&](double ek, std::vector<double> snapshots = {}) {
        SimulationConfig c = base;
        c.kinetic_energy = ek;
        char label[32];
        std::snprintf(label, sizeof label, "EK%g", ek);
        return PresetRun{label, c, std::move(snapshots)};
    };
    Preset p;
    p.name = name;
    if (name == "fig2") {
        p.description = "Reflection at E_K = 0.02: wavepacket snapshots at 0, 0.5, 1 tau0";
        p.runs = {single(0.02, {0.0, 0.5, 1.0})};
    } else if (name == "fig3") {
        p.description = "Inelastic transmission at E_K = 40: wavepacket snapshots at 0, 0.5, 1 tau0";
        p.runs = {single(40.0, {0.0, 0.5, 1.0})};
    } else if (name == "fig4") {
        p.description = "Emitted photons versus time and Xi (log-spaced 1e-3..10)";
        p.sweep = PresetSweep{base, SweepAxis::xi, log_space(1e-3, 10.0, 25), "physical_photons"};
    } else if (name == "fig5" || name == "fig4a") {
        p.description = "Mean momentum versus time for E_K = 0.02, 10, 40 (entropy included)";
        p.runs = {single(0.02), single(10.0), single(40.0)};
    } else if (name == "fig4b") {
        p.description = "Entanglement entropy versus time at E_K = 40";
        p.runs = {single(40.0)};
    } else if (name == "fig6a") {
        p.description = "Photon numbers in both gauges and <X- X+> at E_K = 1";
        p.runs = {single(1.0)};
    } else if (name == "fig6b") {
        p.description = "Photon numbers in both gauges and <X- X+> at E_K = 30";
        p.runs = {single(30.0)};
    } else if (name == "fig7") {
        p.description = "Final <a^dag a> versus E_K with the perturbative prediction";
        p.sweep = PresetSweep{base, SweepAxis::kinetic_energy,
                              {2, 5, 10, 15, 20, 25, 30, 40, 50, 60, 80, 100, 150, 200}, "bare_photons"};
    } else {
        std::string known;
        for (const auto& n : preset_names())
            known += (known.empty() ? "" : ", ") + n;
        throw InputError("unknown preset '" + name + "' (known: " + known + ")");
    }
    return p;
}

json run_preset(const Preset& preset, const PresetOptions& options) {
    const fs::path dir = fs::path(options.output_dir) / preset.name;
    json summary = {{"preset", preset.name}, {"description", preset.description}, {"version", FLYATOM_VERSION}};
    json runs = json::array();
    std::string status = "ok";
    for (const auto& run : preset.runs) {
        SimulationConfig c = run.config;
        if (options.stride > 0)
            c.output.stride = options.stride;
        RunOptions ro;
        ro.output_dir = dir;
        ro.label = run.label;
        ro.snapshot_times = run.snapshot_times;
        ro.log = options.log;
        try {
            const RunResult r = run_single(c, ro);
            runs.push_back({{"label", run.label}, {"status", "ok"}, {"manifest", run.label + "_manifest.json"}});
        } catch (const Error& e) {
            status = "failed";
            runs.push_back({{"label", run.label}, {"status", "failed"}, {"message", e.what()}});
        }
    }
    summary["runs"] = runs;
    if (preset.sweep) {
        SimulationConfig base = preset.sweep->base;
        if (options.stride > 0)
            base.output.stride = options.stride;
        SweepOptions so;
        so.axis = preset.sweep->axis;
        so.values = preset.sweep->values;
        so.observable = preset.sweep->observable;
        so.parallelism = options.parallelism;
        so.output_dir = dir;
        so.label = "sweep";
        so.log = options.log;
        const SweepResult r = run_sweep(base, so);
        summary["sweep"] = {{"manifest", "sweep_manifest.json"}, {"status", r.manifest["status"]}};
        if (r.manifest["status"] != "ok")
            status = "partial";
    }
    summary["status"] = status;
    write_json(dir / (preset.name + "_manifest.json"), summary);
    return summary;
}

} // namespace flyatom
