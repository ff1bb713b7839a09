// Command-line front end: run, sweep, verify, preset.

#include "flyatom/config_io.hpp"
#include "flyatom/errors.hpp"
#include "flyatom/gauge_check.hpp"
#include "flyatom/perturbation.hpp"
#include "flyatom/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

using namespace flyatom;

namespace {

constexpr const char* jobs_variable = "FLYATOM_JOBS";

int resolve_jobs(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv(jobs_variable)) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw InputError(std::string(jobs_variable) + " must be a positive integer (got '" + env + "')");
        return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void log_line(const std::string& msg) {
    std::cerr << msg << '\n';
}

SimulationConfig load_config(const std::string& path, bool require_kinetic_energy) {
    ParseOptions options;
    options.require_kinetic_energy = require_kinetic_energy;
    if (path.empty())
        return parse_config_text("{}", options);
    return parse_config_file(path, options);
}

int verify(const std::string& config_path) {
    SimulationConfig config = load_config(config_path, false);
    if (!(config.kinetic_energy > 0))
        config.kinetic_energy = 40.0;
    bool ok = true;

    const GaugeCheckReport g = verify_gauge_equivalence_default(config);
    const bool gauge_ok = g.max_discrepancy < 1e-6;
    ok &= gauge_ok;
    std::cout << "gauge equivalence (n_x=" << g.n_x << ", dim=" << g.dim << ", m=" << format_double(g.mass) << ")\n"
              << "  band-limited max discrepancy " << format_double(g.max_discrepancy) << (gauge_ok ? "  ok" : "  FAIL")
              << "\n  elementwise lattice discrepancy " << format_double(g.elementwise_discrepancy)
              << "\n  low-lying eigenvalue discrepancy " << format_double(g.eigenvalue_discrepancy) << "\n";

    std::cout << "perturbative amplitudes, closed form vs quadrature\n";
    for (double eta0 : {0.1, 0.3})
        for (double xi : {0.5, 1.0, 2.0, 4.0}) {
            const double rel = oracle_relative_discrepancy(eta0, xi);
            const bool pass = rel < 1e-6;
            ok &= pass;
            std::cout << "  eta0=" << eta0 << " Xi=" << xi << "  relative " << format_double(rel)
                      << (pass ? "  ok" : "  FAIL") << "\n";
        }
    std::cout << (ok ? "verify: ok\n" : "verify: FAILED\n");
    return ok ? 0 : static_cast<int>(ErrorCategory::numerical);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"flyatom: an atom flying through an ultrastrongly coupled cavity"};
    app.set_version_flag("--version", std::string(FLYATOM_VERSION));
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir = "out";
    int jobs = 0;
    int stride = 0;
    auto add_common = [&](CLI::App* sub, bool with_config) {
        if (with_config)
            sub->add_option("-c,--config", config_path, "JSON configuration file");
        sub->add_option("-o,--output", output_dir, "output directory")->capture_default_str();
        sub->add_option("-j,--jobs", jobs, std::string("parallel runs (default: $") + jobs_variable + " or all cores)")
            ->check(CLI::PositiveNumber);
        sub->add_option("-s,--stride", stride, "steps between time-series records (0: 200 records per run)")
            ->check(CLI::NonNegativeNumber);
    };

    CLI::App* run = app.add_subcommand("run", "single simulation");
    add_common(run, true);
    std::string label = "run";
    std::vector<double> snapshots;
    std::vector<std::string> observables;
    run->add_option("-l,--label", label, "file name prefix")->capture_default_str();
    run->add_option("--snapshots", snapshots, "snapshot times in units of tau0")->delimiter(',');
    run->add_option("--observables", observables, "time-series columns (default: all)")->delimiter(',');

    CLI::App* sweep = app.add_subcommand("sweep", "independent runs over E_K or Xi");
    add_common(sweep, true);
    std::string axis = "E_K";
    std::vector<double> values;
    std::vector<double> log_range;
    std::string observable = "physical_photons";
    sweep->add_option("--axis", axis, "E_K or Xi")->capture_default_str();
    sweep->add_option("--values", values, "axis values, increasing")->delimiter(',');
    sweep->add_option("--log-range", log_range, "lo hi count: log-spaced values")->expected(3);
    sweep->add_option("--observable", observable, "observable for the matrix and final curve")->capture_default_str();
    sweep->add_option("-l,--label", label, "file name prefix");

    CLI::App* verify_cmd = app.add_subcommand("verify", "gauge-equivalence check and perturbative oracle grid");
    verify_cmd->add_option("-c,--config", config_path, "JSON configuration file");

    CLI::App* preset = app.add_subcommand("preset", "reproduce a figure's data set");
    add_common(preset, false);
    std::string preset_name;
    bool list = false;
    preset->add_option("name", preset_name, "figure preset (see --list)");
    preset->add_flag("--list", list, "list presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorCategory::input);
    }

    try {
        if (run->parsed()) {
            SimulationConfig config = load_config(config_path, true);
            if (stride > 0)
                config.output.stride = stride;
            RunOptions options;
            options.output_dir = output_dir;
            options.label = label;
            options.observables = observables;
            if (!snapshots.empty())
                options.snapshot_times = snapshots;
            options.log = log_line;
            const RunResult r = run_single(config, options);
            std::cout << r.manifest.to_json().dump(2) << "\n";
            return 0;
        }
        if (sweep->parsed()) {
            SimulationConfig config = load_config(config_path, false);
            if (stride > 0)
                config.output.stride = stride;
            SweepOptions options;
            options.axis = sweep_axis_from_string(axis);
            if (!log_range.empty()) {
                if (!values.empty())
                    throw InputError("give either --values or --log-range");
                options.values = log_space(log_range[0], log_range[1], static_cast<int>(log_range[2]));
            } else {
                options.values = values;
            }
            options.observable = observable;
            options.parallelism = resolve_jobs(jobs);
            options.output_dir = output_dir;
            options.label = label == "run" ? "sweep" : label;
            options.log = log_line;
            const SweepResult r = run_sweep(config, options);
            std::cout << r.manifest.dump(2) << "\n";
            return r.manifest["status"] == "ok" ? 0 : static_cast<int>(ErrorCategory::numerical);
        }
        if (verify_cmd->parsed())
            return verify(config_path);
        if (preset->parsed()) {
            if (list || preset_name.empty()) {
                for (const auto& n : preset_names())
                    std::cout << n << "  " << make_preset(n).description << "\n";
                return list ? 0 : static_cast<int>(ErrorCategory::input);
            }
            PresetOptions options;
            options.output_dir = output_dir;
            options.parallelism = resolve_jobs(jobs);
            options.stride = stride;
            options.log = log_line;
            const nlohmann::json summary = run_preset(make_preset(preset_name), options);
            std::cout << summary.dump(2) << "\n";
            return summary["status"] == "ok" ? 0 : static_cast<int>(ErrorCategory::numerical);
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.category()) << "): " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return static_cast<int>(ErrorCategory::io);
    } catch (const std::exception& e) {
        std::cerr << "error (internal): " << e.what() << "\n";
        return 1;
    }
    return 0;
}
