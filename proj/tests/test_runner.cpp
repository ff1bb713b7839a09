#include "support.hpp"

#include "flyatom/config_io.hpp"
#include "flyatom/errors.hpp"
#include "flyatom/runner.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using namespace flyatom;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("flyatom_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

SimulationConfig quick_config(double kinetic_energy = 40.0) {
    SimulationConfig c = test::small_config(kinetic_energy);
    c.t_end = 0.25;
    c.output.stride = 20;
    return c;
}

int run_cli(const std::string& args) {
    const int status = std::system((std::string(FLYATOM_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("single run writes checksummed outputs", "[runner]") {
    const fs::path out = scratch("single");
    RunOptions o;
    o.output_dir = out;
    o.label = "probe";
    o.snapshot_times = std::vector<double>{0.0, 0.125};
    const RunResult r = run_single(quick_config(), o);

    CHECK(r.manifest.status == "ok");
    CHECK(r.snapshots.size() == 2);
    CHECK(r.records.front().t == 0.0);
    CHECK_THAT(r.records.back().t, Catch::Matchers::WithinAbs(0.25, 1e-12));
    CHECK(r.manifest.diagnostics.norm_drift < r.manifest.thresholds.norm_drift);
    CHECK(r.manifest.diagnostics.energy_drift < r.manifest.thresholds.energy_drift);
    REQUIRE(fs::exists(out / "probe_timeseries.csv"));
    REQUIRE(fs::exists(out / "probe_manifest.json"));
    for (const OutputFile& f : r.manifest.files) {
        INFO(f.path);
        REQUIRE(fs::exists(out / f.path));
        CHECK(sha256_file(out / f.path) == f.sha256);
        CHECK(fs::file_size(out / f.path) == f.bytes);
    }

    const CsvTable csv = read_csv(out / "probe_timeseries.csv");
    CHECK(csv.header.size() == 2 + observable_names.size());
    CHECK(csv.rows.size() == r.records.size());

    std::ifstream in(out / "probe_manifest.json");
    const nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j["status"] == "ok");
    CHECK(j["config"]["E_K"] == 40.0);
    CHECK(j.contains("diagnostics"));
}

TEST_CASE("runs are deterministic and sweeps reproduce single runs", "[runner]") {
    const SimulationConfig c = quick_config();
    RunOptions o;
    o.write_files = false;
    const RunResult a = run_single(c, o);
    const RunResult b = run_single(c, o);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i)
        CHECK(a.records[i].values == b.records[i].values);

    SweepOptions s;
    s.values = {40.0};
    s.output_dir = scratch("sweep_one");
    s.observable = "bare_photons";
    const SweepResult sweep = run_sweep(c, s);
    REQUIRE(sweep.runs.size() == 1);
    REQUIRE(sweep.runs[0].status == "ok");
    REQUIRE(sweep.runs[0].records.size() == a.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i)
        CHECK(sweep.runs[0].records[i].values == a.records[i].values);
    CHECK(sweep.runs[0].final_value == a.records.back()["bare_photons"]);
}

TEST_CASE("sweeps run in parallel and write matrices", "[runner]") {
    SimulationConfig c = quick_config();
    SweepOptions s;
    s.values = {30.0, 40.0};
    s.parallelism = 2;
    s.output_dir = scratch("sweep_pair");
    s.label = "pair";
    const SweepResult r = run_sweep(c, s);
    REQUIRE(r.runs.size() == 2);
    CHECK(r.runs[0].status == "ok");
    CHECK(r.runs[1].status == "ok");
    CHECK(r.runs[1].perturbative > r.runs[0].perturbative);
    CHECK(fs::exists(s.output_dir / "pair_matrix.csv"));
    CHECK(fs::exists(s.output_dir / "pair_final.csv"));
    CHECK(fs::exists(s.output_dir / "pair_manifest.json"));
    CHECK(fs::exists(s.output_dir / r.runs[1].directory / "run_manifest.json"));
    CHECK(r.manifest["status"] == "ok");
    CHECK(r.matrix.size() == r.times.size());

    s.values = {40.0, 30.0};
    CHECK_THROWS_AS(run_sweep(c, s), InputError);
    s.values = {-1.0};
    CHECK_THROWS_AS(run_sweep(c, s), InputError);
    s.values = {};
    CHECK_THROWS_AS(run_sweep(c, s), InputError);
}

TEST_CASE("log spacing and presets", "[runner]") {
    const std::vector<double> v = log_space(1e-3, 10.0, 25);
    REQUIRE(v.size() == 25);
    CHECK(v.front() == 1e-3);
    CHECK_THAT(v.back(), Catch::Matchers::WithinRel(10.0, 1e-14));
    for (const std::string& name : preset_names())
        CHECK_NOTHROW(make_preset(name));
    CHECK(make_preset("fig4").sweep->values.size() == 25);
    CHECK_THROWS_AS(make_preset("fig99"), InputError);
}

TEST_CASE("command line exit codes", "[cli]") {
    const fs::path dir = scratch("cli");
    const fs::path good = dir / "good.json";
    nlohmann::json j = config_to_json(quick_config());
    j["t_end"] = 0.05;
    std::ofstream(good) << j.dump(2);
    const fs::path unknown = dir / "unknown.json";
    std::ofstream(unknown) << R"({"E_K": 40, "grid": {"nx": 128}})";
    const fs::path missing = dir / "missing.json";
    std::ofstream(missing) << R"({"eta0": 0.3})";
    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << R"({"E_K": -4})";

    CHECK(run_cli("run -c " + good.string() + " -o " + (dir / "out").string()) == 0);
    CHECK(fs::exists(dir / "out"));
    CHECK(run_cli("run -c " + unknown.string() + " -o " + dir.string()) == 2);
    CHECK(run_cli("run -c " + missing.string() + " -o " + dir.string()) == 2);
    CHECK(run_cli("run -c " + bad.string() + " -o " + dir.string()) == 2);
    CHECK(run_cli("run -c " + (dir / "absent.json").string()) == 6);
    CHECK(run_cli("preset fig99 -o " + dir.string()) == 3);
    CHECK(run_cli("run --no-such-flag") == 3);
}
