// Acceptance checks at production resolution. Prints one PASS/FAIL line per
// criterion and exits nonzero if any criterion fails.

#include "flyatom/config_io.hpp"
#include "flyatom/errors.hpp"
#include "flyatom/gauge_check.hpp"
#include "flyatom/perturbation.hpp"
#include "flyatom/propagator.hpp"
#include "flyatom/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace flyatom;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    int id;
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

void progress(const std::string& msg) { std::cerr << "[acceptance] " << msg << std::endl; }

double final_of(const RunResult& r, const char* name) { return r.records.back()[name]; }

double max_of(const std::vector<TimeSeriesRecord>& records, const char* name) {
    double m = -HUGE_VAL;
    for (const auto& r : records)
        m = std::max(m, r[name]);
    return m;
}

/// Per-run diagnostics gathered from run results and sweep member manifests.
struct Hygiene {
    double norm = 0, energy = 0, leakage = 0, transformed = 0, physical_rel = 0;
    int runs = 0;
    std::vector<std::string> failed;

    void add(const std::string& label, const RunDiagnostics& d) {
        norm = std::max(norm, d.norm_drift);
        energy = std::max(energy, d.energy_drift);
        leakage = std::max(leakage, d.boundary_leakage);
        transformed = std::max(transformed, d.gauge_transformed_max_abs);
        physical_rel = std::max(physical_rel, d.gauge_physical_max_rel);
        ++runs;
        const Thresholds t;
        if (!(d.norm_drift < t.norm_drift && d.energy_drift < t.energy_drift && d.boundary_leakage < t.boundary_leakage))
            failed.push_back(label);
    }

    void add_sweep(const fs::path& dir, const SweepResult& s) {
        for (const auto& r : s.runs) {
            if (r.status != "ok") {
                failed.push_back(r.directory + " (" + r.message + ")");
                ++runs;
                continue;
            }
            std::ifstream in(dir / r.directory / "run_manifest.json");
            const nlohmann::json j = nlohmann::json::parse(in)["diagnostics"];
            RunDiagnostics d;
            d.norm_drift = j["norm_drift"];
            d.energy_drift = j["energy_drift"];
            d.boundary_leakage = j["boundary_leakage"];
            d.gauge_transformed_max_abs = j["gauge_transformed_max_abs"];
            d.gauge_physical_max_rel = j["gauge_physical_max_rel"];
            add(r.directory, d);
        }
    }
};

RunResult run(const fs::path& out, double ek, const std::string& label) {
    SimulationConfig c;
    c.kinetic_energy = ek;
    RunOptions o;
    o.output_dir = out;
    o.label = label;
    o.log = progress;
    return run_single(c, o);
}

} // namespace

int main(int argc, char** argv) {
    const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
    fs::create_directories(out);
    const int jobs = std::max(1u, std::thread::hardware_concurrency());
    std::vector<Verdict> verdicts;
    Hygiene hygiene;

    try {
        // 1. Reflection.
        const RunResult slow = run(out, 0.02, "EK0.02");
        hygiene.add("EK0.02", slow.manifest.diagnostics);
        {
            const double p = final_of(slow, "mean_p");
            const double excited = final_of(slow, "pop_e1") + final_of(slow, "pop_g2");
            const double wall = slow.manifest.wall_time;
            verdicts.push_back({1, p >= -1.02 && p <= -0.98 && excited < 1e-3 && wall < 300.0,
                                "<p>/k0 = " + fmt(p) + ", pop(e1)+pop(g2) = " + fmt(excited) + ", runtime " +
                                    fmt(wall) + " s"});
        }

        // 2. Elastic transmission.
        const RunResult mid = run(out, 10.0, "EK10");
        hygiene.add("EK10", mid.manifest.diagnostics);
        {
            const double p = final_of(mid, "mean_p");
            const double n = final_of(mid, "physical_photons");
            verdicts.push_back({2, p >= 0.98 && p <= 1.02 && n < 1e-3,
                                "<p>/k0 = " + fmt(p) + ", physical photons = " + fmt(n)});
        }

        // 3. Inelastic transmission with an entropy plateau.
        const RunResult fast = run(out, 40.0, "EK40");
        hygiene.add("EK40", fast.manifest.diagnostics);
        {
            const double p = final_of(fast, "mean_p");
            const double n = final_of(fast, "physical_photons");
            double lo = HUGE_VAL, hi = -HUGE_VAL;
            for (const auto& r : fast.records)
                if (r.t >= 0.8 - 1e-12) {
                    lo = std::min(lo, r["entropy"]);
                    hi = std::max(hi, r["entropy"]);
                }
            verdicts.push_back({3, p < 0.99 && n > 1e-3 && hi - lo < 1e-3,
                                "<p>/k0 = " + fmt(p) + " (need < 0.99), physical photons = " + fmt(n) +
                                    ", entropy drift over t >= 0.8 = " + fmt(hi - lo) + " (need < 1e-3)"});
        }

        // 4. Adiabatic null emission.
        const RunResult adiabatic = run(out, 1.0, "EK1");
        hygiene.add("EK1", adiabatic.manifest.diagnostics);
        {
            const double phys = std::max(max_of(adiabatic.records, "physical_photons"),
                                         max_of(adiabatic.records, "physical_photons_dipole"));
            const double bare = max_of(adiabatic.records, "bare_photons");
            verdicts.push_back({4, phys < 1e-4 && bare > 1e-3,
                                "max physical = " + fmt(phys) + ", max bare = " + fmt(bare)});
        }

        // 6. Threshold behaviour over Xi.
        SimulationConfig base;
        base.kinetic_energy = 1.0;
        SweepOptions xs;
        xs.axis = SweepAxis::xi;
        xs.values = log_space(1e-3, 10.0, 25);
        xs.observable = "physical_photons";
        xs.parallelism = jobs;
        xs.output_dir = out;
        xs.label = "xi_sweep";
        xs.log = progress;
        const SweepResult xi_sweep = run_sweep(base, xs);
        hygiene.add_sweep(out, xi_sweep);
        {
            bool quiet = true, rises = false, falls = true, complete = true;
            double worst_quiet = 0, best_window = 0;
            std::size_t peak = 0;
            for (std::size_t i = 0; i < xi_sweep.runs.size(); ++i) {
                const SweepRun& r = xi_sweep.runs[i];
                complete = complete && r.status == "ok";
                if (r.value <= 0.3) {
                    worst_quiet = std::max(worst_quiet, r.final_value);
                    quiet = quiet && r.final_value < 1e-4;
                }
                if (r.value > 0.5 && r.value < 3.0) {
                    best_window = std::max(best_window, r.final_value);
                    rises = rises || r.final_value > 1e-3;
                }
                if (r.final_value > xi_sweep.runs[peak].final_value)
                    peak = i;
            }
            for (std::size_t i = peak + 1; i < xi_sweep.runs.size(); ++i)
                falls = falls && xi_sweep.runs[i].final_value <= xi_sweep.runs[i - 1].final_value;
            falls = falls && peak + 1 < xi_sweep.runs.size();
            verdicts.push_back({6, complete && quiet && rises && falls,
                                "max final for Xi <= 0.3 = " + fmt(worst_quiet) + ", max in (0.5, 3) = " +
                                    fmt(best_window) + ", peak at Xi = " + fmt(xi_sweep.runs[peak].value) +
                                    (falls ? ", decreasing after peak" : ", not decreasing after peak")});
        }

        // 7. Perturbative oracle versus simulation over E_K.
        const Preset fig7 = make_preset("fig7");
        SweepOptions es;
        es.axis = SweepAxis::kinetic_energy;
        es.values = fig7.sweep->values;
        es.observable = "bare_photons";
        es.parallelism = jobs;
        es.output_dir = out;
        es.label = "ek_sweep";
        es.log = progress;
        const SweepResult ek_sweep = run_sweep(fig7.sweep->base, es);
        hygiene.add_sweep(out, ek_sweep);
        {
            bool agree = true, over = true, complete = true;
            double worst_rel = 0;
            std::string under;
            for (const auto& r : ek_sweep.runs) {
                complete = complete && r.status == "ok";
                const double rel = std::abs(r.final_value - r.perturbative) / std::abs(r.perturbative);
                if (r.kinetic_energy >= 30.0) {
                    worst_rel = std::max(worst_rel, rel);
                    agree = agree && rel <= 0.25;
                }
                if (r.kinetic_energy >= 5.0 && !(r.perturbative >= r.final_value)) {
                    over = false;
                    under += " E_K=" + fmt(r.kinetic_energy) + " (analytic " + fmt(r.perturbative) + " < numerical " +
                             fmt(r.final_value) + ")";
                }
            }
            verdicts.push_back({7, complete && agree && over,
                                "max relative gap for E_K >= 30 = " + fmt(worst_rel) +
                                    (over ? ", analytic >= numerical for all E_K >= 5"
                                          : ", analytic below numerical at" + under)});
        }

        // 5. Gauge consistency on every run.
        verdicts.push_back({5, hygiene.failed.empty() && hygiene.transformed < 1e-6 && hygiene.physical_rel < 1e-4,
                            "over " + std::to_string(hygiene.runs) + " runs: max |<a'^dag a'>_d - <a^dag a>_c| = " +
                                fmt(hygiene.transformed) + ", max relative gap of <X- X+> = " +
                                fmt(hygiene.physical_rel)});

        // 8. Structural verification.
        {
            SimulationConfig c;
            c.kinetic_energy = 40.0;
            const GaugeCheckReport g = verify_gauge_equivalence_default(c);
            double oracle = 0;
            for (double eta0 : {0.1, 0.3})
                for (double xi : {0.5, 1.0, 2.0, 4.0})
                    oracle = std::max(oracle, oracle_relative_discrepancy(eta0, xi));
            verdicts.push_back({8, g.max_discrepancy < 1e-6 && oracle < 1e-6,
                                "gauge check (n_x " + std::to_string(g.n_x) + ", dim " + std::to_string(g.dim) +
                                    ") = " + fmt(g.max_discrepancy) + ", oracle grid max relative = " + fmt(oracle)});
        }

        // 9. Numerical hygiene and Strang order.
        {
            SimulationConfig c;
            c.kinetic_energy = 40.0;
            c.x0 = -1.0;
            const double order = strang_self_convergence_order(Grid::from_config(c), c, 0.1, 1.6);
            std::string detail = std::to_string(hygiene.runs) + " runs: max norm drift " + fmt(hygiene.norm) +
                                 ", max energy drift " + fmt(hygiene.energy) + ", max leakage " +
                                 fmt(hygiene.leakage) + ", Strang order " + fmt(order);
            for (const auto& f : hygiene.failed)
                detail += "; over threshold: " + f;
            verdicts.push_back({9, hygiene.failed.empty() && order >= 1.8 && order <= 2.2, detail});
        }
    } catch (const std::exception& e) {
        std::cerr << "acceptance aborted: " << e.what() << "\n";
    }

    std::sort(verdicts.begin(), verdicts.end(), [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
    bool all = verdicts.size() == 9;
    for (int id = 1; id <= 9; ++id) {
        const auto it = std::find_if(verdicts.begin(), verdicts.end(), [&](const Verdict& v) { return v.id == id; });
        if (it == verdicts.end()) {
            std::cout << "criterion " << id << ": FAIL (not evaluated)\n";
            continue;
        }
        all = all && it->pass;
        std::cout << "criterion " << id << ": " << (it->pass ? "PASS" : "FAIL") << " - " << it->detail << "\n";
    }
    std::cout.flush();
    return all ? 0 : 1;
}
