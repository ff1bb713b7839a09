#include "support.hpp"

#include "flyatom/errors.hpp"
#include "flyatom/propagator.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace flyatom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("initial wavepacket is normalized, centred and moving at k0", "[propagator]") {
    const SimulationConfig c = test::small_config();
    const Grid g = Grid::from_config(c);
    const WavepacketState psi = initial_state(g, c);
    CHECK_THAT(psi.norm_squared(), WithinAbs(1.0, 1e-14));
    double mean_x = 0;
    for (int j = 0; j < g.size(); ++j)
        mean_x += g.x(j) * std::norm(psi(j, 0)) * g.dx();
    CHECK_THAT(mean_x, WithinAbs(c.x0, 1e-10));
    SplitStepPropagator prop(g, c, 0.01);
    CHECK_THAT(prop.mean_momentum(psi), WithinRel(c.k0, 1e-12));
    const std::vector<bool> used = psi.occupied_channels();
    CHECK(used[0]);
    CHECK(std::count(used.begin(), used.end(), true) == 1);
}

TEST_CASE("clipped wavepackets are rejected", "[propagator]") {
    SimulationConfig c = test::small_config();
    c.x0 = -5.5;
    CHECK_THROWS_AS(initial_state(Grid::from_config(c), c), ConfigError);
}

TEST_CASE("free propagation matches the analytic spreading Gaussian", "[propagator]") {
    SimulationConfig c = test::small_config(0.5);
    c.coupling.eta0 = 0.0;
    const Grid g = Grid::from_config(c);
    const double m = derive_parameters(c).mass;
    WavepacketState psi = initial_state(g, c);
    const double dt = 0.05;
    const long steps = 200;
    SplitStepPropagator prop(g, c, dt);
    prop.advance(psi, steps);
    const double t = dt * steps;

    const double s = c.mu_s;
    const cplx width = s * s + I * (t / m);
    const double v = c.k0 / m;
    double norm0 = 0;
    for (int j = 0; j < g.size(); ++j) {
        const double u = (g.x(j) - c.x0) / s;
        norm0 += std::exp(-u * u) * g.dx();
    }
    double worst = 0;
    for (int j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        const double y = x - c.x0 - v * t;
        const cplx exact = (s / std::sqrt(width)) * std::exp(-y * y / (2.0 * width)) *
                           std::exp(I * (c.k0 * x - c.k0 * c.k0 * t / (2 * m))) * std::exp(I * (0.5 * t)) /
                           std::sqrt(norm0);
        worst = std::max(worst, std::abs(psi(j, 0) - exact));
    }
    CHECK(worst < 1e-10);
    CHECK_THAT(psi.norm_squared(), WithinAbs(1.0, 1e-13));
}

TEST_CASE("split step is unitary and composes", "[propagator]") {
    const SimulationConfig c = test::small_config(40.0);
    const Grid g = Grid::from_config(c);
    SplitStepPropagator prop(g, c, 0.02);
    WavepacketState a = initial_state(g, c);
    WavepacketState b = a;
    prop.advance(a, 300);
    CHECK_THAT(a.norm_squared(), WithinAbs(1.0, 1e-12));
    prop.advance(b, 120);
    prop.advance(b, 180);
    CHECK(l2_distance(a, b) < 1e-11);
    WavepacketState s = initial_state(g, c);
    for (int i = 0; i < 10; ++i)
        prop.step(s);
    WavepacketState f = initial_state(g, c);
    prop.advance(f, 10);
    CHECK(l2_distance(s, f) < 1e-12);
}

TEST_CASE("reversing the time step retraces the evolution", "[propagator]") {
    const SimulationConfig c = test::small_config(40.0);
    const Grid g = Grid::from_config(c);
    SplitStepPropagator forward(g, c, 0.02);
    SplitStepPropagator backward(g, c, -0.02, forward.shared_spectra());
    const WavepacketState start = initial_state(g, c);
    WavepacketState psi = start;
    forward.advance(psi, 400);
    CHECK(l2_distance(psi, start) > 0.5);
    backward.advance(psi, 400);
    CHECK(l2_distance(psi, start) < 1e-11);
}

TEST_CASE("energy is conserved through the cavity", "[propagator]") {
    const SimulationConfig c = test::small_config(40.0);
    const Grid g = Grid::from_config(c);
    const DerivedParameters d = derive_parameters(c);
    SplitStepPropagator prop(g, c, d.dt);
    WavepacketState psi = initial_state(g, c);
    const double e0 = prop.total_energy(psi);
    prop.advance(psi, d.n_steps / 2);
    CHECK(std::abs(prop.total_energy(psi) - e0) / std::abs(e0) < 1e-6);
    CHECK_FALSE(psi.has_nonfinite());
}

TEST_CASE("split step converges at second order", "[propagator]") {
    SimulationConfig c = test::small_config(40.0);
    c.x0 = -1.0;
    const Grid g = Grid::from_config(c);
    const double order = strang_self_convergence_order(g, c, 0.1, 1.6);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
}

TEST_CASE("evolution plan records on the stride and at snapshots", "[propagator]") {
    DerivedParameters d;
    d.n_steps = 10;
    d.stride = 4;
    d.dt = 0.1;
    d.tau0 = 1.0;
    const EvolutionPlan plan = EvolutionPlan::from(d, {0.5});
    CHECK(plan.snapshot_steps == std::vector<long>{5});
    const SimulationConfig c = test::small_config();
    const Grid g = Grid::from_config(c);
    SplitStepPropagator prop(g, c, 0.1);
    WavepacketState psi = initial_state(g, c);
    std::vector<long> records, snaps;
    evolve(psi, prop, plan, [&](const WavepacketState&, long s, double) { records.push_back(s); },
           [&](const WavepacketState&, long s, double) { snaps.push_back(s); });
    CHECK(records == std::vector<long>{0, 4, 8, 10});
    CHECK(snaps == std::vector<long>{5});
}
