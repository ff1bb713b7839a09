#include "support.hpp"

#include "flyatom/config_io.hpp"
#include "flyatom/errors.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace flyatom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("derived parameters of the default configuration", "[config]") {
    SimulationConfig c;
    c.kinetic_energy = 40.0;
    const DerivedParameters d = derive_parameters(c);
    const double k0 = 20.0 * std::numbers::pi;
    CHECK_THAT(d.mass, WithinRel(k0 * k0 / 80.0, 1e-14));
    CHECK_THAT(d.v0, WithinRel(80.0 / k0, 1e-14));
    CHECK_THAT(d.xi, WithinRel(40.0 / (10.0 * std::numbers::pi), 1e-14));
    CHECK_THAT(d.tau0, WithinRel(2.0 * 25.0 / 6.0 / d.v0, 1e-14));
    CHECK_THAT(d.mu_t, WithinRel(1.0 / d.v0, 1e-14));
    CHECK(d.n_steps % default_records == 0);
    CHECK_THAT(d.n_steps * d.dt, WithinRel(d.tau0, 1e-12));
    CHECK(d.dt <= 2.0 * std::numbers::pi / 400.0);
}

TEST_CASE("adiabatic parameter at the figure energies", "[config]") {
    SimulationConfig c;
    c.kinetic_energy = 0.02;
    // Quoted to two figures in the literature; exact value is E_K / (10 pi).
    CHECK_THAT(derive_parameters(c).xi, WithinRel(6.6e-4, 0.05));
    CHECK_THAT(derive_parameters(c).xi, WithinRel(0.02 / (10 * std::numbers::pi), 1e-14));
    c.kinetic_energy = 40;
    CHECK_THAT(derive_parameters(c).xi, WithinRel(1.3, 0.05));
    CHECK_THAT(derive_parameters(c).xi, WithinRel(40 / (10 * std::numbers::pi), 1e-14));
    CHECK_THAT(kinetic_energy_for_xi(c, 1.2732395447351628), WithinRel(40.0, 1e-12));
}

TEST_CASE("the time step also resolves fast transits", "[config]") {
    SimulationConfig c;
    c.kinetic_energy = kinetic_energy_for_xi(c, 10.0);
    const DerivedParameters d = derive_parameters(c);
    CHECK(d.dt <= d.mu_t / 40.0 + 1e-15);
    c.dt = 0.01;
    CHECK_THAT(derive_parameters(c).dt, WithinRel(0.01, 0.01));
}

TEST_CASE("invalid parameters are configuration errors", "[config]") {
    SimulationConfig c;
    CHECK_THROWS_AS(derive_parameters(c), ConfigError);
    c.kinetic_energy = 1.0;
    c.mu_s = 0;
    CHECK_THROWS_AS(derive_parameters(c), ConfigError);
    c = SimulationConfig{};
    c.kinetic_energy = 1.0;
    c.grid.x_max = 3.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = SimulationConfig{};
    c.kinetic_energy = 1.0;
    c.grid.n_x = 256;
    CHECK_THROWS_WITH(validate(c), Catch::Matchers::ContainsSubstring("Nyquist"));
    c = SimulationConfig{};
    c.kinetic_energy = 1.0;
    c.output.snapshot_times = {1.5};
    CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("grid wavenumbers follow the FFT ordering", "[config]") {
    const Grid g(-1.0, 1.0, 8);
    CHECK(g.dx() == 0.25);
    CHECK(g.k(0) == 0.0);
    CHECK_THAT(g.k(1), WithinRel(std::numbers::pi, 1e-15));
    CHECK_THAT(g.k(4), WithinRel(-4 * std::numbers::pi, 1e-15));
    CHECK_THAT(g.k(7), WithinRel(-std::numbers::pi, 1e-15));
}

TEST_CASE("JSON parsing applies defaults and rejects unknown keys", "[config]") {
    const SimulationConfig c = parse_config_text(R"({"E_K": 40})");
    CHECK(c.coupling.eta0 == 0.3);
    CHECK(c.freq.omega_a == c.freq.omega_c);
    CHECK_THAT(c.x0, WithinRel(-25.0 / 6.0, 1e-15));
    CHECK_THAT(c.k0, WithinRel(20.0 * std::numbers::pi, 1e-15));

    CHECK_THROWS_WITH(parse_config_text(""), Catch::Matchers::ContainsSubstring("E_K"));
    CHECK_NOTHROW(parse_config_text("{}", ParseOptions{false}));
    CHECK_THROWS_WITH(parse_config_text(R"({"E_K": 1, "etaO": 0.3})"), Catch::Matchers::ContainsSubstring("etaO"));
    CHECK_THROWS_WITH(parse_config_text(R"({"E_K": 1, "grid": {"nx": 10}})"),
                      Catch::Matchers::ContainsSubstring("grid.nx"));
    CHECK_THROWS_AS(parse_config_text(R"({"E_K": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"E_K": "fast"})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"E_K": 1, "Xi": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"E_K": 1, "x0": -0.5})"), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/flyatom.json"), IoError);

    const SimulationConfig x = parse_config_text(R"({"Xi": 1.2732395447351628})");
    CHECK_THAT(x.kinetic_energy, WithinRel(40.0, 1e-12));
}

TEST_CASE("configuration round-trips through JSON", "[config]") {
    SimulationConfig c = test::small_config(12.5);
    c.dt = 0.0123;
    c.output.snapshot_times = {0.0, 0.25};
    c.entropy_levels = EntropyLevels::lowest_bare;
    const SimulationConfig back = config_from_json(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
    const DerivedParameters a = derive_parameters(c), b = derive_parameters(back);
    CHECK(a.mass == b.mass);
    CHECK(a.dt == b.dt);
    CHECK(a.n_steps == b.n_steps);
    CHECK(a.stride == b.stride);
    CHECK(back.entropy_levels == EntropyLevels::lowest_bare);
}
