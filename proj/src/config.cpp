#include "flyatom/config.hpp"

#include "flyatom/errors.hpp"

#include <cmath>
#include <sstream>

namespace flyatom {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

double default_time_step(const SimulationConfig& config) {
    return 2.0 * std::numbers::pi / (400.0 * config.freq.omega_c);
}

DerivedParameters derive_parameters(const SimulationConfig& config) {
    if (!(config.kinetic_energy > 0) || !std::isfinite(config.kinetic_energy))
        throw ConfigError("E_K must be positive (got " + fmt(config.kinetic_energy) + ")");
    if (!(config.k0 > 0) || !std::isfinite(config.k0))
        throw ConfigError("k0 must be positive (got " + fmt(config.k0) + ")");
    if (!(config.freq.omega_c > 0) || !(config.freq.omega_a > 0))
        throw ConfigError("omega_c and omega_a must be positive");
    if (!(config.coupling.mu_c > 0))
        throw ConfigError("mu_c must be positive");
    if (config.coupling.eta0 < 0)
        throw ConfigError("eta0 must be >= 0");
    if (!(config.mu_s > 0))
        throw ConfigError("mu_s must be positive");
    if (config.x0 == 0)
        throw ConfigError("x0 must be nonzero (the atom starts outside the cavity)");
    if (!(config.t_end > 0))
        throw ConfigError("t_end must be positive");

    DerivedParameters d;
    d.mass = config.k0 * config.k0 / (2.0 * config.freq.omega_c * config.kinetic_energy);
    d.v0 = config.k0 / d.mass;
    d.xi = d.v0 / (config.freq.omega_c * config.coupling.mu_c);
    d.tau0 = std::abs(2.0 * config.x0 / d.v0);
    d.mu_t = config.coupling.mu_c * d.mass / config.k0;

    // The default also resolves the transit time through the cavity at high speed.
    const double dt_request = config.dt.value_or(std::min(default_time_step(config), d.mu_t / 40.0));
    if (!(dt_request > 0))
        throw ConfigError("dt must be positive (got " + fmt(dt_request) + ")");
    if (config.output.stride < 0)
        throw ConfigError("output stride must be >= 0");
    const double duration = config.t_end * d.tau0;
    d.n_steps = std::max(1L, static_cast<long>(std::ceil(duration / dt_request - 1e-9)));
    if (config.output.stride > 0) {
        d.stride = config.output.stride;
    } else if (d.n_steps >= default_records) {
        // Whole steps per record, so records of any run land on t = i t_end / default_records.
        d.n_steps = (d.n_steps + default_records - 1) / default_records * default_records;
        d.stride = static_cast<int>(d.n_steps / default_records);
    } else {
        d.stride = 1;
    }
    d.dt = duration / static_cast<double>(d.n_steps);
    return d;
}

double kinetic_energy_for_xi(const SimulationConfig& config, double xi) {
    if (!(xi > 0))
        throw ConfigError("Xi must be positive");
    // v0 = Xi omega_c mu_c and E_K = m v0^2 / (2 omega_c) = k0 v0 / (2 omega_c).
    const double v0 = xi * config.freq.omega_c * config.coupling.mu_c;
    return config.k0 * v0 / (2.0 * config.freq.omega_c);
}

Grid::Grid(double x_min, double x_max, int n_x)
    : x_min_(x_min), x_max_(x_max), n_x_(n_x), dx_((x_max - x_min) / n_x) {
    if (n_x < 4)
        throw ConfigError("grid needs at least 4 points");
    if (!(x_max > x_min))
        throw ConfigError("grid x_max must exceed x_min");
    xs_.resize(n_x);
    ks_.resize(n_x);
    for (int j = 0; j < n_x; ++j) {
        xs_[j] = x(j);
        ks_[j] = k(j);
    }
}

double Grid::k(int j) const {
    const int m = j < (n_x_ + 1) / 2 ? j : j - n_x_;
    return 2.0 * std::numbers::pi * m / (n_x_ * dx_);
}

Grid Grid::from_config(const SimulationConfig& config) {
    const double reach = 4.0 * std::abs(config.x0);
    return Grid(config.grid.x_min.value_or(-reach), config.grid.x_max.value_or(reach),
                config.grid.n_x);
}

void validate(const SimulationConfig& config) {
    config.dims.validate();
    derive_parameters(config);
    if (config.entropy_cut < 2)
        throw ConfigError("entropy cut m must be >= 2");
    for (double t : config.output.snapshot_times)
        if (t < 0 || t > config.t_end + 1e-12)
            throw ConfigError("snapshot time " + fmt(t) + " outside [0, t_end]");

    const Grid grid = Grid::from_config(config);
    const double margin = 8.0 * config.mu_s;
    if (grid.x_min() > config.x0 - margin || grid.x_max() < -config.x0 + margin)
        throw ConfigError("domain [" + fmt(grid.x_min()) + ", " + fmt(grid.x_max()) +
                          "] clips the wavepacket: need x_min <= x0 - 8 mu_s and x_max >= -x0 + 8 mu_s");
    const double k_nyquist = std::numbers::pi / grid.dx();
    const double k_spread = 1.0 / (std::sqrt(2.0) * config.mu_s);
    if (config.k0 + 8.0 * k_spread > k_nyquist)
        throw ConfigError("grid too coarse: k0 + 8 sigma_k = " + fmt(config.k0 + 8.0 * k_spread) +
                          " exceeds the Nyquist wavenumber " + fmt(k_nyquist));
}

} // namespace flyatom
