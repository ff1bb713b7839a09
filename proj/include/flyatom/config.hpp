#pragma once

// Simulation parameters in natural units: hbar = 1, and inputs are normally
// given with omega_c = 1, mu_c = 1 so that E_K, Xi and eta0 are the
// dimensionless figures of merit used throughout.

#include "flyatom/coupling.hpp"
#include "flyatom/hilbert.hpp"
#include "flyatom/rabi.hpp"

#include <numbers>
#include <optional>
#include <vector>

namespace flyatom {

struct GridSpec {
    std::optional<double> x_min; ///< defaults to -4 |x0|
    std::optional<double> x_max; ///< defaults to +4 |x0|
    int n_x = 2048;
};

/// Records per run when no stride is given.
inline constexpr long default_records = 200;

struct OutputSpec {
    int stride = 0;                    ///< steps between records; 0 picks default_records records per run
    std::vector<double> snapshot_times; ///< in units of tau0
};

/// Bare levels kept for the entanglement entropy.
enum class EntropyLevels {
    parity_sector, ///< m lowest bare levels of the parity sector holding the state
    lowest_bare,   ///< m lowest bare levels overall (ties by index)
};

struct SimulationConfig {
    RabiFrequencies freq{};
    CouplingProfile coupling{};
    double x0 = -25.0 / 6.0;
    double k0 = 20.0 * std::numbers::pi;
    double mu_s = 0.25;
    double kinetic_energy = 0.0; ///< E_K = m v0^2 / (2 omega_c); must be set
    std::optional<double> dt;    ///< defaults to min(2 pi / (400 omega_c), mu_t / 40)
    double t_end = 1.0;          ///< in units of tau0
    GridSpec grid{};
    HilbertDims dims{};
    OutputSpec output{};
    int entropy_cut = 4;
    EntropyLevels entropy_levels = EntropyLevels::parity_sector;
};

struct DerivedParameters {
    double mass = 0;
    double v0 = 0;
    double xi = 0;   ///< adiabatic figure of merit v0 / (omega_c mu_c)
    double tau0 = 0; ///< |2 x0 / v0|
    double mu_t = 0; ///< temporal width mu_c m / k0 of the coupling seen at constant velocity
    double dt = 0;   ///< effective step, t_end * tau0 / n_steps
    long n_steps = 0;
    int stride = 0;
};

/// 400 steps per optical period. Without an explicit dt the step is also
/// capped at mu_t / 40.
double default_time_step(const SimulationConfig& config);

/// Throws ConfigError on non-physical values.
DerivedParameters derive_parameters(const SimulationConfig& config);

/// E_K for a requested Xi at the config's k0, mu_c, omega_c (E_K = k0 mu_c Xi / 2 with omega_c = 1).
double kinetic_energy_for_xi(const SimulationConfig& config, double xi);

/// Uniform periodic grid x_j = x_min + j dx, j = 0..n_x-1.
class Grid {
public:
    Grid(double x_min, double x_max, int n_x);

    static Grid from_config(const SimulationConfig& config);

    int size() const { return n_x_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double dx() const { return dx_; }
    double x(int j) const { return x_min_ + j * dx_; }

    /// Discrete-Fourier angular wavenumber of FFT bin j.
    double k(int j) const;

    const std::vector<double>& positions() const { return xs_; }
    const std::vector<double>& wavenumbers() const { return ks_; }

private:
    double x_min_;
    double x_max_;
    int n_x_;
    double dx_;
    std::vector<double> xs_;
    std::vector<double> ks_;
};

/// Full validation: derived parameters plus wavepacket/domain geometry.
void validate(const SimulationConfig& config);

} // namespace flyatom
