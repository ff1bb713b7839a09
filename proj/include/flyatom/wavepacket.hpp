#pragma once

#include "flyatom/config.hpp"
#include "flyatom/hilbert.hpp"

#include <span>
#include <vector>

namespace flyatom {

enum class Gauge { coulomb, dipole };

std::string to_string(Gauge gauge);

/// Joint state psi(x_j, r) on the grid times the Rabi space.
/// Storage is row-major over (grid point, Rabi index); sum |psi|^2 dx = 1.
class WavepacketState {
public:
    WavepacketState() = default;
    WavepacketState(int n_x, int dim, double dx, Gauge gauge = Gauge::coulomb);

    int points() const { return n_x_; }
    int dim() const { return dim_; }
    double dx() const { return dx_; }
    Gauge gauge() const { return gauge_; }
    void set_gauge(Gauge gauge) { gauge_ = gauge; }

    cplx& operator()(int j, int r) { return amplitudes_[static_cast<std::size_t>(j) * dim_ + r]; }
    cplx operator()(int j, int r) const { return amplitudes_[static_cast<std::size_t>(j) * dim_ + r]; }

    Eigen::Map<StateVector> at(int j) { return {amplitudes_.data() + static_cast<std::size_t>(j) * dim_, dim_}; }
    Eigen::Map<const StateVector> at(int j) const {
        return {amplitudes_.data() + static_cast<std::size_t>(j) * dim_, dim_};
    }

    std::span<cplx> amplitudes() { return amplitudes_; }
    std::span<const cplx> amplitudes() const { return amplitudes_; }

    double norm_squared() const;
    void normalize();

    /// Rabi indices carrying any nonzero amplitude.
    std::vector<bool> occupied_channels() const;

    /// True if any amplitude is NaN or infinite.
    bool has_nonfinite() const;

private:
    int n_x_ = 0;
    int dim_ = 0;
    double dx_ = 0;
    Gauge gauge_ = Gauge::coulomb;
    std::vector<cplx> amplitudes_;
};

/// G((x - x0)/mu_s) exp(i k0 x) |g, 0>, normalized on the grid.
WavepacketState initial_state(const Grid& grid, const SimulationConfig& config);

/// Largest amplitude difference scaled by sqrt(dx), i.e. a discrete L-infinity
/// distance consistent with the grid normalization.
double max_distance(const WavepacketState& a, const WavepacketState& b);

/// Discrete L2 distance sqrt(sum |a - b|^2 dx).
double l2_distance(const WavepacketState& a, const WavepacketState& b);

} // namespace flyatom
