#include "flyatom/wavepacket.hpp"

#include "flyatom/errors.hpp"

#include <cmath>

namespace flyatom {

std::string to_string(Gauge gauge) { return gauge == Gauge::coulomb ? "coulomb" : "dipole"; }

WavepacketState::WavepacketState(int n_x, int dim, double dx, Gauge gauge)
    : n_x_(n_x), dim_(dim), dx_(dx), gauge_(gauge),
      amplitudes_(static_cast<std::size_t>(n_x) * dim, cplx{}) {}

double WavepacketState::norm_squared() const {
    double s = 0;
    for (const cplx& c : amplitudes_)
        s += std::norm(c);
    return s * dx_;
}

void WavepacketState::normalize() {
    const double n = std::sqrt(norm_squared());
    if (!(n > 0))
        throw NumericalError("cannot normalize a zero state");
    for (cplx& c : amplitudes_)
        c /= n;
}

std::vector<bool> WavepacketState::occupied_channels() const {
    std::vector<bool> used(dim_, false);
    for (int j = 0; j < n_x_; ++j)
        for (int r = 0; r < dim_; ++r)
            if ((*this)(j, r) != cplx{})
                used[r] = true;
    return used;
}

bool WavepacketState::has_nonfinite() const {
    for (const cplx& c : amplitudes_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            return true;
    return false;
}

WavepacketState initial_state(const Grid& grid, const SimulationConfig& config) {
    const double margin = 8.0 * config.mu_s;
    if (grid.x_min() > config.x0 - margin || grid.x_max() < config.x0 + margin)
        throw ConfigError("initial wavepacket support is clipped by the domain boundary");

    const HilbertDims& dims = config.dims;
    WavepacketState state(grid.size(), dims.dim(), grid.dx(), Gauge::coulomb);
    const int ground = dims.index({Spin::g, 0});
    for (int j = 0; j < grid.size(); ++j) {
        const double x = grid.x(j);
        const double u = (x - config.x0) / config.mu_s;
        const double envelope = std::exp(-0.5 * u * u);
        state(j, ground) = envelope * std::exp(I * (config.k0 * x));
    }
    state.normalize();
    return state;
}

double max_distance(const WavepacketState& a, const WavepacketState& b) {
    if (a.points() != b.points() || a.dim() != b.dim())
        throw ContractError("max_distance: shape mismatch");
    double m = 0;
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i)
        m = std::max(m, std::abs(x[i] - y[i]));
    return m * std::sqrt(a.dx());
}

double l2_distance(const WavepacketState& a, const WavepacketState& b) {
    if (a.points() != b.points() || a.dim() != b.dim())
        throw ContractError("l2_distance: shape mismatch");
    double s = 0;
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i)
        s += std::norm(x[i] - y[i]);
    return std::sqrt(s * a.dx());
}

} // namespace flyatom
