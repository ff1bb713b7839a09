#pragma once

// Per-grid-point eigendecomposition of the local Rabi Hamiltonian H_R(eta(x_j)).
//
// Both gauges conserve the parity -sigma_z (-1)^{a^dag a}, so each local
// Hamiltonian is diagonalized one parity block at a time. Points where
// eta(x_j) < bare_threshold use the analytic bare spectrum.

#include "flyatom/config.hpp"
#include "flyatom/wavepacket.hpp"

#include <vector>

namespace flyatom {

inline constexpr double bare_threshold = 1e-12;

/// Index sets of the two parity sectors, each in ascending index order.
struct ParityBlocks {
    std::vector<int> even; ///< contains |g,0>
    std::vector<int> odd;

    static ParityBlocks of(const HilbertDims& dims);
    const std::vector<int>& block(int b) const { return b == 0 ? even : odd; }
};

struct BlockSpectrum {
    Eigen::VectorXd values; ///< ascending
    Operator vectors;       ///< columns in block-local coordinates
};

struct LocalSpectrum {
    double eta = 0;
    bool bare = true;
    BlockSpectrum blocks[2];
};

Operator local_rabi_hamiltonian(const SimulationConfig& config, Gauge gauge, double eta);

class LocalSpectra {
public:
    LocalSpectra(const Grid& grid, const SimulationConfig& config, Gauge gauge);

    Gauge gauge() const { return gauge_; }
    const HilbertDims& dims() const { return dims_; }
    const ParityBlocks& parity_blocks() const { return blocks_; }
    int points() const { return static_cast<int>(points_.size()); }
    const LocalSpectrum& operator[](int j) const { return points_[j]; }

    /// Bare energies omega_c n +/- omega_a / 2 indexed by Rabi index.
    const Eigen::VectorXd& bare_energies() const { return bare_energies_; }

    /// <psi_j| H_R(x_j) |psi_j> summed with dx weight.
    double expectation(const WavepacketState& state) const;

private:
    Gauge gauge_;
    HilbertDims dims_;
    ParityBlocks blocks_;
    Eigen::VectorXd bare_energies_;
    std::vector<LocalSpectrum> points_;
};

} // namespace flyatom
