#include "flyatom/local_spectrum.hpp"

#include "flyatom/errors.hpp"

#include <Eigen/Eigenvalues>

namespace flyatom {

ParityBlocks ParityBlocks::of(const HilbertDims& dims) {
    ParityBlocks p;
    for (int i = 0; i < dims.dim(); ++i)
        (parity(dims.label(i)) > 0 ? p.even : p.odd).push_back(i);
    return p;
}

Operator local_rabi_hamiltonian(const SimulationConfig& config, Gauge gauge, double eta) {
    return gauge == Gauge::coulomb ? build_rabi_coulomb(config.dims, config.freq, eta)
                                   : build_rabi_dipole(config.dims, config.freq, eta);
}

LocalSpectra::LocalSpectra(const Grid& grid, const SimulationConfig& config, Gauge gauge)
    : gauge_(gauge), dims_(config.dims), blocks_(ParityBlocks::of(config.dims)) {
    dims_.validate();
    bare_energies_.resize(dims_.dim());
    for (int i = 0; i < dims_.dim(); ++i) {
        const BareLabel l = dims_.label(i);
        bare_energies_[i] = config.freq.omega_c * l.photons +
                            (l.spin == Spin::e ? 0.5 : -0.5) * config.freq.omega_a;
    }

    points_.resize(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        LocalSpectrum& p = points_[j];
        p.eta = config.coupling.eta(grid.x(j));
        p.bare = p.eta < bare_threshold;
        if (p.bare)
            continue;
        const Operator h = local_rabi_hamiltonian(config, gauge, p.eta);
        for (int b = 0; b < 2; ++b) {
            const auto& idx = blocks_.block(b);
            const int n = static_cast<int>(idx.size());
            Operator hb(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    hb(r, c) = h(idx[r], idx[c]);
            Eigen::SelfAdjointEigenSolver<Operator> solver(hb);
            if (solver.info() != Eigen::Success)
                throw NumericalError("local Rabi eigendecomposition failed at x = " +
                                     std::to_string(grid.x(j)));
            p.blocks[b].values = solver.eigenvalues();
            p.blocks[b].vectors = solver.eigenvectors();
        }
    }
}

double LocalSpectra::expectation(const WavepacketState& state) const {
    if (state.points() != points() || state.dim() != dims_.dim())
        throw ContractError("LocalSpectra::expectation: state shape mismatch");
    double total = 0;
    StateVector v;
    for (int j = 0; j < points(); ++j) {
        const auto psi = state.at(j);
        const LocalSpectrum& p = points_[j];
        if (p.bare) {
            for (int r = 0; r < dims_.dim(); ++r)
                total += bare_energies_[r] * std::norm(psi[r]);
            continue;
        }
        for (int b = 0; b < 2; ++b) {
            const auto& idx = blocks_.block(b);
            v.resize(static_cast<Eigen::Index>(idx.size()));
            for (std::size_t r = 0; r < idx.size(); ++r)
                v[static_cast<Eigen::Index>(r)] = psi[idx[r]];
            const StateVector c = p.blocks[b].vectors.adjoint() * v;
            total += (p.blocks[b].values.array() * c.array().abs2()).sum();
        }
    }
    return total * state.dx();
}

} // namespace flyatom
