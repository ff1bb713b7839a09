#pragma once

#include "flyatom/config.hpp"
#include "flyatom/hilbert.hpp"

namespace flyatom::test {

/// Default parameters on a reduced grid that still resolves k0 and contains the packet.
inline SimulationConfig small_config(double kinetic_energy = 40.0) {
    SimulationConfig c;
    c.kinetic_energy = kinetic_energy;
    c.grid.x_min = -6.5;
    c.grid.x_max = 6.5;
    c.grid.n_x = 512;
    c.dims = HilbertDims{5, 6};
    return c;
}

/// Scaling-and-squaring Taylor exponential, independent of any eigensolver.
inline Operator expm_taylor(const Operator& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.25) {
        scale *= 0.5;
        ++squarings;
    }
    const Operator b = a * scale;
    Operator term = Operator::Identity(a.rows(), a.cols());
    Operator sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i)
        sum = sum * sum;
    return sum;
}

} // namespace flyatom::test
