#pragma once

// Dense full-space check that the PZW unitary maps the Coulomb-gauge
// Hamiltonian of the moving atom onto the dipole-gauge one,
//     T H^(c) T^dag = p^2/2m + sigma_x X [eta' p + p eta'] / 2m + eta'^2 X^2 / 2m + H_R^(d)(x),
// with p the spectral differentiation matrix on a small periodic grid.
//
// Products of position-dependent unitaries with p are not band-limited, so on
// a lattice the identity holds exactly only on states whose spectrum stays
// below half the Nyquist wavenumber. The primary discrepancy is measured on
// that subspace; the raw elementwise value is reported alongside.

#include "flyatom/config.hpp"

#include <vector>

namespace flyatom {

inline constexpr int gauge_check_max_points = 64;
inline constexpr int gauge_check_max_photons = 4;

struct GaugeCheckReport {
    int n_x = 0;
    int dim = 0;
    double mass = 0;
    double max_discrepancy = 0;         ///< max |<u|D|v>| over band-limited plane waves u, v
    double elementwise_discrepancy = 0; ///< max |D_ij| on the full lattice
    double eigenvalue_discrepancy = 0;  ///< max over the low-lying eigenvalues
    std::vector<double> coulomb_eigenvalues;
    std::vector<double> dipole_eigenvalues;
};

/// Throws ContractError if grid or Fock space exceed the dense limits.
GaugeCheckReport verify_gauge_equivalence(const Grid& grid, const SimulationConfig& config, int n_eigenvalues = 6);

/// The default small problem: 64 points on [-8, 8), n_phot = 4, n_guard = 10.
GaugeCheckReport verify_gauge_equivalence_default(const SimulationConfig& config);

} // namespace flyatom
