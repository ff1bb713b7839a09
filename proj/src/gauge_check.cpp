#include "flyatom/gauge_check.hpp"

#include "flyatom/errors.hpp"
#include "flyatom/rabi.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flyatom {

namespace {

// Dense spectral operator F^dag diag(f(k)) F on the periodic grid.
Operator spectral_matrix(const Grid& grid, double power) {
    const int n = grid.size();
    Operator fourier(n, n);
    for (int q = 0; q < n; ++q)
        for (int j = 0; j < n; ++j)
            fourier(q, j) = std::exp(cplx(0, -2.0 * std::numbers::pi * q * j / n)) / std::sqrt(double(n));
    Eigen::VectorXcd symbol(n);
    for (int q = 0; q < n; ++q)
        symbol[q] = std::pow(grid.k(q), power);
    return fourier.adjoint() * symbol.asDiagonal() * fourier;
}

Eigen::VectorXd lowest_eigenvalues(const Operator& h, int count) {
    Eigen::SelfAdjointEigenSolver<Operator> solver(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("gauge check: eigendecomposition failed");
    return solver.eigenvalues().head(std::min<Eigen::Index>(count, solver.eigenvalues().size()));
}

} // namespace

GaugeCheckReport verify_gauge_equivalence(const Grid& grid, const SimulationConfig& config, int n_eigenvalues) {
    const HilbertDims& dims = config.dims;
    dims.validate();
    if (grid.size() > gauge_check_max_points || dims.n_phot > gauge_check_max_photons)
        throw ContractError("verify_gauge_equivalence: dense problem too large (n_x <= " +
                            std::to_string(gauge_check_max_points) + ", n_phot <= " +
                            std::to_string(gauge_check_max_photons) + " required)");
    const int n = grid.size();
    const int d = dims.dim();
    const double mass = derive_parameters(config).mass;

    // Conjugation is carried out at the guard cutoff before projecting.
    const HilbertDims big{dims.n_phot + dims.n_guard, 0};
    const HilbertDims big_guarded{dims.n_phot + dims.n_guard, dims.n_guard};
    std::vector<Operator> pzw(n);
    std::vector<double> eta(n), eta_prime(n);
    for (int j = 0; j < n; ++j) {
        eta[j] = config.coupling.eta(grid.x(j));
        eta_prime[j] = config.coupling.eta_prime(grid.x(j));
        pzw[j] = build_pzw(big, eta[j]);
    }

    const Operator p = spectral_matrix(grid, 1.0);
    const Operator p2 = spectral_matrix(grid, 2.0);
    const DipoleKineticTerms kinetic = build_dipole_kinetic_correction(dims);

    Operator conjugated = Operator::Zero(n * d, n * d);
    Operator dipole = Operator::Zero(n * d, n * d);
    Operator coulomb = Operator::Zero(n * d, n * d);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const cplx kin = p2(j, k) / (2.0 * mass);
            conjugated.block(j * d, k * d, d, d) = kin * (pzw[j] * pzw[k].adjoint()).topLeftCorner(d, d);
            dipole.block(j * d, k * d, d, d) =
                kin * Operator::Identity(d, d) +
                (eta_prime[j] * p(j, k) + p(j, k) * eta_prime[k]) / (2.0 * mass) * kinetic.sigma_x_quadrature;
            coulomb.block(j * d, k * d, d, d) = kin * Operator::Identity(d, d);
        }
        const Operator hc_big = build_rabi_coulomb(big_guarded, config.freq, eta[j]);
        conjugated.block(j * d, j * d, d, d) += (pzw[j] * hc_big * pzw[j].adjoint()).topLeftCorner(d, d);
        dipole.block(j * d, j * d, d, d) += eta_prime[j] * eta_prime[j] / (2.0 * mass) * kinetic.quadrature_squared +
                                            build_rabi_dipole(dims, config.freq, eta[j]);
        coulomb.block(j * d, j * d, d, d) += build_rabi_coulomb(dims, config.freq, eta[j]);
    }

    const Operator diff = conjugated - dipole;
    GaugeCheckReport report;
    report.n_x = n;
    report.dim = d;
    report.mass = mass;
    report.elementwise_discrepancy = diff.cwiseAbs().maxCoeff();

    std::vector<int> band;
    for (int q = 0; q < n; ++q)
        if (std::abs(grid.k(q)) <= 0.5 * std::numbers::pi / grid.dx())
            band.push_back(q);
    Operator waves = Operator::Zero(n * d, static_cast<Eigen::Index>(band.size()) * d);
    for (std::size_t b = 0; b < band.size(); ++b)
        for (int j = 0; j < n; ++j) {
            const cplx w = std::exp(cplx(0, grid.k(band[b]) * grid.x(j))) / std::sqrt(double(n));
            for (int r = 0; r < d; ++r)
                waves(j * d + r, static_cast<Eigen::Index>(b) * d + r) = w;
        }
    report.max_discrepancy = (waves.adjoint() * diff * waves).cwiseAbs().maxCoeff();

    const Eigen::VectorXd ec = lowest_eigenvalues(coulomb, n_eigenvalues);
    const Eigen::VectorXd ed = lowest_eigenvalues(dipole, n_eigenvalues);
    for (Eigen::Index i = 0; i < ec.size(); ++i) {
        report.coulomb_eigenvalues.push_back(ec[i]);
        report.dipole_eigenvalues.push_back(ed[i]);
        report.eigenvalue_discrepancy = std::max(report.eigenvalue_discrepancy, std::abs(ec[i] - ed[i]));
    }
    return report;
}

GaugeCheckReport verify_gauge_equivalence_default(const SimulationConfig& config) {
    SimulationConfig small = config;
    small.dims = HilbertDims{4, 10};
    return verify_gauge_equivalence(Grid(-8.0, 8.0, 64), small);
}

} // namespace flyatom
