#pragma once

// Quantum Rabi Hamiltonians in the Coulomb and dipole gauges, the PZW unitary
// linking them, and matrix functions of Hermitian operators.
//
// Quantities involving trigonometric or exponential functions of the field
// quadrature (a + a^dag) are evaluated at the guard cutoff
// dims.n_phot + dims.n_guard and then projected onto the physical block.

#include "flyatom/errors.hpp"
#include "flyatom/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <type_traits>

namespace flyatom {

struct RabiFrequencies {
    double omega_c = 1.0;
    double omega_a = 1.0;
};

/// Largest |H - H^dag| entry.
inline double hermiticity_defect(const Operator& op) {
    return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

/// f(op) through the spectral decomposition of a Hermitian operator.
/// `f` maps a real eigenvalue to a real or complex scalar.
template <class F>
Operator matrix_function(const Operator& hermitian, F&& f, double tolerance = 1e-12) {
    if (hermitian.rows() != hermitian.cols())
        throw ContractError("matrix_function: operator is not square");
    const double scale = std::max(1.0, hermitian.cwiseAbs().maxCoeff());
    if (hermiticity_defect(hermitian) > tolerance * scale)
        throw ContractError("matrix_function: operator is not Hermitian (defect " +
                            std::to_string(hermiticity_defect(hermitian)) + ")");
    Eigen::SelfAdjointEigenSolver<Operator> solver(hermitian);
    if (solver.info() != Eigen::Success)
        throw NumericalError("matrix_function: eigendecomposition failed");
    const Eigen::VectorXd& w = solver.eigenvalues();
    Eigen::VectorXcd fw(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
        fw[i] = cplx(f(w[i]));
    const Operator& v = solver.eigenvectors();
    return v * fw.asDiagonal() * v.adjoint();
}

/// Field quadrature a + a^dag on the Fock factor only.
Operator fock_quadrature(int levels);

/// omega_c a^dag a + (omega_a / 2) { sigma_z cos[2 eta (a + a^dag)] + sigma_y sin[2 eta (a + a^dag)] }
Operator build_rabi_coulomb(const HilbertDims& dims, const RabiFrequencies& freq, double eta);

/// omega_c a^dag a + (omega_a / 2) sigma_z - i omega_c eta sigma_x (a - a^dag) + omega_c eta^2
Operator build_rabi_dipole(const HilbertDims& dims, const RabiFrequencies& freq, double eta);

/// PZW unitary T = exp[-i eta sigma_x (a + a^dag)], maps Coulomb to dipole: H_d = T H_c T^dag.
Operator build_pzw(const HilbertDims& dims, double eta);

/// Rabi-space factors of the transformed kinetic energy
///     T p^2 T^dag = p^2 + sigma_x (a + a^dag) [eta' p + p eta'] + eta'^2 (a + a^dag)^2.
struct DipoleKineticTerms {
    Operator sigma_x_quadrature; ///< multiplies eta'(x) p + p eta'(x)
    Operator quadrature_squared; ///< multiplies eta'(x)^2
};

DipoleKineticTerms build_dipole_kinetic_correction(const HilbertDims& dims);

/// Field operator whose positive-frequency part counts emitted photons:
/// i(a - a^dag) in the Coulomb gauge and its PZW image i(a - a^dag) - 2 eta sigma_x
/// in the dipole gauge.
Operator field_quadrature(const HilbertDims& dims, bool dipole_gauge, double eta);

} // namespace flyatom
