#include "flyatom/rabi.hpp"

#include "flyatom/coupling.hpp"

#include <cmath>

namespace flyatom {

std::string to_string(ProfileShape shape) {
    switch (shape) {
    case ProfileShape::gaussian:
        return "gaussian";
    }
    return "unknown";
}

ProfileShape profile_shape_from_string(const std::string& name) {
    if (name == "gaussian")
        return ProfileShape::gaussian;
    throw ConfigError("unknown coupling profile shape '" + name + "'");
}

Operator fock_quadrature(int levels) {
    const Operator a = fock_annihilation(levels);
    return a + a.adjoint();
}

Operator build_rabi_coulomb(const HilbertDims& dims, const RabiFrequencies& freq, double eta) {
    dims.validate();
    if (eta < 0)
        throw ContractError("build_rabi_coulomb: eta must be >= 0");
    const HilbertDims big = dims.expanded();
    const int levels = big.fock_levels();
    const Operator arg = 2.0 * eta * fock_quadrature(levels);
    // Exact at eta = 0 rather than reconstructed from an eigenbasis.
    const Operator c = eta == 0 ? Operator(Operator::Identity(levels, levels))
                                : matrix_function(arg, [](double w) { return std::cos(w); });
    const Operator s = eta == 0 ? Operator(Operator::Zero(levels, levels))
                                : matrix_function(arg, [](double w) { return std::sin(w); });

    Operator number = Operator::Zero(big.fock_levels(), big.fock_levels());
    for (int n = 0; n < big.fock_levels(); ++n)
        number(n, n) = n;

    Operator h = freq.omega_c * fock_spin(number, SpinMatrix::Identity()) +
                 0.5 * freq.omega_a * (fock_spin(c, sigma_z()) + fock_spin(s, sigma_y()));
    Operator out = project(h, dims);
    // Remove round-off asymmetry from the eigensolver.
    return 0.5 * (out + out.adjoint());
}

Operator build_rabi_dipole(const HilbertDims& dims, const RabiFrequencies& freq, double eta) {
    dims.validate();
    if (eta < 0)
        throw ContractError("build_rabi_dipole: eta must be >= 0");
    const int levels = dims.fock_levels();
    const Operator a = fock_annihilation(levels);
    Operator number = Operator::Zero(levels, levels);
    for (int n = 0; n < levels; ++n)
        number(n, n) = n;
    Operator h = freq.omega_c * fock_spin(number, SpinMatrix::Identity()) +
                 0.5 * freq.omega_a * fock_spin(Operator::Identity(levels, levels), sigma_z()) -
                 I * freq.omega_c * eta * fock_spin(a - a.adjoint(), sigma_x());
    h.diagonal().array() += freq.omega_c * eta * eta;
    return h;
}

Operator build_pzw(const HilbertDims& dims, double eta) {
    dims.validate();
    if (eta < 0)
        throw ContractError("build_pzw: eta must be >= 0");
    if (eta == 0)
        return Operator::Identity(dims.dim(), dims.dim());
    const HilbertDims big = dims.expanded();
    const Operator generator = eta * fock_spin(fock_quadrature(big.fock_levels()), sigma_x());
    return project(matrix_function(generator, [](double w) { return std::exp(-I * w); }), dims);
}

DipoleKineticTerms build_dipole_kinetic_correction(const HilbertDims& dims) {
    dims.validate();
    const HilbertDims big = dims.expanded();
    const Operator x = fock_quadrature(big.fock_levels());
    DipoleKineticTerms terms;
    terms.sigma_x_quadrature = project(fock_spin(x, sigma_x()), dims);
    terms.quadrature_squared = project(fock_spin(x * x, SpinMatrix::Identity()), dims);
    return terms;
}

Operator field_quadrature(const HilbertDims& dims, bool dipole_gauge, double eta) {
    const int levels = dims.fock_levels();
    const Operator a = fock_annihilation(levels);
    Operator field = I * fock_spin(a - a.adjoint(), SpinMatrix::Identity());
    if (dipole_gauge)
        field -= 2.0 * eta * fock_spin(Operator::Identity(levels, levels), sigma_x());
    return field;
}

} // namespace flyatom
