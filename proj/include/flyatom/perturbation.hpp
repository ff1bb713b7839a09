#pragma once

// First-order time-dependent perturbation theory for an atom crossing the
// cavity at constant velocity. The coupling seen by the atom is
//     eta(t) = eta0 exp(-t^2 / 2 mu_t^2),   mu_t = 1 / Xi   (units of 1/omega_c),
// and the Coulomb-gauge Rabi Hamiltonian is expanded to third order in the
// field quadrature X = a + a^dag:
//     V(t) = (omega_a / 2) [2 eta X sigma_y - 2 eta^2 X^2 sigma_z - (4/3) eta^3 X^3 sigma_y].

#include "flyatom/hilbert.hpp"

#include <array>

namespace flyatom {

struct PerturbativeAmplitudes {
    cplx c_e1;
    cplx c_g2;
    cplx c_e3;
};

/// Closed-form amplitudes from |g,0> at resonance (omega_a = omega_c).
PerturbativeAmplitudes perturbative_amplitudes(double eta0, double xi);

/// |c_e1|^2 + 2 |c_g2|^2 + 3 |c_e3|^2.
double perturbative_photon_number(double eta0, double xi);
double perturbative_photon_number(const PerturbativeAmplitudes& c);

struct QuadratureOptions {
    double omega_a = 1.0;    ///< atomic frequency in units of omega_c
    double window = 12.0;    ///< integrate over |t| <= window * mu_t
    double epsabs = 1e-15;
    double epsrel = 1e-12;
    int max_intervals = 2000;
};

/// c_n = -i int <n|V(t)|g,0> exp(i (w_n - w_g0) t) dt by adaptive quadrature,
/// with matrix elements taken from truncated ladder operators.
/// Throws InputError for targets other than |e,1>, |g,2>, |e,3> and
/// NumericalError if the quadrature fails to converge.
cplx quadrature_oracle(double eta0, double xi, const BareLabel& target, const QuadratureOptions& options = {});

/// The three amplitudes from quadrature_oracle.
PerturbativeAmplitudes quadrature_amplitudes(double eta0, double xi, const QuadratureOptions& options = {});

/// max over the three amplitudes of |closed - quadrature| / |quadrature|.
double oracle_relative_discrepancy(double eta0, double xi);

} // namespace flyatom
