#include "flyatom/perturbation.hpp"

#include "flyatom/errors.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace flyatom {

namespace {

void check_parameters(double eta0, double xi) {
    if (!(eta0 > 0) || !std::isfinite(eta0))
        throw InputError("perturbation theory requires eta0 > 0");
    if (!(xi > 0) || !std::isfinite(xi))
        throw InputError("perturbation theory requires Xi > 0");
}

struct Integrand {
    cplx coefficient[3]; // <n|A_k|g,0> for eta^k, k = 1..3
    double eta0;
    double mu_t;
    double delta;
    bool imaginary;
};

double evaluate(double t, void* p) {
    const auto& f = *static_cast<const Integrand*>(p);
    const double eta = f.eta0 * std::exp(-t * t / (2 * f.mu_t * f.mu_t));
    const cplx element = eta * (f.coefficient[0] + eta * (f.coefficient[1] + eta * f.coefficient[2]));
    const cplx value = cplx(0, -1) * element * std::exp(cplx(0, f.delta * t));
    return f.imaginary ? value.imag() : value.real();
}

} // namespace

PerturbativeAmplitudes perturbative_amplitudes(double eta0, double xi) {
    check_parameters(eta0, xi);
    using std::numbers::pi;
    const double x2 = 1.0 / (xi * xi);
    const double e3 = eta0 * eta0 * eta0;
    PerturbativeAmplitudes c;
    c.c_e1 = -eta0 / xi * std::sqrt(2 * pi) * std::exp(-2 * x2) + e3 / xi * std::sqrt(8 * pi / 3) * std::exp(-2.0 / 3 * x2);
    c.c_g2 = cplx(0, -eta0 * eta0 / xi * std::sqrt(2 * pi) * std::exp(-x2));
    c.c_e3 = e3 / xi * std::sqrt(16 * pi / 9) * std::exp(-8.0 / 3 * x2);
    return c;
}

double perturbative_photon_number(const PerturbativeAmplitudes& c) {
    return std::norm(c.c_e1) + 2 * std::norm(c.c_g2) + 3 * std::norm(c.c_e3);
}

double perturbative_photon_number(double eta0, double xi) {
    return perturbative_photon_number(perturbative_amplitudes(eta0, xi));
}

cplx quadrature_oracle(double eta0, double xi, const BareLabel& target, const QuadratureOptions& options) {
    check_parameters(eta0, xi);
    const bool allowed = (target.spin == Spin::e && (target.photons == 1 || target.photons == 3)) ||
                         (target.spin == Spin::g && target.photons == 2);
    if (!allowed)
        throw InputError("quadrature_oracle target must be e,1 / g,2 / e,3, got " + target.str());

    static std::once_flag handler_once;
    std::call_once(handler_once, [] { gsl_set_error_handler_off(); });

    const HilbertDims dims{6, 0};
    const Operator a = fock_annihilation(dims.fock_levels());
    const Operator x = a + a.adjoint();
    const Operator x2 = x * x;
    const double wa = options.omega_a;
    const Operator a1 = wa * fock_spin(x, sigma_y());
    const Operator a2 = -wa * fock_spin(x2, sigma_z());
    const Operator a3 = -(2.0 / 3.0) * wa * fock_spin(x2 * x, sigma_y());

    const int n = dims.index(target);
    const int g0 = dims.index({Spin::g, 0});
    Integrand f;
    f.coefficient[0] = a1(n, g0);
    f.coefficient[1] = a2(n, g0);
    f.coefficient[2] = a3(n, g0);
    f.eta0 = eta0;
    f.mu_t = 1.0 / xi;
    const double energy_n = target.photons + (target.spin == Spin::e ? 0.5 : -0.5) * wa;
    f.delta = energy_n - (-0.5 * wa);

    std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
        gsl_integration_workspace_alloc(static_cast<std::size_t>(options.max_intervals)),
        &gsl_integration_workspace_free);
    const double half = options.window * f.mu_t;
    double parts[2];
    for (int k = 0; k < 2; ++k) {
        f.imaginary = k == 1;
        gsl_function fn{&evaluate, &f};
        double error = 0;
        const int status = gsl_integration_qag(&fn, -half, half, options.epsabs, options.epsrel,
                                               static_cast<std::size_t>(options.max_intervals), GSL_INTEG_GAUSS61,
                                               ws.get(), &parts[k], &error);
        if (status != GSL_SUCCESS && error > std::max(options.epsabs, 1e-10)) {
            std::ostringstream msg;
            msg << "quadrature for " << target.str() << (k ? " (imag)" : " (real)") << " did not converge: "
                << gsl_strerror(status) << ", estimate " << parts[k] << " +/- " << error << " at eta0=" << eta0
                << " Xi=" << xi;
            throw NumericalError(msg.str());
        }
    }
    return {parts[0], parts[1]};
}

PerturbativeAmplitudes quadrature_amplitudes(double eta0, double xi, const QuadratureOptions& options) {
    return {quadrature_oracle(eta0, xi, {Spin::e, 1}, options), quadrature_oracle(eta0, xi, {Spin::g, 2}, options),
            quadrature_oracle(eta0, xi, {Spin::e, 3}, options)};
}

double oracle_relative_discrepancy(double eta0, double xi) {
    const PerturbativeAmplitudes c = perturbative_amplitudes(eta0, xi);
    const PerturbativeAmplitudes q = quadrature_amplitudes(eta0, xi);
    const cplx pc[3] = {c.c_e1, c.c_g2, c.c_e3};
    const cplx pq[3] = {q.c_e1, q.c_g2, q.c_e3};
    double worst = 0;
    for (int i = 0; i < 3; ++i)
        worst = std::max(worst, std::abs(pc[i] - pq[i]) / std::abs(pq[i]));
    return worst;
}

} // namespace flyatom
