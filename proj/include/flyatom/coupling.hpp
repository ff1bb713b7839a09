#pragma once

#include <cmath>
#include <string>

namespace flyatom {

enum class ProfileShape { gaussian };

/// Position-dependent normalized coupling eta(x) of the cavity mode.
struct CouplingProfile {
    double eta0 = 0.3;
    double mu_c = 1.0;
    ProfileShape shape = ProfileShape::gaussian;

    double eta(double x) const {
        const double u = x / mu_c;
        return eta0 * std::exp(-0.5 * u * u);
    }

    /// d eta / dx.
    double eta_prime(double x) const { return -x / (mu_c * mu_c) * eta(x); }

    double operator()(double x) const { return eta(x); }
};

std::string to_string(ProfileShape shape);
ProfileShape profile_shape_from_string(const std::string& name);

} // namespace flyatom
