#include "flyatom/errors.hpp"
#include "flyatom/perturbation.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace flyatom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("closed forms agree with quadrature over the documented grid", "[perturbation]") {
    for (double eta0 : {0.1, 0.3})
        for (double xi : {0.5, 1.0, 2.0, 4.0}) {
            INFO("eta0 = " << eta0 << ", Xi = " << xi);
            CHECK(oracle_relative_discrepancy(eta0, xi) < 1e-6);
        }
}

TEST_CASE("amplitudes at E_K = 40", "[perturbation]") {
    const double xi = 40.0 / (10.0 * std::numbers::pi);
    const PerturbativeAmplitudes c = perturbative_amplitudes(0.3, xi);
    const PerturbativeAmplitudes q = quadrature_amplitudes(0.3, xi);
    CHECK_THAT(c.c_e1.real(), WithinRel(q.c_e1.real(), 1e-6));
    CHECK_THAT(c.c_g2.imag(), WithinRel(q.c_g2.imag(), 1e-6));
    CHECK_THAT(c.c_e3.real(), WithinRel(q.c_e3.real(), 1e-6));
    CHECK_THAT(c.c_e1.real(), WithinAbs(-0.1313, 1e-4));
    CHECK_THAT(perturbative_photon_number(c), WithinAbs(0.0358, 1e-4));
}

TEST_CASE("printed structure of the amplitudes", "[perturbation]") {
    const PerturbativeAmplitudes c = perturbative_amplitudes(0.3, 1.7);
    CHECK(c.c_g2.real() == 0.0);
    CHECK(c.c_e3.imag() == 0.0);
    CHECK_THAT(std::abs(c.c_g2), WithinRel(0.09 * std::sqrt(2 * std::numbers::pi) * std::exp(-1 / (1.7 * 1.7)) / 1.7, 1e-14));
    const cplx g2 = quadrature_oracle(0.3, 1.7, {Spin::g, 2});
    CHECK(std::abs(g2.real()) < 1e-12);
    const PerturbativeAmplitudes slow = perturbative_amplitudes(0.3, 1e-3);
    CHECK(std::abs(slow.c_e1) < 1e-100);
    CHECK(std::abs(slow.c_g2) < 1e-100);
    CHECK(std::abs(slow.c_e3) < 1e-100);
    CHECK(perturbative_photon_number(0.3, 1e4) < 1e-8);
}

TEST_CASE("first excited amplitude is linear in weak coupling", "[perturbation]") {
    const cplx a = quadrature_oracle(1e-4, 1.5, {Spin::e, 1});
    const cplx b = quadrature_oracle(2e-4, 1.5, {Spin::e, 1});
    CHECK_THAT(std::abs(b / a), WithinRel(2.0, 1e-6));
}

TEST_CASE("photon number has a single interior maximum in E_K", "[perturbation]") {
    std::vector<double> n;
    for (double ek = 1.0; ek <= 2000.0; ek *= 1.2)
        n.push_back(perturbative_photon_number(0.3, ek / (10.0 * std::numbers::pi)));
    const auto peak = std::max_element(n.begin(), n.end());
    CHECK(peak != n.begin());
    CHECK(peak + 1 != n.end());
    CHECK(std::is_sorted(n.begin(), peak + 1));
    CHECK(std::is_sorted(peak, n.end(), std::greater<>()));
}

TEST_CASE("oracle rejects unsupported targets and parameters", "[perturbation]") {
    CHECK_THROWS_AS(quadrature_oracle(0.3, 1.0, {Spin::e, 0}), InputError);
    CHECK_THROWS_AS(quadrature_oracle(0.3, 1.0, {Spin::g, 1}), InputError);
    CHECK_THROWS_AS(perturbative_amplitudes(0.0, 1.0), InputError);
    CHECK_THROWS_AS(perturbative_amplitudes(0.3, -1.0), InputError);
    QuadratureOptions starved;
    starved.max_intervals = 1;
    starved.epsrel = 1e-15;
    CHECK_THROWS_AS(quadrature_oracle(0.3, 0.2, {Spin::e, 3}, starved), NumericalError);
}
