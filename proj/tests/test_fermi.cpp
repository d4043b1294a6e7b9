#include <cmath>

#include "cherenkov/errors.hpp"
#include "cherenkov/fermi.hpp"
#include "cherenkov/thresholds.hpp"
#include "doctest.h"

using namespace cherenkov;

namespace {

KernelSpec gaussian(double amplitude = 1.0, double width = 1.0)
{
    KernelSpec k;
    k.form = KernelForm::gaussian;
    k.amplitude = amplitude;
    k.width = width;
    return k;
}

// Polaron in d = 3 at P = 0 with a unit gaussian: k = sqrt(2(t - 1)), rho(t) = 4 pi k e^{-k^2} / (2 pi)^3.
double polaron_rest_density(double t)
{
    if (t <= 1.0) return 0.0;
    double k = std::sqrt(2.0 * (t - 1.0));
    return 4.0 * M_PI * k * std::exp(-k * k) / std::pow(2.0 * M_PI, 3);
}

}  // namespace

TEST_SUITE("fermi")
{
    const ModelSpec pol = ModelSpec::polaron(3);

    TEST_CASE("resonance position")
    {
        Resonance r = resonance(2.0, 0.5, 0.25, 0.1);
        CHECK(r.z.real() == doctest::Approx(2.0 - 0.01 * 0.5));
        CHECK(r.z.imag() == doctest::Approx(-0.01 * 0.25));
        CHECK_THROWS_AS(resonance(2.0, 0.5, -1.0, 0.1), Error);
    }

    TEST_CASE("spectral density against the closed form")
    {
        for (double t : {1.2, 2.0, 3.5})
            CHECK(spectral_density(pol, gaussian(), {0, 0, 0}, t) ==
                  doctest::Approx(polaron_rest_density(t)).epsilon(1e-6));
        CHECK(spectral_density(pol, gaussian(), {0, 0, 0}, 0.9) == 0.0);
        // friction d = q = 1, constant kernel: two k roots, xi band of length 2 sqrt(2t)
        KernelSpec c;
        c.form = KernelForm::constant;
        for (double t : {0.3, 1.0, 2.0})
            CHECK(spectral_density(ModelSpec::friction(1, 1), c, {1.0}, t) ==
                  doctest::Approx(std::sqrt(2.0 * t) / (M_PI * M_PI)).epsilon(1e-6));
    }

    TEST_CASE("gamma is pi times the density at the bare energy and scales with the amplitude squared")
    {
        Vec P{0, 0, 2};
        double g1 = gamma_nelson(pol, gaussian(1.0), P);
        CHECK(g1 > 0.0);
        CHECK(g1 == doctest::Approx(M_PI * spectral_density(pol, gaussian(), P, 2.0)).epsilon(2e-3));
        CHECK(gamma_nelson(pol, gaussian(3.0), P) == doctest::Approx(9.0 * g1).epsilon(1e-12));
        CHECK(theta_nelson(pol, gaussian(3.0), P) == doctest::Approx(9.0 * theta_nelson(pol, gaussian(1.0), P)).epsilon(1e-9));
    }

    TEST_CASE("below threshold the rate vanishes exactly")
    {
        ModelSpec nel = ModelSpec::nelson(1.0, 3);
        CHECK(gamma_nelson(nel, gaussian(), {0, 0, 0.8 * p_star(nel)}) == 0.0);
        CHECK(gamma_nelson(pol, gaussian(), {0, 0, 1.0}) == 0.0);
        CHECK(gamma_theta_friction(ModelSpec::friction(1, 1), gaussian(), {0.0}).gamma == 0.0);
    }

    TEST_CASE("theta below threshold is an ordinary integral")
    {
        double direct =
            integrate([](double t) { return polaron_rest_density(t) / t; }, 1.0, INFINITY, 1e-12).value;
        CHECK(theta_nelson(pol, gaussian(), {0, 0, 0}) == doctest::Approx(direct).epsilon(1e-6));
    }

    TEST_CASE("principal value against the exponential integral")
    {
        // p.v. int_0^inf e^{-t} / (t - E) dt = -e^{-E} Ei(E)
        for (double E : {0.3, 1.0, 2.5}) {
            double pv = principal_value([](double t) { return std::exp(-t); }, 0.0, E);
            CHECK(pv == doctest::Approx(-std::exp(-E) * std::expint(E)).epsilon(1e-8));
        }
        // a kink at t = 1 passed as a breakpoint
        auto tent = [](double t) { return std::max(0.0, 1.0 - std::abs(t - 1.0)); };
        double E = 0.4;
        double pv = principal_value(tent, 0.0, E, 1e-10, {1.0});
        // int_0^1 t/(t-E) + int_1^2 (2-t)/(t-E)
        double a = 1.0 + E * std::log((1.0 - E) / E);
        double b = (2.0 - E) * std::log((2.0 - E) / (1.0 - E)) - 1.0;
        CHECK(pv == doctest::Approx(a + b).epsilon(1e-8));
    }

    TEST_CASE("theta_defined")
    {
        KernelSpec c;
        c.form = KernelForm::constant;
        CHECK_FALSE(theta_defined(pol, c));
        CHECK(theta_defined(pol, gaussian()));
        c.k_max = 2.0;
        CHECK(theta_defined(pol, c));
    }

    TEST_CASE("richardson extrapolation is exact for quadratics")
    {
        Vec eps{0.2, 0.1, 0.05};
        Vec v;
        for (double e : eps) v.push_back(3.0 - 2.0 * e + 5.0 * e * e);
        CHECK(richardson_zero(eps, v) == doctest::Approx(3.0).epsilon(1e-13));
        CHECK_THROWS_AS(richardson_zero({0.1}, {}), Error);
    }

    TEST_CASE("broadened oracle converges to the golden rule")
    {
        Vec P{0, 0, 2};
        OracleResult o = broadened_oracle(pol, gaussian(), P);
        double g = gamma_nelson(pol, gaussian(), P);
        double th = theta_nelson(pol, gaussian(), P);
        CHECK(std::abs(o.gamma - g) < 1e-2 * std::abs(g));
        CHECK(std::abs(o.theta - th) < 1e-2 * std::max(std::abs(th), std::abs(g)));
        CHECK_THROWS_AS(broadened_oracle(pol, gaussian(), P, {0.1}), Error);
        CHECK_THROWS_AS(broadened_oracle(pol, gaussian(), P, {0.1, 0.2}), Error);
    }
}
