#include <cmath>

#include "cherenkov/dynamics.hpp"
#include "cherenkov/errors.hpp"
#include "doctest.h"

using namespace cherenkov;

namespace {

KernelSpec gaussian(double amplitude = 1.0)
{
    KernelSpec k;
    k.form = KernelForm::gaussian;
    k.amplitude = amplitude;
    return k;
}

SparseOperator small_hamiltonian(double g, int points = 12)
{
    ModelSpec pol = ModelSpec::polaron(1, g);
    FockBasis b = build_basis(GridSpec::uniform(1, 3.0, points), 2);
    return assemble_hamiltonian(pol, gaussian(), {2.0}, b);
}

}  // namespace

TEST_SUITE("dynamics")
{
    TEST_CASE("free evolution is a pure phase")
    {
        SparseOperator h = small_hamiltonian(0.0);
        Vec t = linspace(0.0, 10.0, 41);
        for (std::size_t limit : {std::size_t(5000), std::size_t(0)}) {
            EvolveOptions opts;
            opts.dense_limit = limit;
            DecayCurve c = evolve_survival(h, t, {}, opts);
            for (std::size_t i = 0; i < t.size(); ++i)
                CHECK(std::abs(c.amplitude[i] - std::exp(cplx(0.0, -2.0 * t[i]))) < 1e-9);
        }
    }

    TEST_CASE("dense and chebyshev paths agree")
    {
        SparseOperator h = small_hamiltonian(0.4);
        Vec t = linspace(0.0, 20.0, 81);
        DecayCurve dense = evolve_survival(h, t);
        EvolveOptions cheb;
        cheb.dense_limit = 0;
        DecayCurve c = evolve_survival(h, t, {}, cheb);
        CHECK(dense.method == "dense");
        CHECK(c.method == "chebyshev");
        CHECK(c.chebyshev_order % 2 == 0);
        CHECK(dense.spectral_weight == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.spectral_weight == doctest::Approx(1.0).epsilon(1e-8));
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(std::abs(dense.amplitude[i] - c.amplitude[i]) < 1e-8);
            CHECK(std::abs(dense.amplitude[i]) <= 1.0 + 1e-12);
        }
        CHECK(std::abs(dense.amplitude[0] - 1.0) < 1e-12);
    }

    TEST_CASE("time reversal conjugates the amplitude")
    {
        SparseOperator h = small_hamiltonian(0.3);
        DecayCurve fwd = evolve_survival(h, {0.7, 3.1});
        DecayCurve bwd = evolve_survival(h, {-0.7, -3.1});
        for (int i = 0; i < 2; ++i) CHECK(std::abs(fwd.amplitude[i] - std::conj(bwd.amplitude[i])) < 1e-12);
    }

    TEST_CASE("fit recovers a synthetic exponential")
    {
        DecayCurve c;
        c.t_grid = linspace(0.0, 5.0, 51);
        for (double t : c.t_grid) c.amplitude.push_back(std::exp(cplx(-0.03 * t, -7.3 * t)));
        DecayFit f = fit_decay(c, 0.5, 5.0);
        CHECK(std::abs(f.gamma - 0.03) < 1e-10);
        CHECK(std::abs(f.E - 7.3) < 1e-10);
        CHECK_THROWS_AS(fit_decay(c, 5.0, 0.5), Error);
        c.amplitude.back() = 0.0;
        try {
            fit_decay(c, 0.5, 5.0);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::underflow);
        }
    }

    TEST_CASE("short time decay scales with the coupling squared")
    {
        Vec t{0.5};
        double d1 = 1.0 - std::abs(evolve_survival(small_hamiltonian(0.02), t).amplitude[0]);
        double d2 = 1.0 - std::abs(evolve_survival(small_hamiltonian(0.04), t).amplitude[0]);
        double slope = std::log(d2 / d1) / std::log(2.0);
        CHECK(std::abs(slope - 2.0) < 0.3);
    }

    TEST_CASE("resonance comparison fills the reference curve")
    {
        DecayCurve c;
        c.t_grid = linspace(0.0, 2.0, 5);
        Resonance r = resonance(2.0, 0.1, 0.5, 0.1);
        for (double t : c.t_grid) c.amplitude.push_back(std::exp(cplx(0.0, -1.0) * r.z * t));
        ResonanceComparison cmp = compare_to_resonance(c, r);
        CHECK(c.reference.size() == c.t_grid.size());
        CHECK(cmp.max_abs_error < 1e-14);
        CHECK(cmp.within);
        CHECK(cmp.bound == doctest::Approx(10.0 * 0.01));
    }

    TEST_CASE("filter shape")
    {
        FilterSpec f = filter_spec(1.0, 0.0, 2.0, 0.25);
        CHECK(f(1.0) == 1.0);
        CHECK(f(0.8) == 1.0);
        CHECK(f(0.0) == 0.0);
        CHECK(f(2.5) == 0.0);
        CHECK(f(0.3) > 0.0);
        CHECK(f(0.3) < 1.0);
        CHECK(f(0.3) < f(0.5));
        CHECK_THROWS_AS(filter_spec(1.0, 0.0, 2.0, 1.5), Error);
        CHECK_THROWS_AS(filter_spec(3.0, 0.0, 2.0, 0.1), Error);
        CHECK_THROWS_AS(filter_spec(1.0, 0.0, 2.0, 0.0), Error);
        SparseOperator h = small_hamiltonian(0.3);
        DecayCurve c = evolve_survival(h, {0.0}, filter_spec(2.0, 1.0, 3.0, 0.3));
        CHECK(c.amplitude[0].real() <= 1.0 + 1e-12);
        CHECK(c.amplitude[0].real() > 0.5);
    }

    TEST_CASE("input errors")
    {
        SparseOperator h = small_hamiltonian(0.3);
        CHECK_THROWS_AS(evolve_survival(h, {}), Error);
        SparseOperator bad = from_triplets(2, {{0, 1, cplx(1.0, 0.0)}}, "bad", false);
        CHECK_THROWS_AS(evolve_survival(bad, {1.0}), Error);
    }

    TEST_CASE("recurrence time")
    {
        CHECK(recurrence_time({0.0, 0.01, 0.02, 0.03}, 0.015) == doctest::Approx(2 * M_PI / 0.01));
        CHECK(std::isinf(recurrence_time({0.0, 5.0}, 0.0)));
        Vec l = linspace(1.0, 2.0, 3);
        CHECK(l[1] == 1.5);
    }
}
