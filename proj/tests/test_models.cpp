#include <algorithm>
#include <cmath>

#include "cherenkov/errors.hpp"
#include "cherenkov/models.hpp"
#include "cherenkov/rng.hpp"
#include "cherenkov/thresholds.hpp"
#include "doctest.h"

using namespace cherenkov;

namespace {

bool throws_kind(ErrorKind kind, const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

Vec random_vec(CounterRng& r, int d, double scale)
{
    Vec v(d);
    for (double& x : v) x = scale * r.normal();
    return v;
}

}  // namespace

TEST_SUITE("models")
{
    TEST_CASE("omega examples")
    {
        CHECK(omega(ModelSpec::nelson(1.0, 3), {0, 0, 0}) == 1.0);
        CHECK(omega(ModelSpec::polaron(2), {3.0, -4.0}) == 1.0);
        CHECK(omega(ModelSpec::friction(1, 1), {2.5}) == 2.5);
        CHECK(omega(ModelSpec::friction(1, 2), {1.5, 2.0}) == doctest::Approx(2.5));
        CHECK(throws_kind(ErrorKind::input, [] { omega(ModelSpec::nelson(1.0, 3), {1.0}); }));
    }

    TEST_CASE("omega is nonnegative and at least m")
    {
        CounterRng r(3);
        ModelSpec nel = ModelSpec::nelson(0.7, 3);
        for (int i = 0; i < 10000; ++i) {
            Vec k = random_vec(r, 3, 5.0);
            CHECK(omega(nel, k) >= 0.7);
        }
    }

    TEST_CASE("symbol_n examples")
    {
        CHECK(symbol_n(ModelSpec::nelson(1.0, 3), {0, 0, 0}, {{0, 0, 0}}) == 1.0);
        CHECK(symbol_n(ModelSpec::polaron(1), {2.0}, {{2.0}}) == 1.0);
        CHECK(symbol_n(ModelSpec::friction(1, 1), {1.0}, {{0.0, 1.0}}) == 0.0);
        CHECK(vacuum_energy({0, 0, 2}) == 2.0);
        CHECK(throws_kind(ErrorKind::input, [] { symbol_n(ModelSpec::polaron(3), {0, 0, 1}, {}); }));
    }

    TEST_CASE("symbol_n is permutation invariant and bounded below by the threshold")
    {
        CounterRng r(4);
        ModelSpec nel = ModelSpec::nelson(1.0, 3);
        Vec P{0.3, -0.4, 1.7};
        for (int i = 0; i < 2000; ++i) {
            int n = 1 + static_cast<int>(r.below(4));
            std::vector<Vec> ks;
            for (int j = 0; j < n; ++j) ks.push_back(random_vec(r, 3, 1.0));
            double h = symbol_n(nel, P, ks);
            std::vector<Vec> rev(ks.rbegin(), ks.rend());
            CHECK(symbol_n(nel, P, rev) == doctest::Approx(h).epsilon(1e-14));
            CHECK(h >= threshold(nel, n, P) - 1e-10);
        }
    }

    TEST_CASE("model validation")
    {
        CHECK(throws_kind(ErrorKind::input, [] { ModelSpec::nelson(0.0, 3).validate(); }));
        CHECK(throws_kind(ErrorKind::input, [] { ModelSpec::friction(1, 0).validate(); }));
        CHECK(throws_kind(ErrorKind::input, [] { ModelSpec::polaron(0).validate(); }));
        ModelSpec p = ModelSpec::polaron(3);
        p.q = 1;
        CHECK(throws_kind(ErrorKind::input, [&] { p.validate(); }));
        CHECK(model_kind_from_string("nelson") == ModelKind::nelson_massive);
        CHECK(throws_kind(ErrorKind::input, [] { model_kind_from_string("vector_boson"); }));
    }

    TEST_CASE("kernel_eval examples")
    {
        ModelSpec pol = ModelSpec::polaron(3);
        KernelSpec g;
        g.form = KernelForm::gaussian;
        CHECK(kernel_eval(g, pol, {0, 0, 0}) == 1.0);
        g.amplitude = 2.0;
        CHECK(kernel_eval(g, pol, {0, 1, 0}) == doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-15));
        KernelSpec pw;
        pw.form = KernelForm::power_law;
        pw.mu = 0.0;
        pw.width = INFINITY;
        CHECK(kernel_eval(pw, pol, {3, 1, 4}) == 1.0);
        pw.mu = 1.0;
        CHECK(kernel_eval(pw, pol, {0, 3, 4}) == doctest::Approx(5.0));
    }

    TEST_CASE("kernel support restrictions")
    {
        ModelSpec fr = ModelSpec::friction(1, 1);
        KernelSpec c;
        c.form = KernelForm::constant;
        c.k_max = 0.5;
        c.xi_max = 1.0;
        CHECK(kernel_eval(c, fr, {0.4, 0.9}) == 1.0);
        CHECK(kernel_eval(c, fr, {0.6, 0.9}) == 0.0);
        CHECK(kernel_eval(c, fr, {0.4, -1.1}) == 0.0);
    }

    TEST_CASE("tabulated kernels interpolate multilinearly and refuse to extrapolate")
    {
        ModelSpec pol = ModelSpec::polaron(2);
        KernelSpec t;
        t.form = KernelForm::tabulated;
        t.table.axes = {{0.0, 1.0, 2.0}, {-1.0, 1.0}};
        // f = 1 + x + 2 y on the nodes, so interpolation reproduces it exactly
        for (double x : t.table.axes[0])
            for (double y : t.table.axes[1]) t.table.values.push_back(1.0 + x + 2.0 * y);
        t.validate(pol);
        CHECK(kernel_eval(t, pol, {0.25, 0.5}) == doctest::Approx(1.0 + 0.25 + 1.0));
        CHECK(kernel_eval(t, pol, {1.75, -0.2}) == doctest::Approx(1.0 + 1.75 - 0.4));
        CHECK(throws_kind(ErrorKind::range, [&] { kernel_eval(t, pol, {2.5, 0.0}); }));
        t.table.values.pop_back();
        CHECK(throws_kind(ErrorKind::input, [&] { t.validate(pol); }));
    }

    TEST_CASE("kernel validation of the infrared exponent")
    {
        KernelSpec pw;
        pw.form = KernelForm::power_law;
        pw.mu = -0.2;
        CHECK(throws_kind(ErrorKind::input, [&] { pw.validate(ModelSpec::friction(1, 1)); }));
        pw.validate(ModelSpec::friction(1, 2));
        pw.mu = -1.6;
        CHECK(throws_kind(ErrorKind::input, [&] { pw.validate(ModelSpec::polaron(3)); }));
        KernelSpec g;
        g.width = -1.0;
        CHECK(throws_kind(ErrorKind::input, [&] { g.validate(ModelSpec::polaron(3)); }));
    }
}
