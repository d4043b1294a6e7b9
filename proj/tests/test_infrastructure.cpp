#include <cmath>
#include <numeric>

#include "cherenkov/errors.hpp"
#include "cherenkov/parallel.hpp"
#include "cherenkov/quadrature.hpp"
#include "cherenkov/rng.hpp"
#include "doctest.h"

using namespace cherenkov;

TEST_SUITE("infrastructure")
{
    TEST_CASE("counter rng is a pure function of seed, stream and position")
    {
        CounterRng a(42, 3), b(42, 3), c(42, 4);
        for (int i = 0; i < 100; ++i) {
            std::uint64_t x = a.next_u64();
            CHECK(x == b.next_u64());
            CHECK(x != c.next_u64());
        }
        CounterRng s1 = CounterRng(7).split(11), s2 = CounterRng(7).split(11);
        CHECK(s1.uniform() == s2.uniform());
    }

    TEST_CASE("rng distributions have the right first moments")
    {
        CounterRng r(1);
        double su = 0.0, sn = 0.0, sn2 = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            double u = r.uniform();
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
            su += u;
            double z = r.normal();
            sn += z;
            sn2 += z * z;
        }
        CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
        CHECK(std::abs(sn / n) < 0.01);
        CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
        for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7);
    }

    TEST_CASE("parallel_for results do not depend on the worker count")
    {
        std::vector<double> a(10000), b(10000);
        auto fill = [](std::vector<double>& v) {
            parallel_for(v.size(), [&](std::size_t lo, std::size_t hi) {
                for (std::size_t i = lo; i < hi; ++i) v[i] = CounterRng(5).split(i).normal();
            });
        };
        set_max_workers(1);
        fill(a);
        set_max_workers(4);
        fill(b);
        set_max_workers(0);
        CHECK(a == b);
        CHECK(pairwise_sum(a) == pairwise_sum(b));
    }

    TEST_CASE("pairwise sum")
    {
        std::vector<double> v(1000, 0.1);
        CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
        CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    }

    TEST_CASE("gauss-legendre is exact for polynomials of degree 2n-1")
    {
        Rule1d r = gauss_legendre(5, 0.0, 2.0);
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 9);
        CHECK(s == doctest::Approx(std::pow(2.0, 10) / 10).epsilon(1e-13));
    }

    TEST_CASE("sphere rules integrate constants and low moments")
    {
        for (int d = 1; d <= 3; ++d) {
            SphereRule s = sphere_rule(d, 3);
            double area = std::accumulate(s.weights.begin(), s.weights.end(), 0.0);
            CHECK(area == doctest::Approx(sphere_area(d)).epsilon(1e-13));
        }
        SphereRule s = sphere_rule(3, 4, {1.0, 1.0, 0.0});
        double zz = 0.0;
        for (std::size_t i = 0; i < s.weights.size(); ++i) zz += s.weights[i] * s.directions[i][2] * s.directions[i][2];
        CHECK(zz == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
    }

    TEST_CASE("adaptive integration with breakpoints and an infinite tail")
    {
        QuadResult r = integrate([](double x) { return std::exp(-x); }, 0.0, INFINITY);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
        QuadResult k = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-12, {0.3});
        CHECK(k.value == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-13));
    }

    TEST_CASE("error kinds map to exit codes")
    {
        CHECK(exit_code(ErrorKind::input) == 2);
        CHECK(exit_code(ErrorKind::range) == 2);
        CHECK(exit_code(ErrorKind::capacity) == 2);
        CHECK(exit_code(ErrorKind::numeric) == 3);
        CHECK(exit_code(ErrorKind::underflow) == 3);
        try {
            fail(ErrorKind::range, "here", "msg");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::range);
            CHECK(e.where() == "here");
            CHECK(std::string(e.what()).find("msg") != std::string::npos);
        }
    }
}
