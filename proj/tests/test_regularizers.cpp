#include <algorithm>
#include <cmath>

#include "cherenkov/errors.hpp"
#include "cherenkov/regularizers.hpp"
#include "cherenkov/rng.hpp"
#include "doctest.h"

using namespace cherenkov;

TEST_SUITE("regularizers")
{
    TEST_CASE("chi examples")
    {
        for (double delta : {0.05, 0.3, 1.0, 4.0}) {
            ChiDelta c(delta);
            CHECK(chi(c, 0.0) == 0.0);
            CHECK(chi(c, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(chi(c, -1.0) == doctest::Approx(-1.0).epsilon(1e-12));
            CHECK(chi(c, 7.0) == 1.0);
            CHECK(chi(c, -0.3) == -chi(c, 0.3));
            CHECK(c.derivative(0.0) == doctest::Approx(1.0 + 0.5 * std::min(delta, 1.0)));
            CHECK(c.derivative(1.5) == 0.0);
        }
        CHECK_THROWS_AS(ChiDelta(0.0), Error);
        CHECK_THROWS_AS(ChiDelta(-1.0), Error);
    }

    TEST_CASE("chi derivative matches finite differences")
    {
        ChiDelta c(0.3);
        for (double s = -1.2; s <= 1.2; s += 0.0173) {
            double h = 1e-6;
            double fd = (chi(c, s + h) - chi(c, s - h)) / (2 * h);
            CHECK(fd == doctest::Approx(c.derivative(s)).epsilon(1e-6).scale(1.0));
            double fd2 = (c.derivative(s + h) - c.derivative(s - h)) / (2 * h);
            CHECK(std::abs(fd2 - c.second_derivative(s)) < 1e-4 * (1.0 + std::abs(fd2)));
        }
    }

    TEST_CASE("chi property battery")
    {
        for (double delta : {0.05, 0.3, 1.0}) {
            ChiReport rep = chi_property_check(ChiDelta(delta), 20000, 3);
            CHECK(rep.pass());
            CHECK(!rep.properties.empty());
        }
    }

    TEST_CASE("m_signed picks the coordinate of largest magnitude")
    {
        CHECK(m_signed({1.0, -3.0, 2.0}) == -3.0);
        CHECK(m_signed({1.0, -0.5, 2.0}) == 2.0);
        CHECK(m_signed({1.0, -1.0}) == 0.0);
        CHECK_THROWS_AS(m_signed({}), Error);
    }

    TEST_CASE("m_tilde lies between the extremes and equals m_signed away from balance")
    {
        ChiDelta c(0.1);
        CounterRng r(4);
        for (int i = 0; i < 10000; ++i) {
            Vec zs(1 + r.below(6));
            for (double& z : zs) z = 3.0 * r.normal();
            double mx = *std::max_element(zs.begin(), zs.end());
            double mn = *std::min_element(zs.begin(), zs.end());
            double mt = m_tilde(c, zs);
            CHECK(mt <= mx + 1e-12);
            CHECK(mt >= mn - 1e-12);
            if (std::abs(mx + mn) >= 1.0 + (mx - mn)) CHECK(mt == doctest::Approx(m_signed(zs)).epsilon(1e-12));
        }
        CHECK(m_tilde(c, {2.5}) == 2.5);
    }

    TEST_CASE("s_tilde reduces to the sum when j covers every coordinate")
    {
        ChiDelta c(0.2);
        CHECK(s_tilde(c, 3, {1.0, 2.0, -4.0}) == -1.0);
        CHECK(s_tilde(c, 1, {5.0, -1.0}) == doctest::Approx(m_tilde(c, {5.0, -1.0})));
        CHECK_THROWS_AS(s_tilde(c, 0, {1.0}), Error);
        Vec zs{0.3, -2.0, 1.1, 4.0};
        Vec ps{4.0, 1.1, 0.3, -2.0};
        CHECK(s_tilde(c, 2, zs) == s_tilde(c, 2, ps));
    }

    TEST_CASE("closed form gradient matches central differences")
    {
        ChiDelta c(0.3);
        CounterRng r(5);
        for (int i = 0; i < 2000; ++i) {
            int ell = 2 + static_cast<int>(r.below(6));
            int j = 1 + static_cast<int>(r.below(ell - 1));
            Vec zs(ell);
            for (double& z : zs) z = 2.0 * r.normal();
            CHECK(std::abs(grad_sum(c, j, zs) - grad_sum_exact(c, j, zs)) < 1e-6);
        }
    }

    TEST_CASE("gradient, smoothness and insertion batteries")
    {
        ChiDelta c(0.1);
        for (int j = 1; j <= 3; ++j) {
            GradReport g = grad_bound_check(c, j, j + 2, 5000, 7);
            CHECK(g.pass());
            CHECK(g.min_value >= g.lower);
            CHECK(g.max_value <= g.upper);
            CHECK(g.max_fd_mismatch < 1e-5);
            SmoothnessReport s = smoothness_check(c, j, j + 2, 5000, 8);
            CHECK(s.pass());
            CHECK(s.max_second <= s.bound);
        }
        InsertionReport ins = insertion_bound_check(c, 2, 1, 6, 5000, 9);
        CHECK(ins.pass());
        CHECK(ins.worst_ratio <= 1.0 + 1e-9);
    }

    TEST_CASE("battery results are independent of the sample partition")
    {
        ChiDelta c(0.3);
        GradReport a = grad_bound_check(c, 2, 5, 3000, 21);
        GradReport b = grad_bound_check(c, 2, 5, 3000, 21);
        CHECK(a.min_value == b.min_value);
        CHECK(a.max_value == b.max_value);
    }
}
