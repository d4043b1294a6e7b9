#include <cmath>

#include "cherenkov/errors.hpp"
#include "cherenkov/rng.hpp"
#include "cherenkov/thresholds.hpp"
#include "doctest.h"

using namespace cherenkov;

namespace {

Vec z(double p) { return {0.0, 0.0, p}; }

bool throws_kind(ErrorKind kind, const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

}  // namespace

TEST_SUITE("thresholds")
{
    const ModelSpec nel = ModelSpec::nelson(1.0, 3);
    const ModelSpec pol = ModelSpec::polaron(3);

    TEST_CASE("solve_c examples")
    {
        CHECK(solve_c(nel, 1, z(0.0)) == 0.0);
        double c = solve_c(nel, 1, z(2.0));
        CHECK(c > 0.0);
        CHECK(c < 1.0);
        CHECK(std::abs(c - (2.0 - c) / std::sqrt(1.0 + (2.0 - c) * (2.0 - c))) < 1e-12);
        CHECK(std::abs(solve_c(nel, 1, z(1e3)) - 1.0) < 1e-2);
        CHECK(throws_kind(ErrorKind::unsupported_model, [&] { solve_c(pol, 1, z(1.0)); }));
    }

    TEST_CASE("solve_c residual and range over random momenta")
    {
        CounterRng r(9);
        for (int i = 0; i < 500; ++i) {
            double m = 0.2 + 2.0 * r.uniform();
            int n = 1 + static_cast<int>(r.below(8));
            double p = 10.0 * r.uniform();
            ModelSpec model = ModelSpec::nelson(m, 3);
            double c = solve_c(model, n, z(p));
            CHECK(c >= 0.0);
            CHECK(c < std::max(std::min(p, 1.0), 1e-300));
            if (p > 0.0) CHECK(std::abs(c - (p - c) / std::sqrt(m * m * n * n + (p - c) * (p - c))) < 1e-12);
        }
    }

    TEST_CASE("threshold examples")
    {
        for (int n = 1; n <= 5; ++n) CHECK(threshold(ModelSpec::nelson(0.7, 3), n, z(0.0)) == doctest::Approx(0.7 * n));
        CHECK(threshold(pol, 3, z(5.0)) == 3.0);
        CHECK(std::abs(threshold(nel, 1, z(1e3)) - (1e3 - 0.5)) < 5e-3);
        CHECK(threshold(ModelSpec::friction(1, 1), 4, {2.0}) == 0.0);
    }

    TEST_CASE("threshold lies below the sampled symbol")
    {
        CounterRng r(10);
        for (int n = 1; n <= 3; ++n)
            for (double p : {0.5, 2.0, 4.0}) {
                double E = threshold(nel, n, z(p));
                for (int i = 0; i < 20000; ++i) {
                    std::vector<Vec> ks(n, Vec(3));
                    for (Vec& k : ks)
                        for (double& x : k) x = 2.0 * r.normal();
                    CHECK(E <= symbol_n(nel, z(p), ks) + 1e-12);
                }
            }
    }

    TEST_CASE("k_star is the minimizer")
    {
        CHECK(norm(k_star(nel, 2, z(0.0))) == 0.0);
        Vec P = {1.0, 2.0, 2.0};
        Vec ks = k_star(nel, 2, P);
        double ratio = ks[0] / P[0];
        CHECK(ratio >= 0.0);
        for (int i = 0; i < 3; ++i) CHECK(ks[i] == doctest::Approx(ratio * P[i]));
        double at_star = symbol_n(nel, P, {ks, ks});
        CHECK(at_star == doctest::Approx(threshold(nel, 2, P)).epsilon(1e-13));
        CounterRng r(11);
        for (int i = 0; i < 10000; ++i) {
            std::vector<Vec> cfg(2, Vec(3));
            for (Vec& k : cfg)
                for (int a = 0; a < 3; ++a) k[a] = ks[a] + r.normal();
            CHECK(at_star <= symbol_n(nel, P, cfg) + 1e-9);
        }
        Vec kp = k_star(pol, 4, P);
        for (int i = 0; i < 3; ++i) CHECK(kp[i] == doctest::Approx(P[i] / 4));
    }

    TEST_CASE("p_star and p_n")
    {
        CHECK(std::abs(p_star(pol) - std::sqrt(2.0)) < 1e-9);
        double ps = p_star(nel);
        CHECK(ps > 1.0);
        CHECK(std::abs(0.5 * ps * ps - threshold_abs(nel, 1, ps)) < 1e-10);
        CHECK(p_n(nel, 1) == ps);
        CHECK(p_n(pol, 2) == doctest::Approx(2.0).epsilon(1e-12));
        for (int n = 1; n <= 6; ++n) CHECK(p_n(nel, n + 1) > p_n(nel, n));
        CHECK(throws_kind(ErrorKind::unsupported_model, [] { p_star(ModelSpec::friction(1, 1)); }));
        CHECK(throws_kind(ErrorKind::unsupported_model, [] { p_n(ModelSpec::friction(1, 1), 2); }));
    }

    TEST_CASE("n_p")
    {
        CHECK(n_p(pol, z(std::sqrt(3.0))) == 1);
        CHECK(n_p(pol, z(2.1)) == 2);
        CHECK(n_p(nel, z(p_n(nel, 4) + 0.01)) == 4);
        CHECK(throws_kind(ErrorKind::below_critical, [&] { n_p(nel, z(1.0)); }));
    }

    TEST_CASE("alpha")
    {
        CHECK(std::abs(alpha(nel, 3, z(p_n(nel, 3)))) < 1e-9);
        CHECK(alpha(pol, 1, z(2.0)) == 1.0);
        for (double p : {2.0, 3.0, 5.0}) {
            int np = n_p(nel, z(p));
            CHECK(alpha(nel, np, z(p)) >= 0.0);
            for (int n = np + 1; n <= np + 4; ++n) CHECK(alpha(nel, n, z(p)) <= 0.0);
        }
    }

    TEST_CASE("threshold table")
    {
        ThresholdTable t = threshold_table(nel, z(2.0), 5);
        REQUIRE(t.rows.size() == 5);
        for (std::size_t i = 1; i < t.rows.size(); ++i) {
            double inc = t.rows[i].E - t.rows[i - 1].E;
            CHECK(inc > 0.0);
            CHECK(inc <= 1.0);
        }
        CHECK(throws_kind(ErrorKind::input, [&] { threshold_table(nel, z(2.0), 0); }));
    }

    TEST_CASE("monotonicity lemma")
    {
        std::vector<Vec> grid;
        for (double p : {0.5, 1.0, 2.0, 4.0, 8.0}) grid.push_back(z(p));
        MonotonicityReport rep = check_monotonicity(nel, grid, 6);
        CHECK(rep.pass());
        for (std::size_t i = 1; i < rep.p_abs.size(); ++i) CHECK(rep.increments[i][0] < rep.increments[i - 1][0]);
        CHECK(std::abs(threshold(nel, 21, z(1.0)) - threshold(nel, 20, z(1.0)) - 1.0) < 1e-2);
        CHECK(throws_kind(ErrorKind::unsupported_model, [&] { check_monotonicity(pol, grid, 3); }));
    }

    TEST_CASE("derivative lemma")
    {
        Vec rs;
        for (int i = 1; i <= 100; ++i) rs.push_back(0.1 + 1.9 * i / 100.0);
        DerivativeReport rep = check_derivative_bound(nel, 1, rs);
        CHECK(rep.pass());
        CHECK(rep.max_slope <= 1.0 + 1e-6);
        CHECK(rep.max_f_excess <= 1e-8);
        CHECK(rep.endpoint_error < 1e-8);
        CHECK(throws_kind(ErrorKind::input, [&] { check_derivative_bound(nel, 1, {2.5}); }));
        CHECK(throws_kind(ErrorKind::input, [&] { check_derivative_bound(nel, 1, {0.0}); }));
    }
}
