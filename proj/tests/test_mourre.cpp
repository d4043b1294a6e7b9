#include <cmath>

#include "cherenkov/errors.hpp"
#include "cherenkov/mourre.hpp"
#include "cherenkov/thresholds.hpp"
#include "doctest.h"

using namespace cherenkov;

TEST_SUITE("mourre")
{
    TEST_CASE("commutator symbol vanishes at the minimizer")
    {
        ModelSpec nel = ModelSpec::nelson(1.0, 3);
        Vec P{0.0, 0.0, 3.0};
        for (int n = 1; n <= 3; ++n) {
            Vec ks = k_star(nel, n, P);
            std::vector<Vec> cfg(n, ks);
            CHECK(std::abs(nelson_commutator_symbol(nel, P, n, cfg)) < 1e-12);
        }
        CHECK_THROWS_AS(nelson_commutator_symbol(nel, P, 1, {{0, 0, 1}, {0, 0, 1}}), Error);
    }

    TEST_CASE("symbol inequalities for the polaron hold everywhere sampled")
    {
        ModelSpec pol = ModelSpec::polaron(3);
        for (int n = 1; n <= 2; ++n) {
            NelsonSymbolReport rep = nelson_symbol_inequality_check(pol, {0, 0, 2}, n, 5000, 1);
            CHECK(rep.step2.pass);
            CHECK(rep.step3.pass);
            CHECK(rep.theorem_level);
            CHECK(std::abs(rep.minimizer_margin) < 1e-10);
        }
    }

    TEST_CASE("symbol inequalities for nelson at theorem level")
    {
        ModelSpec nel = ModelSpec::nelson(1.0, 3);
        double p = p_n(nel, 2) + 0.1;
        NelsonSymbolReport rep = nelson_symbol_inequality_check(nel, {0, 0, p}, 2, 5000, 2);
        CHECK(n_p(nel, {0, 0, p}) == 2);
        CHECK(rep.theorem_level);
        CHECK(rep.step2.pass);
        CHECK(rep.step3.pass);
        CHECK(rep.step2.min_margin >= -rep.step2.tolerance);
    }

    TEST_CASE("step 4 identities")
    {
        ModelSpec nel = ModelSpec::nelson(1.0, 3);
        for (int n = 1; n <= 4; ++n) {
            Step4Report s = step4_bound_check(nel, n);
            CHECK(s.pass);
            CHECK(s.identity_residual < 1e-8);
            CHECK(s.alpha_formula_residual < 1e-8);
            CHECK(s.f_decreasing_in_c);
            CHECK(s.p_next == doctest::Approx(p_n(nel, n + 1)));
        }
    }

    TEST_CASE("left endpoint")
    {
        double v = friction_mourre_left_endpoint(0.1, 0.05, {2.0});
        double a = 1.1 / 3.1 + 0.05;
        CHECK(v == doctest::Approx(a * a * 2.0));
    }

    TEST_CASE("friction matrix check")
    {
        ModelSpec fr = ModelSpec::friction(1, 1);
        FockBasis b = build_basis(GridSpec::friction(1, 2.0, 1, 3.0, 16), 1);
        ChiDelta chi(0.1);
        MourreReport ok = friction_mourre_matrix_check(fr, {1.0}, chi, b, 0.2, 1.5, 0.05);
        CHECK(ok.pass);
        CHECK(ok.status == "ok");
        CHECK(ok.samples > 0);
        MourreReport out = friction_mourre_matrix_check(fr, {1.0}, chi, b, 0.01, 1.5, 0.05);
        CHECK_FALSE(out.pass);
        CHECK(out.status == "outside guaranteed region");
        try {
            friction_mourre_matrix_check(fr, {1.0}, chi, b, 40.0, 41.0, 0.05);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::degenerate_interval);
        }
        CHECK_THROWS_AS(friction_mourre_matrix_check(ModelSpec::polaron(1), {1.0}, chi, b, 0.2, 1.5, 0.05), Error);
    }

    TEST_CASE("min eigenvalue on a row subset")
    {
        SparseOperator op = from_triplets(3,
                                          {{0, 0, 2.0}, {1, 1, 3.0}, {2, 2, -1.0}, {0, 1, 1.0}, {1, 0, 1.0}},
                                          "m", true);
        CHECK(min_eigenvalue(op, {0, 1}) == doctest::Approx(2.5 - std::sqrt(1.25)));
        CHECK(min_eigenvalue(op, {0, 1, 2}) == doctest::Approx(-1.0));
        CHECK_THROWS_AS(min_eigenvalue(op, {}), Error);
    }
}
