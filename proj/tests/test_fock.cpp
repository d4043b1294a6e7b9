#include <cmath>

#include "cherenkov/errors.hpp"
#include "cherenkov/fock.hpp"
#include "doctest.h"

using namespace cherenkov;

namespace {

KernelSpec gaussian()
{
    KernelSpec k;
    k.form = KernelForm::gaussian;
    return k;
}

}  // namespace

TEST_SUITE("fock")
{
    TEST_CASE("basis dimensions")
    {
        CHECK(fock_dimension(1, 2) == 3);
        CHECK(fock_dimension(7, 1) == 8);
        CHECK(fock_dimension(4, 2) == 15);
        CHECK(fock_dimension(10, 0) == 1);
        FockBasis b = build_basis(GridSpec::uniform(2, 1.0, 2), 2);
        CHECK(b.size() == 15);
        CHECK(b.states[0].empty());
        CHECK(b.sector_begin[1] == 1);
        CHECK(b.sector_begin[2] == 5);
        for (std::size_t s = 0; s < b.size(); ++s) CHECK(b.find(b.states[s]) == s);
        CHECK(b.find({0, 0, 0}) == b.size());
    }

    TEST_CASE("basis budget and grid validation")
    {
        CHECK_THROWS_AS(build_basis(GridSpec::uniform(3, 1.0, 20), 3, 1000), Error);
        try {
            build_basis(GridSpec::uniform(3, 1.0, 20), 3, 1000);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::capacity);
        }
        CHECK_THROWS_AS(GridSpec::uniform(1, -1.0, 4).validate(), Error);
    }

    TEST_CASE("grid nodes and weight")
    {
        GridSpec g = GridSpec::uniform(1, 1.0, 4);
        CHECK(g.node(0, 0) == doctest::Approx(-0.75));
        CHECK(g.node(0, 3) == doctest::Approx(0.75));
        CHECK(g.weight() == doctest::Approx(0.5 / (2 * M_PI)));
        GridSpec f = GridSpec::friction(1, 0.5, 1, 2.0, 4);
        CHECK(f.dim() == 2);
        CHECK(f.mode_count() == 16);
        CHECK(f.mode(1)[1] == doctest::Approx(f.node(1, 1)));
    }

    TEST_CASE("operators on a small basis")
    {
        ModelSpec pol = ModelSpec::polaron(1, 0.3);
        GridSpec g = GridSpec::uniform(1, 2.0, 5);
        FockBasis b = build_basis(g, 2);
        Vec P{1.5};
        SparseOperator h0 = assemble_H0(pol, P, b);
        SparseOperator phi = assemble_field(gaussian(), pol, b);
        SparseOperator num = assemble_number(b);
        CHECK(h0.at(0, 0).real() == doctest::Approx(1.125));
        for (std::size_t s = 1; s < b.sector_begin[2]; ++s) {
            double k = b.modes[b.states[s][0]][0];
            CHECK(h0.at(s, s).real() == doctest::Approx(1.0 + 0.5 * (1.5 - k) * (1.5 - k)));
            CHECK(num.at(s, s).real() == 1.0);
            double amp = std::exp(-0.5 * k * k) * std::sqrt(g.weight());
            CHECK(phi.at(s, 0).real() == doctest::Approx(amp));
            CHECK(phi.at(0, s) == phi.at(s, 0));
        }
        // double occupation picks up sqrt(2)
        std::size_t two = b.find({2, 2});
        std::size_t one = b.find({2});
        CHECK(phi.at(two, one).real() == doctest::Approx(std::sqrt(2.0) * phi.at(one, 0).real()));
        CHECK(phi.at(two, 0) == 0.0);
        CHECK(hermitian_defect(phi) == 0.0);
        CHECK(phi.is_real());
        SparseOperator h = assemble_hamiltonian(pol, gaussian(), P, b);
        CHECK(h.hermitian);
        CHECK(h.at(one, 0).real() == doctest::Approx(0.3 * phi.at(one, 0).real()));
    }

    TEST_CASE("apply agrees with at")
    {
        FockBasis b = build_basis(GridSpec::uniform(1, 1.0, 4), 2);
        SparseOperator phi = assemble_field(gaussian(), ModelSpec::nelson(1.0, 1), b);
        CVec x(b.size()), y;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = cplx(1.0 + i, -0.5 * i);
        phi.apply(x, y);
        for (std::size_t r = 0; r < b.size(); ++r) {
            cplx s = 0.0;
            for (std::size_t c = 0; c < b.size(); ++c) s += phi.at(r, c) * x[c];
            CHECK(std::abs(s - y[r]) < 1e-13);
        }
    }

    TEST_CASE("hermitian flag is enforced")
    {
        SparseOperator bad = from_triplets(2, {{0, 1, cplx(1.0, 0.0)}}, "bad", true);
        CHECK(hermitian_defect(bad) == 1.0);
        CHECK_THROWS_AS(check_hermitian(bad), Error);
        SparseOperator ok = from_triplets(2, {{0, 1, cplx(0.0, 1.0)}, {1, 0, cplx(0.0, -1.0)}}, "ok", true);
        CHECK(hermitian_defect(ok) == 0.0);
        CHECK_FALSE(ok.is_real());
    }

    TEST_CASE("friction commutator")
    {
        ModelSpec fr = ModelSpec::friction(1, 1);
        GridSpec g = GridSpec::friction(1, 1.0, 1, 2.0, 8);
        FockBasis b = build_basis(g, 2);
        Vec P{1.0};
        ChiDelta chi(0.1);
        SparseOperator K = assemble_commutator_friction(fr, P, chi, b);
        CHECK(K.hermitian);
        CHECK(hermitian_defect(K) < 1e-12);
        for (std::size_t c = 0; c < b.size(); ++c) CHECK(K.at(0, c) == 0.0);
        SparseOperator H0 = assemble_H0(fr, P, b);
        CommutatorSpotCheck spot = commutator_spot_check(K, H0, P, 0.1, 200, 5);
        CHECK(spot.pass);
        CHECK(spot.verified_C <= spot.theory_C);
        CHECK_THROWS_AS(assemble_commutator_friction(fr, P, chi, build_basis(g, 3)), Error);
        CHECK_THROWS_AS(assemble_commutator_friction(ModelSpec::polaron(1), P, chi, b), Error);
    }

    TEST_CASE("conjugate positions are centred")
    {
        GridSpec g = GridSpec::friction(1, 1.0, 1, 2.0, 8);
        Vec y = conjugate_positions(g, 1);
        REQUIRE(y.size() == 8);
        CHECK(y[0] == doctest::Approx(-y[7]));
    }
}
