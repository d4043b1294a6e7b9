#include <cmath>

#include "cherenkov/config.hpp"
#include "cherenkov/errors.hpp"
#include "doctest.h"

using namespace cherenkov;

namespace {

ErrorKind kind_of(const std::string& text)
{
    try {
        parse_config(text).validate();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::numeric;
}

}  // namespace

TEST_SUITE("config")
{
    TEST_CASE("defaults")
    {
        ExperimentConfig c = parse_config("");
        CHECK(c.model.kind == ModelKind::polaron);
        CHECK(c.P == Vec{0.0, 0.0, 1.0});
        c.validate();
        CHECK(c.seed == 20240611);
        CHECK(c.fermi_eps.size() == 3);
    }

    TEST_CASE("parsing")
    {
        ExperimentConfig c = parse_config(
            "# friction run\n"
            "model = friction\n"
            "d = 1\n"
            "q = 2\n"
            "g = 0.25   # trailing comment\n"
            "P = 1.5\n"
            "kernel = power_law\n"
            "kernel.mu = 0.5\n"
            "kernel.xi_max = 2\n"
            "grid.points = 8\n"
            "mourre.interval = 0.2, 1.5\n"
            "fermi.eps = 0.4,0.2\n"
            "evolve.filter = true\n");
        CHECK(c.model.kind == ModelKind::friction);
        CHECK(c.model.q == 2);
        CHECK(c.model.g == 0.25);
        CHECK(c.P == Vec{1.5});
        CHECK(c.kernel.form == KernelForm::power_law);
        CHECK(c.kernel.mu == 0.5);
        CHECK(c.kernel.xi_max == 2.0);
        CHECK(c.interval_lo == 0.2);
        CHECK(c.interval_hi == 1.5);
        CHECK(c.fermi_eps == Vec{0.4, 0.2});
        CHECK(c.filter);
        CHECK(c.grid().dim() == 3);
    }

    TEST_CASE("rejections")
    {
        CHECK(kind_of("colour = red\n") == ErrorKind::input);
        CHECK(kind_of("g = 1\ng = 2\n") == ErrorKind::input);
        CHECK(kind_of("g = abc\n") == ErrorKind::input);
        CHECK(kind_of("grid.points = -3\n") == ErrorKind::input);
        CHECK(kind_of("just a line\n") == ErrorKind::input);
        CHECK(kind_of("P = 1, 2\n") == ErrorKind::input);
        CHECK(kind_of("schema_version = 2\n") == ErrorKind::input);
        CHECK(kind_of("fermi.eps = 0.1, 0.2\n") == ErrorKind::input);
        CHECK(kind_of("model = pion\n") == ErrorKind::input);
        ExperimentConfig c;
        CHECK_THROWS_AS(apply_setting(c, "nope", "1"), Error);
    }

    TEST_CASE("text round-trip reproduces the resolved config")
    {
        ExperimentConfig c = parse_config("model = nelson\nm = 0.5\nP = 0, 0, 3\nseed = 7\n");
        ExperimentConfig back = parse_config(config_text(c));
        CHECK(config_json(back) == config_json(c));
        CHECK(config_json(c)["model"] == "nelson_massive");
        CHECK(config_json(c)["seed"] == 7);
    }

    TEST_CASE("command line settings override")
    {
        ExperimentConfig c = parse_config("g = 0.1\n");
        apply_setting(c, "g", "0.2");
        CHECK(c.model.g == 0.2);
        CHECK_FALSE(config_keys().empty());
    }
}
